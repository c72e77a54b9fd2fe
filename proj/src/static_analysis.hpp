#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "spec.hpp"

namespace dcds {

// Strips everything the boundedness analyses abstract away: guards become
// true (parameters turn into free variables), effect filters Q- are dropped,
// equality constraints are removed.
DcdsSpec positive_approximate(const DcdsSpec& spec);

// Dependency graph over relation positions of the positive approximate. At
// most one ordinary and one special edge per node pair.
struct DepNode {
  std::string rel;
  int pos = 0;  // 1-based

  std::string str() const { return "<" + rel + "," + std::to_string(pos) + ">"; }
  friend bool operator<(const DepNode& a, const DepNode& b) {
    if (a.rel != b.rel) return a.rel < b.rel;
    return a.pos < b.pos;
  }
  friend bool operator==(const DepNode& a, const DepNode& b) {
    return a.rel == b.rel && a.pos == b.pos;
  }
};

struct DepEdge {
  DepNode src;
  DepNode dst;
  bool special = false;

  friend bool operator<(const DepEdge& a, const DepEdge& b) {
    if (!(a.src == b.src)) return a.src < b.src;
    if (!(a.dst == b.dst)) return a.dst < b.dst;
    return a.special < b.special;
  }
  friend bool operator==(const DepEdge& a, const DepEdge& b) {
    return a.src == b.src && a.dst == b.dst && a.special == b.special;
  }
};

struct DependencyGraph {
  std::set<DepNode> nodes;
  std::set<DepEdge> edges;

  std::string dot() const;
};

struct WeakAcyclicityResult {
  DependencyGraph graph;
  bool acyclic = true;
  std::vector<DepEdge> witness_cycle;  // a cycle through a special edge
};

WeakAcyclicityResult weak_acyclicity(const DcdsSpec& spec);

// Dataflow graph over relation names; every syntactic body-atom/head-position
// occurrence contributes its own edge (distinct ids), tagged with the action
// that generated it.
struct FlowEdge {
  std::string src;
  int id = 0;
  std::string dst;
  bool special = false;
  std::set<std::string> actions;
};

struct DataflowGraph {
  std::set<std::string> nodes;
  std::vector<FlowEdge> edges;

  std::string dot() const;
};

struct GrResult {
  DataflowGraph graph;
  bool gr_acyclic = true;
  bool gr_plus_acyclic = true;
  // Witness path pi1 pi2 pi3 (edge ids) for the strongest violated notion.
  std::vector<int> witness_path;
  std::string witness_text;
  // Set when a search cap was hit; the affected verdicts are then reported
  // as violating, which keeps the sufficient condition sound.
  bool inconclusive = false;
};

struct GrOptions {
  size_t max_cycles = 20000;
  size_t max_paths = 200000;
};

GrResult gr_analysis(const DcdsSpec& spec, const GrOptions& options = {});

}  // namespace dcds
