#pragma once

#include <optional>
#include <string>
#include <vector>

#include "instance.hpp"

namespace dcds {

// Finite, explicit-state, database-labeled transition system. States carry an
// optional annotation string (serialized service-call map or equality
// commitment); the engines that build the system stamp it on, bisimulation
// ignores it, exporters preserve it.
class TransitionSystem {
public:
  struct State {
    Instance db;
    std::string annotation;  // empty when absent
  };
  struct Edge {
    int src = 0;
    int dst = 0;
    std::string label;

    friend bool operator<(const Edge& a, const Edge& b) {
      if (a.src != b.src) return a.src < b.src;
      if (a.dst != b.dst) return a.dst < b.dst;
      return a.label < b.label;
    }
    friend bool operator==(const Edge& a, const Edge& b) {
      return a.src == b.src && a.dst == b.dst && a.label == b.label;
    }
  };

  int add_state(Instance db, std::string annotation = "");
  void add_edge(int src, int dst, std::string label = "");
  void set_initial(int s);

  int initial() const { return initial_; }
  size_t state_count() const { return states_.size(); }
  size_t edge_count() const { return edges_.size(); }
  const State& state(int i) const { return states_.at(i); }
  const std::vector<State>& states() const { return states_; }
  const std::vector<Edge>& edges() const { return edges_; }
  const std::vector<int>& successors(int s) const { return succ_.at(s); }

  // Union of the active domains of all state databases.
  std::set<Term> adom() const;

  friend bool operator==(const TransitionSystem& a, const TransitionSystem& b);

private:
  std::vector<State> states_;
  std::vector<Edge> edges_;
  std::set<Edge> edge_set_;  // duplicate-edge guard
  std::vector<std::vector<int>> succ_;
  int initial_ = 0;
};

// States within the given BFS distance of the initial state, edges between
// kept states; state indices are remapped.
TransitionSystem truncate(const TransitionSystem& ts, int depth);

std::string export_dot(const TransitionSystem& ts);
std::string export_json(const TransitionSystem& ts);

struct TsImportResult {
  std::optional<TransitionSystem> ts;
  std::string error;
};
TsImportResult import_json(const std::string& json_text);

// A run is an edge-connected state sequence rooted at the initial state.
bool is_run(const TransitionSystem& ts, const std::vector<int>& states);

}  // namespace dcds
