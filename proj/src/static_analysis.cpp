#include "static_analysis.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <sstream>

namespace dcds {

DcdsSpec positive_approximate(const DcdsSpec& spec) {
  DcdsSpec out = spec;
  out.constraints.clear();
  for (Action& a : out.actions) {
    a.params.clear();
    for (EffectSpec& e : a.effects) {
      e.body = e.positive_body();
    }
  }
  for (ConditionActionRule& r : out.process) {
    r.guard = Formula::truth();
  }
  return out;
}

namespace {

// Atoms of the positive body, including those inside UCQ disjuncts.
void collect_atoms(const FormulaPtr& f, std::vector<FormulaPtr>* out) {
  if (f->kind == Formula::Kind::Atom) {
    out->push_back(f);
    return;
  }
  for (const auto& c : f->children) collect_atoms(c, out);
  if (f->body) collect_atoms(f->body, out);
}

struct HeadOccurrence {
  std::string rel;
  int pos = 0;                 // 1-based
  bool special = false;        // value passes through a service call
  std::set<std::string> vars;  // variables feeding this position
  bool grounded = false;       // constant or variable-free position
};

std::vector<HeadOccurrence> head_occurrences(const FactTemplate& ft) {
  std::vector<HeadOccurrence> out;
  for (size_t k = 0; k < ft.args.size(); ++k) {
    const HeadArg& arg = ft.args[k];
    HeadOccurrence occ;
    occ.rel = ft.rel;
    occ.pos = static_cast<int>(k) + 1;
    switch (arg.kind) {
      case HeadArg::Kind::Var:
        occ.vars.insert(arg.var);
        break;
      case HeadArg::Kind::Const:
        occ.grounded = true;
        break;
      case HeadArg::Kind::Call:
        occ.special = true;
        for (const HeadArg& inner : arg.args) {
          if (inner.kind == HeadArg::Kind::Var) occ.vars.insert(inner.var);
        }
        if (occ.vars.empty()) occ.grounded = true;  // call over constants only
        break;
    }
    out.push_back(std::move(occ));
  }
  return out;
}

// Tarjan strongly connected components over an arbitrary node set.
template <typename Node>
std::map<Node, int> scc_of(const std::set<Node>& nodes,
                           const std::multimap<Node, Node>& edges) {
  std::map<Node, int> index, low, comp;
  std::vector<Node> stack;
  std::map<Node, bool> on_stack;
  int counter = 0;
  int comps = 0;
  std::function<void(const Node&)> strongconnect = [&](const Node& v) {
    index[v] = low[v] = counter++;
    stack.push_back(v);
    on_stack[v] = true;
    auto range = edges.equal_range(v);
    for (auto it = range.first; it != range.second; ++it) {
      const Node& w = it->second;
      if (!index.count(w)) {
        strongconnect(w);
        low[v] = std::min(low[v], low[w]);
      } else if (on_stack[w]) {
        low[v] = std::min(low[v], index[w]);
      }
    }
    if (low[v] == index[v]) {
      while (true) {
        Node w = stack.back();
        stack.pop_back();
        on_stack[w] = false;
        comp[w] = comps;
        if (w == v) break;
      }
      ++comps;
    }
  };
  for (const Node& n : nodes) {
    if (!index.count(n)) strongconnect(n);
  }
  return comp;
}

}  // namespace

std::string DependencyGraph::dot() const {
  std::ostringstream out;
  out << "digraph dependency {\n";
  for (const DepNode& n : nodes) {
    out << "  \"" << n.rel << ',' << n.pos << "\";\n";
  }
  for (const DepEdge& e : edges) {
    out << "  \"" << e.src.rel << ',' << e.src.pos << "\" -> \"" << e.dst.rel << ','
        << e.dst.pos << '"';
    if (e.special) out << " [label=\"*\"]";
    out << ";\n";
  }
  out << "}\n";
  return out.str();
}

WeakAcyclicityResult weak_acyclicity(const DcdsSpec& spec) {
  DcdsSpec pos = positive_approximate(spec);
  WeakAcyclicityResult result;
  for (const auto& [rel, arity] : spec.schema) {
    for (int i = 1; i <= arity; ++i) result.graph.nodes.insert({rel, i});
  }
  for (const Action& a : pos.actions) {
    for (const EffectSpec& e : a.effects) {
      std::vector<FormulaPtr> atoms;
      collect_atoms(e.body, &atoms);
      // Variable occurrences in the positive body: var -> positions.
      std::multimap<std::string, DepNode> body_positions;
      for (const FormulaPtr& atom : atoms) {
        for (size_t j = 0; j < atom->args.size(); ++j) {
          if (atom->args[j].is_var) {
            body_positions.emplace(atom->args[j].name,
                                   DepNode{atom->rel, static_cast<int>(j) + 1});
          }
        }
      }
      for (const FactTemplate& ft : e.head) {
        for (const HeadOccurrence& occ : head_occurrences(ft)) {
          for (const std::string& v : occ.vars) {
            auto range = body_positions.equal_range(v);
            for (auto it = range.first; it != range.second; ++it) {
              result.graph.edges.insert({it->second, {occ.rel, occ.pos}, occ.special});
            }
          }
        }
      }
    }
  }

  // A cycle through a special edge exists iff some special edge stays within
  // one strongly connected component.
  std::multimap<DepNode, DepNode> succ;
  for (const DepEdge& e : result.graph.edges) succ.emplace(e.src, e.dst);
  auto comp = scc_of(result.graph.nodes, succ);
  for (const DepEdge& e : result.graph.edges) {
    if (!e.special || comp.at(e.src) != comp.at(e.dst)) continue;
    result.acyclic = false;
    // Witness: the special edge plus a path from dst back to src.
    result.witness_cycle.push_back(e);
    std::map<DepNode, DepEdge> parent;
    std::deque<DepNode> queue{e.dst};
    std::set<DepNode> seen{e.dst};
    while (!queue.empty()) {
      DepNode u = queue.front();
      queue.pop_front();
      if (u == e.src) break;
      for (const DepEdge& f : result.graph.edges) {
        if (!(f.src == u) || seen.count(f.dst)) continue;
        seen.insert(f.dst);
        parent.emplace(f.dst, f);
        queue.push_back(f.dst);
      }
    }
    std::vector<DepEdge> path;
    DepNode cur = e.src;
    while (!(cur == e.dst)) {
      auto it = parent.find(cur);
      if (it == parent.end()) break;
      path.push_back(it->second);
      cur = it->second.src;
    }
    std::reverse(path.begin(), path.end());
    result.witness_cycle.insert(result.witness_cycle.end(), path.begin(), path.end());
    break;
  }
  return result;
}

std::string DataflowGraph::dot() const {
  std::ostringstream out;
  out << "digraph dataflow {\n";
  for (const std::string& n : nodes) out << "  \"" << n << "\";\n";
  for (const FlowEdge& e : edges) {
    out << "  \"" << e.src << "\" -> \"" << e.dst << "\" [label=\"";
    if (e.special) out << '*';
    out << '#' << e.id << "\"];\n";
  }
  out << "}\n";
  return out.str();
}

namespace {

struct FlowGraphView {
  const DataflowGraph& g;
  std::map<std::string, std::vector<int>> out_edges;  // node -> edge ids
  std::map<std::string, std::set<std::string>> reach;  // reflexive-transitive

  explicit FlowGraphView(const DataflowGraph& graph) : g(graph) {
    for (const FlowEdge& e : g.edges) out_edges[e.src].push_back(e.id);
    for (const std::string& n : g.nodes) {
      std::set<std::string>& r = reach[n];
      std::deque<std::string> queue{n};
      r.insert(n);
      while (!queue.empty()) {
        std::string u = queue.front();
        queue.pop_front();
        auto it = out_edges.find(u);
        if (it == out_edges.end()) continue;
        for (int id : it->second) {
          const std::string& w = g.edges[id].dst;
          if (r.insert(w).second) queue.push_back(w);
        }
      }
    }
  }

  const FlowEdge& edge(int id) const { return g.edges[id]; }
  bool reaches(const std::string& a, const std::string& b) const {
    auto it = reach.find(a);
    return it != reach.end() && it->second.count(b) > 0;
  }
};

// Simple cycles as edge-id sequences; only cycles whose least node is the
// start node are emitted, so each cycle appears once. Parallel edges yield
// distinct cycles.
struct CycleEnumerator {
  const FlowGraphView& view;
  size_t cap;
  std::vector<std::vector<int>> cycles;
  bool cap_hit = false;

  void run() {
    std::vector<std::string> nodes(view.g.nodes.begin(), view.g.nodes.end());
    for (const std::string& start : nodes) {
      std::vector<int> path;
      std::set<std::string> visited;
      dfs(start, start, &path, &visited);
      if (cap_hit) return;
    }
  }

  void dfs(const std::string& start, const std::string& current, std::vector<int>* path,
           std::set<std::string>* visited) {
    if (cap_hit) return;
    auto it = view.out_edges.find(current);
    if (it == view.out_edges.end()) return;
    for (int id : it->second) {
      const FlowEdge& e = view.edge(id);
      if (e.dst == start) {
        // closing edge; a self loop closes immediately
        path->push_back(id);
        cycles.push_back(*path);
        path->pop_back();
        if (cycles.size() >= cap) {
          cap_hit = true;
          return;
        }
        continue;
      }
      if (e.dst < start || visited->count(e.dst)) continue;
      visited->insert(e.dst);
      path->push_back(id);
      dfs(start, e.dst, path, visited);
      path->pop_back();
      visited->erase(e.dst);
      if (cap_hit) return;
    }
  }
};

std::string path_text(const FlowGraphView& view, const std::vector<int>& ids) {
  std::ostringstream out;
  for (size_t i = 0; i < ids.size(); ++i) {
    const FlowEdge& e = view.edge(ids[i]);
    if (i == 0) out << e.src;
    out << (e.special ? " -*-> " : " -> ") << e.dst;
  }
  return out.str();
}

}  // namespace

GrResult gr_analysis(const DcdsSpec& spec, const GrOptions& options) {
  DcdsSpec pos = positive_approximate(spec);
  GrResult result;

  // Nodes: relations occurring in the actions.
  for (const Action& a : spec.actions) {
    for (const EffectSpec& e : a.effects) {
      for (const std::string& r : formula_relations(e.body)) result.graph.nodes.insert(r);
      for (const FactTemplate& ft : e.head) result.graph.nodes.insert(ft.rel);
    }
  }
  // Edges: one per body atom / head position occurrence in the positive
  // approximate, tagged with the generating action.
  for (const Action& a : pos.actions) {
    for (const EffectSpec& e : a.effects) {
      std::vector<FormulaPtr> atoms;
      collect_atoms(e.body, &atoms);
      for (const FormulaPtr& atom : atoms) {
        for (const FactTemplate& ft : e.head) {
          for (const HeadOccurrence& occ : head_occurrences(ft)) {
            FlowEdge edge;
            edge.src = atom->rel;
            edge.dst = ft.rel;
            edge.special = occ.special;
            edge.id = static_cast<int>(result.graph.edges.size());
            edge.actions = {a.name};
            result.graph.edges.push_back(std::move(edge));
          }
        }
      }
    }
  }

  FlowGraphView view(result.graph);
  CycleEnumerator cycles{view, options.max_cycles};
  cycles.run();
  if (cycles.cap_hit) {
    result.inconclusive = true;
    result.gr_acyclic = false;
    result.gr_plus_acyclic = false;
    result.witness_text = "inconclusive: cycle enumeration cap hit; treated as violating";
    return result;
  }

  // Nodes lying on some cycle (exact, via reachability across an edge).
  std::set<std::string> cycle_nodes;
  for (const FlowEdge& e : result.graph.edges) {
    if (view.reaches(e.dst, e.src)) cycle_nodes.insert(e.src);
  }

  // GR: some simple cycle C1 reaches a special edge outside C1 whose target
  // reaches a cycle.
  for (const auto& c1 : cycles.cycles) {
    std::set<int> c1_edges(c1.begin(), c1.end());
    std::set<std::string> c1_nodes;
    for (int id : c1) c1_nodes.insert(view.edge(id).src);
    for (const FlowEdge& e : result.graph.edges) {
      if (!e.special || c1_edges.count(e.id)) continue;
      bool from_c1 = std::any_of(c1_nodes.begin(), c1_nodes.end(), [&](const std::string& u) {
        return view.reaches(u, e.src);
      });
      if (!from_c1) continue;
      bool to_cycle = std::any_of(cycle_nodes.begin(), cycle_nodes.end(),
                                  [&](const std::string& v) { return view.reaches(e.dst, v); });
      if (!to_cycle) continue;
      result.gr_acyclic = false;
      result.witness_path = c1;
      result.witness_path.push_back(e.id);
      result.witness_text = "cycle " + path_text(view, c1) + " feeds special edge " + e.src +
                            " -*-> " + e.dst + " into a recall cycle";
      break;
    }
    if (!result.gr_acyclic) break;
  }

  if (result.gr_acyclic) {
    result.gr_plus_acyclic = true;
    return result;
  }

  // GR+: a violating shape pi1 pi2 pi3 is exempt when some edge of pi2 shares
  // no action with any later edge of pi2 or any edge of pi3. GR+ holds when
  // every violating shape is exempt.
  size_t paths_seen = 0;
  bool violated = false;
  std::vector<int> violating;

  auto disjoint = [](const std::set<std::string>& a, const std::set<std::string>& b) {
    for (const std::string& x : a) {
      if (b.count(x)) return false;
    }
    return true;
  };

  auto shape_exempt = [&](const std::vector<int>& pi2, const std::vector<int>& pi3) {
    for (size_t i = 0; i < pi2.size(); ++i) {
      std::set<std::string> later_actions;
      for (size_t j = i + 1; j < pi2.size(); ++j) {
        const auto& acts = view.edge(pi2[j]).actions;
        later_actions.insert(acts.begin(), acts.end());
      }
      for (int id : pi3) {
        const auto& acts = view.edge(id).actions;
        later_actions.insert(acts.begin(), acts.end());
      }
      if (disjoint(view.edge(pi2[i]).actions, later_actions)) return true;
    }
    return false;
  };

  for (const auto& c1 : cycles.cycles) {
    if (violated || result.inconclusive) break;
    std::set<int> c1_edges(c1.begin(), c1.end());
    std::set<std::string> c1_nodes;
    for (int id : c1) c1_nodes.insert(view.edge(id).src);
    for (const auto& c3 : cycles.cycles) {
      if (violated || result.inconclusive) break;
      std::set<std::string> c3_nodes;
      for (int id : c3) c3_nodes.insert(view.edge(id).src);
      // Enumerate edge-simple connector paths from C1 to C3.
      std::vector<int> path;
      std::set<int> used;
      std::function<void(const std::string&)> extend = [&](const std::string& node) {
        if (violated || result.inconclusive) return;
        if (!path.empty() && c3_nodes.count(node)) {
          if (++paths_seen > options.max_paths) {
            result.inconclusive = true;
            return;
          }
          bool has_disjoint_special = std::any_of(path.begin(), path.end(), [&](int id) {
            return view.edge(id).special && !c1_edges.count(id);
          });
          if (has_disjoint_special && !shape_exempt(path, c3)) {
            violated = true;
            violating = path;
            return;
          }
        }
        auto it = view.out_edges.find(node);
        if (it == view.out_edges.end()) return;
        for (int id : it->second) {
          if (used.count(id)) continue;
          used.insert(id);
          path.push_back(id);
          extend(view.edge(id).dst);
          path.pop_back();
          used.erase(id);
          if (violated || result.inconclusive) return;
        }
      };
      for (const std::string& u : c1_nodes) {
        extend(u);
        if (violated || result.inconclusive) break;
      }
      if (violated) {
        result.witness_path = c1;
        result.witness_path.insert(result.witness_path.end(), violating.begin(),
                                   violating.end());
        result.witness_path.insert(result.witness_path.end(), c3.begin(), c3.end());
        result.witness_text = "generate cycle " + path_text(view, c1) + " via " +
                              path_text(view, violating) + " into recall cycle " +
                              path_text(view, c3);
      }
    }
  }

  if (result.inconclusive) {
    result.gr_plus_acyclic = false;
    result.witness_text = "inconclusive: connector path cap hit; treated as violating";
  } else {
    result.gr_plus_acyclic = !violated;
  }
  return result;
}

}  // namespace dcds
