#include "bisimulation.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <map>
#include <set>
#include <sstream>

namespace dcds {

namespace {

using TermMap = std::map<Term, Term>;

PartialBijection to_pairs(const TermMap& m) {
  PartialBijection out(m.begin(), m.end());
  return out;
}

// Enumerates the isomorphisms between db1 and db2 that agree with `fixed` on
// its domain, by backtracking over fact matchings. Returns each isomorphism
// restricted to adom(db1).
std::vector<TermMap> db_isomorphisms(const Instance& db1, const Instance& db2,
                                     const TermMap& fixed) {
  std::vector<TermMap> results;
  if (db1.facts().size() != db2.facts().size()) return results;

  std::vector<Fact> facts1(db1.facts().begin(), db1.facts().end());
  std::vector<Fact> facts2(db2.facts().begin(), db2.facts().end());

  TermMap fwd;
  TermMap bwd;
  for (const Term& v : db1.adom()) {
    auto it = fixed.find(v);
    if (it != fixed.end()) {
      fwd[v] = it->second;
      bwd[it->second] = v;
    }
  }
  if (bwd.size() != fwd.size()) return results;  // fixed part not injective here

  std::set<TermMap> seen;
  std::vector<bool> used(facts2.size(), false);

  std::function<void(size_t)> go = [&](size_t i) {
    if (i == facts1.size()) {
      // All facts matched injectively; the map is an isomorphism on adoms.
      if (!seen.insert(fwd).second) return;
      results.push_back(fwd);
      return;
    }
    const Fact& f = facts1[i];
    for (size_t j = 0; j < facts2.size(); ++j) {
      if (used[j]) continue;
      const Fact& g = facts2[j];
      if (g.rel != f.rel || g.args.size() != f.args.size()) continue;
      std::vector<std::pair<Term, Term>> added;
      bool ok = true;
      for (size_t k = 0; k < f.args.size() && ok; ++k) {
        const Term& a = f.args[k];
        const Term& b = g.args[k];
        auto fit = fwd.find(a);
        auto bit = bwd.find(b);
        if (fit != fwd.end()) {
          ok = fit->second == b;
        } else if (bit != bwd.end()) {
          ok = false;  // b already taken by another source
        } else {
          fwd[a] = b;
          bwd[b] = a;
          added.emplace_back(a, b);
        }
      }
      if (ok) {
        used[j] = true;
        go(i + 1);
        used[j] = false;
      }
      for (auto it = added.rbegin(); it != added.rend(); ++it) {
        fwd.erase(it->first);
        bwd.erase(it->second);
      }
    }
  };
  go(0);
  return results;
}

struct Checker {
  const TransitionSystem& ts1;
  const TransitionSystem& ts2;
  bool history;  // else persistence
  size_t max_triples;

  struct Node {
    int s1, s2;
    PartialBijection h;
    bool alive = true;
    // challenges[c] lists responding node ids; a node dies when some
    // challenge has no living response.
    std::vector<std::vector<int>> challenges;
    std::vector<int> live_responses;  // per challenge
  };

  std::vector<Node> nodes;
  std::map<std::tuple<int, int, PartialBijection>, int> index;
  std::multimap<int, std::pair<int, int>> rdeps;  // response -> (node, challenge)
  bool budget_hit = false;

  int intern(int s1, const PartialBijection& h, int s2) {
    auto key = std::make_tuple(s1, s2, h);
    auto it = index.find(key);
    if (it != index.end()) return it->second;
    if (nodes.size() >= max_triples) {
      budget_hit = true;
      return -1;
    }
    Node n;
    n.s1 = s1;
    n.s2 = s2;
    n.h = h;
    nodes.push_back(std::move(n));
    int id = static_cast<int>(nodes.size()) - 1;
    index.emplace(std::move(key), id);
    return id;
  }

  // Candidate bijections for a step into (t1, t2) given the current h.
  std::vector<PartialBijection> step_candidates(const PartialBijection& h, int t1, int t2) {
    const Instance& db1 = ts1.state(t1).db;
    const Instance& db2 = ts2.state(t2).db;
    std::vector<PartialBijection> out;
    if (history) {
      TermMap hm(h.begin(), h.end());
      std::set<Term> img;
      for (const auto& [a, b] : h) img.insert(b);
      TermMap fixed;
      for (const Term& v : db1.adom()) {
        auto it = hm.find(v);
        if (it != hm.end()) fixed[v] = it->second;
      }
      // A target value already used by h outside the new state's adom image
      // can never be covered by an extension.
      std::set<Term> fixed_img;
      for (const auto& [a, b] : fixed) fixed_img.insert(b);
      for (const Term& w : db2.adom()) {
        if (img.count(w) && !fixed_img.count(w)) return out;
      }
      for (const TermMap& iso : db_isomorphisms(db1, db2, fixed)) {
        // Extend h with the new pairs; injectivity already ensured.
        TermMap merged = hm;
        bool ok = true;
        for (const auto& [a, b] : iso) {
          auto it = merged.find(a);
          if (it != merged.end() && !(it->second == b)) {
            ok = false;
            break;
          }
          merged[a] = b;
        }
        if (ok) out.push_back(to_pairs(merged));
      }
    } else {
      // Persistence: h covers exactly adom of the source state, so its pairs
      // with a source surviving into the successor are the constraint.
      TermMap fixed;
      for (const auto& [a, b] : h) {
        if (db1.adom().count(a)) fixed[a] = b;
      }
      for (const TermMap& iso : db_isomorphisms(db1, db2, fixed)) {
        out.push_back(to_pairs(iso));
      }
    }
    return out;
  }

  BisimResult run() {
    BisimResult result;
    const Instance& i1 = ts1.state(ts1.initial()).db;
    const Instance& i2 = ts2.state(ts2.initial()).db;

    // Initial candidates: isomorphisms of the initial databases, trying the
    // identity on shared values first.
    TermMap identity_fixed;
    for (const Term& v : i1.adom()) {
      if (i2.adom().count(v)) identity_fixed[v] = v;
    }
    std::vector<TermMap> roots = db_isomorphisms(i1, i2, identity_fixed);
    for (const TermMap& m : db_isomorphisms(i1, i2, TermMap{})) {
      if (std::find(roots.begin(), roots.end(), m) == roots.end()) roots.push_back(m);
    }
    if (roots.empty()) {
      result.bisimilar = false;
      result.obligation = "no isomorphism between the initial databases";
      return result;
    }

    std::vector<int> root_ids;
    std::deque<int> todo;
    for (const TermMap& m : roots) {
      int id = intern(ts1.initial(), to_pairs(m), ts2.initial());
      if (id < 0) break;
      root_ids.push_back(id);
      todo.push_back(id);
    }

    std::set<int> expanded;
    while (!todo.empty() && !budget_hit) {
      int id = todo.front();
      todo.pop_front();
      if (!expanded.insert(id).second) continue;
      int s1 = nodes[id].s1;
      int s2 = nodes[id].s2;
      PartialBijection h = nodes[id].h;

      std::vector<std::vector<int>> challenges;
      // Forth: every move of ts1 needs a matching move of ts2.
      for (int t1 : ts1.successors(s1)) {
        std::vector<int> responses;
        for (int t2 : ts2.successors(s2)) {
          for (const PartialBijection& h2 : step_candidates(h, t1, t2)) {
            int rid = intern(t1, h2, t2);
            if (rid < 0) break;
            responses.push_back(rid);
            todo.push_back(rid);
          }
        }
        challenges.push_back(std::move(responses));
      }
      // Back: every move of ts2 needs a matching move of ts1.
      for (int t2 : ts2.successors(s2)) {
        std::vector<int> responses;
        for (int t1 : ts1.successors(s1)) {
          for (const PartialBijection& h2 : step_candidates(h, t1, t2)) {
            int rid = intern(t1, h2, t2);
            if (rid < 0) break;
            responses.push_back(rid);
            todo.push_back(rid);
          }
        }
        challenges.push_back(std::move(responses));
      }
      nodes[id].challenges = std::move(challenges);
    }

    if (budget_hit) {
      result.status = BisimResult::Status::BudgetExceeded;
      result.obligation = "triple budget exceeded (" + std::to_string(max_triples) + ")";
      return result;
    }

    // Greatest fixpoint: repeatedly kill nodes with an unanswered challenge.
    for (size_t id = 0; id < nodes.size(); ++id) {
      for (size_t c = 0; c < nodes[id].challenges.size(); ++c) {
        std::set<int> uniq(nodes[id].challenges[c].begin(), nodes[id].challenges[c].end());
        nodes[id].challenges[c].assign(uniq.begin(), uniq.end());
        nodes[id].live_responses.push_back(static_cast<int>(nodes[id].challenges[c].size()));
        for (int r : nodes[id].challenges[c]) {
          rdeps.emplace(r, std::make_pair(static_cast<int>(id), static_cast<int>(c)));
        }
      }
    }
    std::deque<int> dead;
    for (size_t id = 0; id < nodes.size(); ++id) {
      for (int count : nodes[id].live_responses) {
        if (count == 0) {
          nodes[id].alive = false;
          dead.push_back(static_cast<int>(id));
          break;
        }
      }
    }
    while (!dead.empty()) {
      int id = dead.front();
      dead.pop_front();
      auto range = rdeps.equal_range(id);
      for (auto it = range.first; it != range.second; ++it) {
        auto [nid, c] = it->second;
        if (!nodes[nid].alive) continue;
        if (--nodes[nid].live_responses[c] == 0) {
          nodes[nid].alive = false;
          dead.push_back(nid);
        }
      }
    }

    int surviving_root = -1;
    for (int id : root_ids) {
      if (nodes[id].alive) {
        surviving_root = id;
        break;
      }
    }
    if (surviving_root < 0) {
      result.bisimilar = false;
      std::ostringstream msg;
      msg << "every initial bijection candidate is eventually distinguished ("
          << root_ids.size() << " candidate(s) tried)";
      result.obligation = msg.str();
      return result;
    }
    result.bisimilar = true;
    // Witness: living triples reachable from the surviving root.
    std::set<int> keep;
    std::deque<int> walk{surviving_root};
    while (!walk.empty()) {
      int id = walk.front();
      walk.pop_front();
      if (!keep.insert(id).second) continue;
      for (const auto& ch : nodes[id].challenges) {
        for (int r : ch) {
          if (nodes[r].alive && !keep.count(r)) walk.push_back(r);
        }
      }
    }
    for (int id : keep) {
      result.witness.push_back({nodes[id].s1, nodes[id].h, nodes[id].s2});
    }
    return result;
  }
};

}  // namespace

BisimResult history_bisimilar(const TransitionSystem& ts1, const TransitionSystem& ts2,
                              size_t max_triples) {
  Checker c{ts1, ts2, true, max_triples};
  return c.run();
}

BisimResult persistence_bisimilar(const TransitionSystem& ts1, const TransitionSystem& ts2,
                                  size_t max_triples) {
  Checker c{ts1, ts2, false, max_triples};
  return c.run();
}

}  // namespace dcds
