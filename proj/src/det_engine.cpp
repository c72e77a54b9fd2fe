#include "det_engine.hpp"

#include <algorithm>
#include <deque>
#include <sstream>
#include <stdexcept>

namespace dcds {

std::string ServiceCallMap::str() const {
  std::ostringstream out;
  bool first = true;
  for (const auto& [call, value] : entries) {
    if (!first) out << ", ";
    first = false;
    out << call.str() << '=' << value.str();
  }
  return out.str();
}

std::string DivergenceReport::str() const {
  std::ostringstream out;
  out << message;
  if (!deepest_term.empty()) out << "; deepest call chain: " << deepest_term;
  out << " (" << state_count << " states, " << term_count << " terms)";
  return out.str();
}

std::string assignment_str(const Assignment& sigma) {
  std::ostringstream out;
  bool first = true;
  for (const auto& [var, term] : sigma) {
    if (!first) out << ", ";
    first = false;
    out << var << '=' << term.str();
  }
  return out.str();
}

std::string edge_label(const std::string& action, const Assignment& sigma) {
  if (sigma.empty()) return action;
  return action + '[' + assignment_str(sigma) + ']';
}

namespace {

Term ground_head_arg(const HeadArg& arg, const Assignment& binding) {
  switch (arg.kind) {
    case HeadArg::Kind::Const:
      return arg.constant;
    case HeadArg::Kind::Var: {
      auto it = binding.find(arg.var);
      if (it == binding.end()) {
        throw std::logic_error("unbound head variable '" + arg.var + "'");
      }
      return it->second;
    }
    case HeadArg::Kind::Call: {
      std::vector<Term> args;
      args.reserve(arg.args.size());
      for (const HeadArg& a : arg.args) args.push_back(ground_head_arg(a, binding));
      return Term::call(arg.function, std::move(args));
    }
  }
  throw std::logic_error("unreachable");
}

}  // namespace

std::set<Fact> do_effects(const Instance& i, const Action& action, const Assignment& sigma) {
  std::set<Fact> out;
  for (const EffectSpec& e : action.effects) {
    FormulaPtr body = substitute(e.body, sigma);
    for (const Assignment& theta : eval(body, i)) {
      Assignment binding = sigma;
      binding.insert(theta.begin(), theta.end());
      for (const FactTemplate& ft : e.head) {
        Fact f;
        f.rel = ft.rel;
        f.args.reserve(ft.args.size());
        for (const HeadArg& a : ft.args) f.args.push_back(ground_head_arg(a, binding));
        out.insert(std::move(f));
      }
    }
  }
  return out;
}

std::set<Assignment> legal_assignments(const Instance& i, const ConditionActionRule& rule) {
  return eval(rule.guard, i);
}

namespace {

// Restricted-growth enumeration of commitment extensions: each new term, in
// canonical order, joins an old cell, joins a new cell founded by an earlier
// new term, or founds the next new cell. Constants never join old cells
// (that would depose the preserved representative) and never share a cell
// with another constant. Branches whose partial assignment already breaks
// congruence are cut.
//
// The base partition is well-formed and old cells never merge, so a
// congruence violation always involves a newly assigned call (old calls have
// old arguments because commitments are closed under subterms). Only those
// pairs are rechecked.
struct ExtensionEnumerator {
  const Partition& base;
  std::vector<Term> new_terms;
  std::vector<Partition> results;

  std::map<Term, int> cell_of;         // every placed term -> cell id
  std::vector<int> assignment;         // per new term, in assignment order
  std::vector<bool> fresh_has_const;   // per founded cell
  std::vector<Term> old_calls;         // calls of the base partition
  int old_count = 0;

  void run() {
    old_count = static_cast<int>(base.size());
    for (int i = 0; i < old_count; ++i) {
      for (const Term& t : base.cells()[i]) {
        cell_of.emplace(t, i);
        if (t.is_call()) old_calls.push_back(t);
      }
    }
    go(0);
  }

  int lookup(const Term& t) const {
    auto it = cell_of.find(t);
    return it == cell_of.end() ? -1 : it->second;
  }

  // Congruence status of every pair (u, v) where u is the just-placed call or
  // has it among its arguments; v ranges over all placed calls.
  bool consistent_with(const Term& placed) {
    std::vector<Term> affected;
    if (placed.is_call()) affected.push_back(placed);
    for (size_t i = 0; i < assignment.size(); ++i) {
      const Term& u = new_terms[i];
      if (!u.is_call() || u == placed) continue;
      for (const Term& arg : u.args()) {
        if (arg == placed) {
          affected.push_back(u);
          break;
        }
      }
    }
    auto argwise_equal = [&](const Term& u, const Term& v, bool* known) {
      *known = true;
      for (size_t k = 0; k < u.arity(); ++k) {
        int cu = lookup(u.args()[k]);
        int cv = lookup(v.args()[k]);
        if (cu < 0 || cv < 0) {
          *known = false;
          return false;
        }
        if (cu != cv) return false;
      }
      return true;
    };
    auto check_pair = [&](const Term& u, const Term& v) {
      if (u == v || u.symbol() != v.symbol() || u.arity() != v.arity()) return true;
      int cu = lookup(u);
      int cv = lookup(v);
      if (cu < 0 || cv < 0) return true;  // deferred until both are placed
      bool known = false;
      bool equal = argwise_equal(u, v, &known);
      return !known || !equal || cu == cv;
    };
    for (const Term& u : affected) {
      for (const Term& v : old_calls) {
        if (!check_pair(u, v)) return false;
      }
      for (size_t i = 0; i < assignment.size(); ++i) {
        const Term& v = new_terms[i];
        if (v.is_call() && !check_pair(u, v)) return false;
      }
    }
    return true;
  }

  void emit() {
    std::vector<std::set<Term>> cells = base.cells();
    std::vector<Term> reps(base.reps());
    size_t fresh = fresh_has_const.size();
    cells.resize(old_count + fresh);
    for (size_t i = 0; i < new_terms.size(); ++i) {
      cells[assignment[i]].insert(new_terms[i]);
    }
    for (size_t i = 0; i < fresh; ++i) {
      reps.push_back(default_representative(cells[old_count + i]));
    }
    results.push_back(Partition::make(std::move(cells), std::move(reps)));
  }

  void place(const Term& t, int cell) {
    assignment.push_back(cell);
    cell_of[t] = cell;
  }

  void unplace(const Term& t) {
    assignment.pop_back();
    cell_of.erase(t);
  }

  void go(size_t idx) {
    if (idx == new_terms.size()) {
      emit();
      return;
    }
    const Term& t = new_terms[idx];
    bool is_const = t.is_constant();
    if (!is_const) {
      for (int i = 0; i < old_count; ++i) {
        place(t, i);
        if (consistent_with(t)) go(idx + 1);
        unplace(t);
      }
    }
    size_t joinable = fresh_has_const.size();
    for (size_t i = 0; i < joinable; ++i) {
      if (is_const && fresh_has_const[i]) continue;
      bool saved = fresh_has_const[i];
      fresh_has_const[i] = saved || is_const;
      place(t, old_count + static_cast<int>(i));
      if (consistent_with(t)) go(idx + 1);
      unplace(t);
      fresh_has_const[i] = saved;
    }
    fresh_has_const.push_back(is_const);
    place(t, old_count + static_cast<int>(fresh_has_const.size()) - 1);
    if (consistent_with(t)) go(idx + 1);
    unplace(t);
    fresh_has_const.pop_back();
  }
};

Instance apply_commitment(const Partition& h, const std::set<Fact>& facts) {
  Instance out;
  for (const Fact& f : facts) {
    Fact g;
    g.rel = f.rel;
    g.args.reserve(f.args.size());
    for (const Term& t : f.args) g.args.push_back(h.representative(t));
    out.insert(std::move(g));
  }
  return out;
}

size_t term_depth(const Term& t) {
  size_t d = 1;
  for (const Term& a : t.args()) d = std::max(d, 1 + term_depth(a));
  return d;
}

Term deepest_term(const std::set<Term>& terms) {
  Term best = *terms.begin();
  size_t best_depth = term_depth(best);
  for (const Term& t : terms) {
    size_t d = term_depth(t);
    if (d > best_depth) {
      best = t;
      best_depth = d;
    }
  }
  return best;
}

}  // namespace

std::vector<AState> abstract_successors(const AState& s, const Action& action,
                                        const Assignment& sigma,
                                        const std::vector<EqualityConstraint>& ecs) {
  std::set<Fact> effects = do_effects(s.instance, action, sigma);
  std::set<Term> known = s.commitment.terms();
  std::set<Term> fresh;
  for (const Fact& f : effects) {
    for (const Term& t : f.args) {
      for (const Term& sub : subterms(t)) {
        if (!known.count(sub)) fresh.insert(sub);
      }
    }
  }
  ExtensionEnumerator en{s.commitment, {fresh.begin(), fresh.end()}};
  en.run();
  std::vector<AState> out;
  for (const Partition& h2 : en.results) {
    Instance next = apply_commitment(h2, effects);
    if (!satisfies_ec(next, ecs).ok) continue;
    out.push_back({std::move(next), h2});
  }
  return out;
}

BuildResult build_abstract_ts(const DcdsSpec& spec, const Budgets& budgets) {
  if (spec.semantics != Semantics::Deterministic) {
    throw std::invalid_argument("abstract transition system requires deterministic semantics");
  }
  std::vector<EqualityConstraint> ecs = spec.ecs();

  AState initial{spec.init, Partition::singletons(spec.init.adom())};
  TransitionSystem ts;
  std::map<std::string, int> seen;
  std::vector<AState> astates;

  auto key_of = [](const AState& a) { return a.instance.str() + " | " + a.commitment.str(); };

  int init_id = ts.add_state(initial.instance, initial.commitment.str());
  ts.set_initial(init_id);
  seen[key_of(initial)] = init_id;
  astates.push_back(initial);

  std::deque<int> frontier{init_id};
  while (!frontier.empty()) {
    int id = frontier.front();
    frontier.pop_front();
    AState current = astates[id];
    for (const ConditionActionRule& rule : spec.process) {
      const Action* action = spec.find_action(rule.action);
      if (!action) continue;
      for (const Assignment& sigma : legal_assignments(current.instance, rule)) {
        for (AState& succ : abstract_successors(current, *action, sigma, ecs)) {
          if (succ.commitment.terms().size() > budgets.max_terms) {
            DivergenceReport report;
            report.message = "term budget exceeded while extending the equality commitment";
            report.deepest_term = deepest_term(succ.commitment.terms()).str();
            report.term_count = succ.commitment.terms().size();
            report.state_count = ts.state_count();
            return {std::nullopt, std::move(report)};
          }
          std::string key = key_of(succ);
          auto it = seen.find(key);
          int succ_id;
          if (it != seen.end()) {
            succ_id = it->second;
          } else {
            if (ts.state_count() >= budgets.max_states) {
              DivergenceReport report;
              report.message = "state budget exceeded while building the abstract system";
              report.deepest_term = deepest_term(succ.commitment.terms()).str();
              report.term_count = succ.commitment.terms().size();
              report.state_count = ts.state_count();
              return {std::nullopt, std::move(report)};
            }
            succ_id = ts.add_state(succ.instance, succ.commitment.str());
            seen[key] = succ_id;
            astates.push_back(succ);
            frontier.push_back(succ_id);
          }
          ts.add_edge(id, succ_id, edge_label(action->name, sigma));
        }
      }
    }
  }
  return {std::move(ts), std::nullopt};
}

TransitionSystem build_concrete_bounded(const DcdsSpec& spec, const std::set<Term>& pool,
                                        int depth) {
  if (spec.semantics != Semantics::Deterministic) {
    throw std::invalid_argument("bounded concrete oracle requires deterministic semantics");
  }
  for (const Term& t : spec.init.adom()) {
    if (!pool.count(t)) {
      throw std::invalid_argument("value pool must contain adom(I0); missing " + t.str());
    }
  }
  std::vector<EqualityConstraint> ecs = spec.ecs();

  TransitionSystem ts;
  std::map<std::string, int> seen;
  std::vector<CState> cstates;
  auto key_of = [](const CState& c) { return c.instance.str() + " | " + c.calls.str(); };

  CState initial{spec.init, {}};
  int init_id = ts.add_state(initial.instance, initial.calls.str());
  ts.set_initial(init_id);
  seen[key_of(initial)] = init_id;
  cstates.push_back(initial);

  std::deque<std::pair<int, int>> frontier{{init_id, 0}};  // (state, depth)
  while (!frontier.empty()) {
    auto [id, d] = frontier.front();
    frontier.pop_front();
    if (d >= depth) continue;
    CState current = cstates[id];
    for (const ConditionActionRule& rule : spec.process) {
      const Action* action = spec.find_action(rule.action);
      if (!action) continue;
      for (const Assignment& sigma : legal_assignments(current.instance, rule)) {
        std::set<Fact> effects = do_effects(current.instance, *action, sigma);
        std::vector<Term> new_calls;
        {
          std::set<Term> calls;
          for (const Fact& f : effects) {
            for (const Term& t : f.args) {
              if (t.is_call() && !current.calls.entries.count(t)) calls.insert(t);
            }
          }
          new_calls.assign(calls.begin(), calls.end());
        }
        // All combinations of pool values for the new calls.
        std::vector<Term> pool_terms(pool.begin(), pool.end());
        if (!new_calls.empty() && pool_terms.empty()) continue;
        std::vector<size_t> choice(new_calls.size(), 0);
        while (true) {
          ServiceCallMap m = current.calls;
          for (size_t i = 0; i < new_calls.size(); ++i) {
            m.entries[new_calls[i]] = pool_terms[choice[i]];
          }
          Instance next;
          bool ok = true;
          for (const Fact& f : effects) {
            Fact g;
            g.rel = f.rel;
            for (const Term& t : f.args) {
              if (t.is_call()) {
                auto it = m.entries.find(t);
                if (it == m.entries.end()) {
                  ok = false;
                  break;
                }
                g.args.push_back(it->second);
              } else {
                g.args.push_back(t);
              }
            }
            if (!ok) break;
            next.insert(std::move(g));
          }
          if (ok && satisfies_ec(next, ecs).ok) {
            CState succ{std::move(next), std::move(m)};
            std::string key = key_of(succ);
            auto it = seen.find(key);
            int succ_id;
            if (it != seen.end()) {
              succ_id = it->second;
            } else {
              succ_id = ts.add_state(succ.instance, succ.calls.str());
              seen[key] = succ_id;
              cstates.push_back(succ);
              frontier.emplace_back(succ_id, d + 1);
            }
            ts.add_edge(id, succ_id, edge_label(action->name, sigma));
          }
          // Advance the choice vector.
          size_t i = 0;
          for (; i < choice.size(); ++i) {
            if (++choice[i] < pool_terms.size()) break;
            choice[i] = 0;
          }
          if (i == choice.size()) break;
        }
      }
    }
  }
  return ts;
}

}  // namespace dcds
