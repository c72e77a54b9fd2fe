#include "nondet_engine.hpp"

#include <algorithm>
#include <deque>
#include <optional>
#include <sstream>
#include <stdexcept>

namespace dcds {

std::set<Term> skolems(const std::set<Fact>& facts) {
  std::set<Term> out;
  for (const Fact& f : facts) {
    for (const Term& t : f.args) {
      if (t.is_call()) out.insert(t);
    }
  }
  return out;
}

namespace {

Instance apply_evaluation(const std::set<Fact>& facts, const Evaluation& theta) {
  Instance out;
  for (const Fact& f : facts) {
    Fact g;
    g.rel = f.rel;
    g.args.reserve(f.args.size());
    for (const Term& t : f.args) {
      if (t.is_call()) {
        g.args.push_back(theta.at(t));
      } else {
        g.args.push_back(t);
      }
    }
    out.insert(std::move(g));
  }
  return out;
}

// Evaluation count |domain|^n, or nullopt on overflow past the cap.
std::optional<size_t> eval_count(size_t domain, size_t n, size_t cap) {
  size_t total = 1;
  for (size_t i = 0; i < n; ++i) {
    if (domain != 0 && total > cap / domain) return std::nullopt;
    total *= domain;
  }
  return total;
}

std::vector<Evaluation> enumerate_evals(const std::set<Term>& calls,
                                        const std::set<Term>& domain) {
  std::vector<Term> call_list(calls.begin(), calls.end());
  std::vector<Term> values(domain.begin(), domain.end());
  std::vector<Evaluation> out;
  if (call_list.empty()) {
    out.push_back({});
    return out;
  }
  if (values.empty()) return out;
  std::vector<size_t> choice(call_list.size(), 0);
  while (true) {
    Evaluation theta;
    for (size_t i = 0; i < call_list.size(); ++i) theta[call_list[i]] = values[choice[i]];
    out.push_back(std::move(theta));
    size_t i = 0;
    for (; i < choice.size(); ++i) {
      if (++choice[i] < values.size()) break;
      choice[i] = 0;
    }
    if (i == choice.size()) break;
  }
  return out;
}

}  // namespace

std::vector<Evaluation> ground_evals(const Instance& i, const Action& action,
                                     const Assignment& sigma, const std::set<Term>& domain) {
  return enumerate_evals(skolems(do_effects(i, action, sigma)), domain);
}

bool respects(const Evaluation& theta, const Partition& h) {
  auto value_of = [&](const Term& t) -> Term {
    if (t.is_constant()) return t;
    auto it = theta.find(t);
    if (it == theta.end()) {
      throw std::invalid_argument("evaluation undefined on " + t.str());
    }
    return it->second;
  };
  std::vector<Term> carrier;
  for (const Term& t : h.terms()) carrier.push_back(t);
  for (size_t i = 0; i < carrier.size(); ++i) {
    for (size_t j = i + 1; j < carrier.size(); ++j) {
      bool same = h.same_cell(carrier[i], carrier[j]);
      bool eq = value_of(carrier[i]) == value_of(carrier[j]);
      if (same != eq) return false;
    }
  }
  return true;
}

std::vector<std::pair<Partition, Instance>> successors_nondet(
    const Instance& i, const Action& action, const Assignment& sigma,
    const std::set<Term>& domain, const std::vector<EqualityConstraint>& ecs,
    const std::set<Term>& init_adom) {
  std::set<Fact> effects = do_effects(i, action, sigma);
  std::set<Term> carrier = skolems(effects);
  {
    auto a = i.adom();
    carrier.insert(a.begin(), a.end());
    carrier.insert(init_adom.begin(), init_adom.end());
  }
  std::vector<std::pair<Partition, Instance>> out;
  std::set<std::pair<std::string, std::string>> seen;
  for (const Evaluation& theta : enumerate_evals(skolems(effects), domain)) {
    Instance next = apply_evaluation(effects, theta);
    if (!satisfies_ec(next, ecs).ok) continue;
    // Commitment realized by theta: group the carrier by evaluated value.
    std::map<Term, std::set<Term>> by_value;
    for (const Term& t : carrier) {
      Term v = t.is_constant() ? t : theta.at(t);
      by_value[v].insert(t);
    }
    std::vector<std::set<Term>> cells;
    cells.reserve(by_value.size());
    for (auto& [v, cell] : by_value) cells.push_back(std::move(cell));
    Partition h = Partition::make(std::move(cells));
    auto key = std::make_pair(h.str(), next.str());
    if (seen.insert(key).second) out.emplace_back(std::move(h), std::move(next));
  }
  return out;
}

BuildResult rcycl(const DcdsSpec& spec, const RcyclOptions& options) {
  if (spec.semantics != Semantics::Nondeterministic) {
    throw std::invalid_argument("the recycling construction requires nondeterministic semantics");
  }
  std::vector<EqualityConstraint> ecs = spec.ecs();
  std::set<Term> init_adom = spec.init.adom();

  TransitionSystem ts;
  std::map<std::string, int> seen;
  int init_id = ts.add_state(spec.init);
  ts.set_initial(init_id);
  seen[spec.init.str()] = init_id;

  std::set<Term> used_values = init_adom;
  size_t fresh_counter = 0;

  auto fresh_value = [&]() {
    while (true) {
      Term candidate = Term::constant(options.fresh_prefix + std::to_string(fresh_counter++));
      if (!used_values.count(candidate)) return candidate;
    }
  };

  // Visited bookkeeping keys on (state, rule, sigma). The legal sigmas are a
  // function of the state's instance alone, so one pass per state covers all
  // of its triples; states enter the worklist once, in creation order.
  std::deque<int> worklist{init_id};
  while (!worklist.empty()) {
    int id = worklist.front();
    worklist.pop_front();
    const Instance current = ts.state(id).db;
    for (size_t ridx = 0; ridx < spec.process.size(); ++ridx) {
      const ConditionActionRule& rule = spec.process[ridx];
      const Action* action = spec.find_action(rule.action);
      if (!action) continue;
      for (const Assignment& sigma : legal_assignments(current, rule)) {
        {
          std::set<Fact> effects = do_effects(current, *action, sigma);
          std::set<Term> calls = skolems(effects);
          size_t n = calls.size();

          // RecyclableValues = UsedValues - (adom(I0) + adom(I)); both adoms
          // are subsets of UsedValues, so its size needs no materialization.
          std::set<Term> excluded = init_adom;
          for (const Term& t : current.adom()) excluded.insert(t);
          size_t recyclable_size = used_values.size() - excluded.size();

          // Pick n values: recycled when enough are available, fresh
          // otherwise; ties resolved by taking the least eligible set.
          std::set<Term> picked;
          if (recyclable_size >= n) {
            for (auto it = used_values.begin(); picked.size() < n; ++it) {
              if (!excluded.count(*it)) picked.insert(*it);
            }
          } else {
            for (size_t k = 0; k < n; ++k) picked.insert(fresh_value());
          }

          std::set<Term> domain = init_adom;
          for (const Term& t : current.adom()) domain.insert(t);
          domain.insert(picked.begin(), picked.end());

          auto count = eval_count(domain.size(), n, options.budgets.max_evals_per_step);
          if (!count) {
            DivergenceReport report;
            report.message = "evaluation budget exceeded at state " + current.str() +
                             " under action " + action->name;
            report.state_count = ts.state_count();
            return {std::nullopt, std::move(report)};
          }

          for (const Evaluation& theta : enumerate_evals(calls, domain)) {
            Instance next = apply_evaluation(effects, theta);
            if (!satisfies_ec(next, ecs).ok) continue;
            auto it = seen.find(next.str());
            int succ_id;
            if (it != seen.end()) {
              succ_id = it->second;
            } else {
              if (ts.state_count() >= options.budgets.max_states) {
                DivergenceReport report;
                report.message =
                    "state budget exceeded during the recycling construction "
                    "(state-unboundedness suspect)";
                report.state_count = ts.state_count();
                return {std::nullopt, std::move(report)};
              }
              succ_id = ts.add_state(next);
              seen[next.str()] = succ_id;
              worklist.push_back(succ_id);
            }
            ts.add_edge(id, succ_id, edge_label(action->name, sigma));
            for (const Term& t : next.adom()) used_values.insert(t);
          }
        }
      }
    }
  }
  return {std::move(ts), std::nullopt};
}

TransitionSystem build_concrete_bounded_nondet(const DcdsSpec& spec, const std::set<Term>& pool,
                                               int depth) {
  if (spec.semantics != Semantics::Nondeterministic) {
    throw std::invalid_argument("nondeterministic oracle requires nondeterministic semantics");
  }
  for (const Term& t : spec.init.adom()) {
    if (!pool.count(t)) {
      throw std::invalid_argument("value pool must contain adom(I0); missing " + t.str());
    }
  }
  std::vector<EqualityConstraint> ecs = spec.ecs();

  TransitionSystem ts;
  std::map<std::string, int> seen;
  int init_id = ts.add_state(spec.init);
  ts.set_initial(init_id);
  seen[spec.init.str()] = init_id;

  std::deque<std::pair<int, int>> frontier{{init_id, 0}};
  while (!frontier.empty()) {
    auto [id, d] = frontier.front();
    frontier.pop_front();
    if (d >= depth) continue;
    const Instance current = ts.state(id).db;
    for (const ConditionActionRule& rule : spec.process) {
      const Action* action = spec.find_action(rule.action);
      if (!action) continue;
      for (const Assignment& sigma : legal_assignments(current, rule)) {
        std::set<Fact> effects = do_effects(current, *action, sigma);
        for (const Evaluation& theta : enumerate_evals(skolems(effects), pool)) {
          Instance next = apply_evaluation(effects, theta);
          if (!satisfies_ec(next, ecs).ok) continue;
          auto it = seen.find(next.str());
          int succ_id;
          if (it != seen.end()) {
            succ_id = it->second;
          } else {
            succ_id = ts.add_state(next);
            seen[next.str()] = succ_id;
            frontier.emplace_back(succ_id, d + 1);
          }
          ts.add_edge(id, succ_id, edge_label(action->name, sigma));
        }
      }
    }
  }
  return ts;
}

}  // namespace dcds
