#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "partition.hpp"
#include "query_eval.hpp"
#include "spec.hpp"
#include "transition_system.hpp"

namespace dcds {

// Recorded results of deterministic service calls: ground call term -> value.
struct ServiceCallMap {
  std::map<Term, Term> entries;

  std::string str() const;
  friend bool operator==(const ServiceCallMap& a, const ServiceCallMap& b) {
    return a.entries == b.entries;
  }
  friend bool operator<(const ServiceCallMap& a, const ServiceCallMap& b) {
    return a.entries < b.entries;
  }
};

// Abstract state: an instance over commitment representatives plus the
// equality commitment accumulated so far.
struct AState {
  Instance instance;
  Partition commitment;
};

// Concrete state: an instance over constants plus the service-call map.
struct CState {
  Instance instance;
  ServiceCallMap calls;
};

struct Budgets {
  size_t max_states = 10000;
  size_t max_terms = 200;
  // Cap on ground evaluations enumerated per expansion step (nondet engines).
  size_t max_evals_per_step = 1000000;
};

struct DivergenceReport {
  std::string message;
  std::string deepest_term;  // longest nested-call chain seen
  size_t term_count = 0;
  size_t state_count = 0;

  std::string str() const;
};

struct BuildResult {
  std::optional<TransitionSystem> ts;
  std::optional<DivergenceReport> divergence;
  bool diverged() const { return divergence.has_value(); }
};

// Applies the action under sigma: the union over effects of the head
// templates grounded by every answer of the effect body. Call templates
// become call terms over the grounded arguments.
std::set<Fact> do_effects(const Instance& i, const Action& action, const Assignment& sigma);

// Exactly the guard's answers, which by validation bind precisely the
// action's parameters.
std::set<Assignment> legal_assignments(const Instance& i, const ConditionActionRule& rule);

// All a-states reachable by one abstract execution of action/sigma: one per
// well-formed extension of the commitment over the newly introduced terms,
// with old representatives preserved and successors violating the equality
// constraints filtered out.
std::vector<AState> abstract_successors(const AState& s, const Action& action,
                                        const Assignment& sigma,
                                        const std::vector<EqualityConstraint>& ecs);

// Breadth-first closure of abstract executions from <I0, H0>, H0 being
// singleton cells over adom(I0). States are deduplicated by canonical form.
// Budget exhaustion yields a DivergenceReport naming the deepest call chain.
BuildResult build_abstract_ts(const DcdsSpec& spec, const Budgets& budgets = {});

// Bounded oracle for the concrete semantics: service calls draw values from
// the given pool, exploration stops at the given depth. Requires
// adom(I0) to be contained in the pool and a deterministic spec.
TransitionSystem build_concrete_bounded(const DcdsSpec& spec, const std::set<Term>& pool,
                                        int depth);

std::string assignment_str(const Assignment& sigma);
std::string edge_label(const std::string& action, const Assignment& sigma);

}  // namespace dcds
