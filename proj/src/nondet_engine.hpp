#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "det_engine.hpp"

namespace dcds {

// Simultaneous evaluation of one step's service calls: ground call -> value.
// Equal calls within a step share their value by construction.
using Evaluation = std::map<Term, Term>;

// Distinct ground service calls occurring in a set of produced facts.
std::set<Term> skolems(const std::set<Fact>& facts);

// All total maps from the step's service calls into the given value set;
// |domain|^n evaluations for n distinct calls, in a deterministic order.
std::vector<Evaluation> ground_evals(const Instance& i, const Action& action,
                                     const Assignment& sigma, const std::set<Term>& domain);

// theta respects h iff terms of h's carrier are equal under theta exactly
// when they share a cell (constants evaluate to themselves).
bool respects(const Evaluation& theta, const Partition& h);

// Successor instances grouped by the equality commitment they realize over
// skolems(do(...)) + adom(i) + adom(I0), filtered by the equality
// constraints.
std::vector<std::pair<Partition, Instance>> successors_nondet(
    const Instance& i, const Action& action, const Assignment& sigma,
    const std::set<Term>& domain, const std::vector<EqualityConstraint>& ecs,
    const std::set<Term>& init_adom);

struct RcyclOptions {
  Budgets budgets;
  // Namespace for invented service-call results; must not collide with spec
  // constants.
  std::string fresh_prefix = "$v";
};

// Eventually-recycling pruning of the concrete transition system: per
// unvisited (state, action, legal sigma), pick as many values as the step has
// calls — recycled when enough used values lie outside adom(I0) and the
// current state, all fresh otherwise — and add every constraint-satisfying
// successor over adom(I0) + adom(state) + picked values. Runs to a fixpoint
// on states and edges; budget exhaustion yields a DivergenceReport
// (state-unboundedness suspect).
BuildResult rcycl(const DcdsSpec& spec, const RcyclOptions& options = {});

// Bounded oracle for the nondeterministic concrete semantics: every step
// evaluates its calls over the given pool.
TransitionSystem build_concrete_bounded_nondet(const DcdsSpec& spec, const std::set<Term>& pool,
                                               int depth);

}  // namespace dcds
