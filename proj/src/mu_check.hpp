#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "mu_formula.hpp"
#include "transition_system.hpp"

namespace dcds {

// Quantifier expansion over a finite domain:
// prop(exists x. live(x) & F) = OR_t (live(t) & prop(F[x/t])).
// Requires the formula to be in muL_A (no unrestricted quantifier); throws
// std::invalid_argument otherwise.
MuPtr propositionalize(const MuPtr& f, const std::set<Term>& domain);

struct ModelCheckResult {
  bool ok = true;
  std::string error;  // set when the formula is outside muL_A
  bool holds = false;
  MuFragment fragment = MuFragment::MuL;
  // Extensions of the propositionalized subformulas, printed form -> states.
  std::vector<std::pair<std::string, std::vector<int>>> extensions;
};

// Knaster-Tarski model checking over a finite transition system. The formula
// is propositionalized over adom(ts); full muL is rejected with a diagnostic
// since no finite abstraction can be faithful for it.
ModelCheckResult model_check(const TransitionSystem& ts, const MuPtr& f);

// Evaluation without prior expansion: quantifiers iterate over adom(ts) with
// an explicit valuation. Used to cross-check propositionalization.
ModelCheckResult model_check_direct(const TransitionSystem& ts, const MuPtr& f);

}  // namespace dcds
