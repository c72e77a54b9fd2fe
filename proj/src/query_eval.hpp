#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "formula.hpp"
#include "instance.hpp"

namespace dcds {

using Assignment = std::map<std::string, Term>;

// Answers of q over i under active-domain semantics: exactly the assignments
// theta of free(q) into adom(i) with i |= q theta. For a boolean query the
// result is the empty-assignment singleton or the empty set.
// Throws std::invalid_argument on a relation absent from the schema when one
// is supplied.
std::set<Assignment> eval(const FormulaPtr& q, const Instance& i, const Schema* schema = nullptr);

bool eval_bool(const FormulaPtr& q, const Instance& i, const Schema* schema = nullptr);

struct EcCheck {
  bool ok = true;
  std::string witness;  // first violating binding when !ok
};

// Every answer of every constraint body must satisfy all its equalities.
// Term equality is syntactic: distinct constants and distinct representative
// terms are unequal.
EcCheck satisfies_ec(const Instance& i, const std::vector<EqualityConstraint>& ecs);

}  // namespace dcds
