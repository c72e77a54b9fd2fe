#pragma once

#include <optional>
#include <string>
#include <vector>

#include "spec.hpp"

namespace dcds {

struct TransformReport {
  std::vector<std::string> added_relations;
  std::vector<std::string> added_effects;
  std::vector<std::string> added_constraints;
  std::vector<std::string> reserved_constants;

  std::string str() const;
};

struct TransformResult {
  std::optional<DcdsSpec> spec;
  TransformReport report;
  std::vector<Diagnostic> errors;
};

// Deterministic -> nondeterministic: each call site f(a...) additionally
// records its result in a reserved relation $R_f_<site>(a..., f(a...)), every
// action copies those relations, and a functional dependency on them (as an
// equality constraint) forces recorded results to stay consistent, which
// restores the deterministic behavior under nondeterministic services.
TransformResult det_to_nondet(const DcdsSpec& spec);

// Nondeterministic -> deterministic: calls gain a timestamp argument joined
// from the reserved clock relation $now; each action advances the clock via
// the deterministic service $new and accumulates the successor relation
// $succ, whose second component is a key. Same-argument calls at distinct
// steps then differ in the timestamp.
TransformResult nondet_to_det(const DcdsSpec& spec);

// Denial constraints Q -> false become equality constraints
// Q & $Neq(x, y) -> x = y over a persistent $Neq fact holding two distinct
// constants, so states satisfying Q are filtered out.
TransformResult encode_denials(const DcdsSpec& spec, const std::vector<FormulaPtr>& denials);

// Arbitrary FO integrity constraint via the same trick with !IC as the body.
TransformResult encode_fo_constraint(const DcdsSpec& spec, const FormulaPtr& ic);

}  // namespace dcds
