#pragma once

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "formula.hpp"
#include "spec.hpp"

namespace dcds {

struct MuFormula;
using MuPtr = std::shared_ptr<const MuFormula>;

// Mu-calculus AST. Derived connectives (|, ->, forall) are normalized away
// at parse time using the standard abbreviations; Box, Nu and the
// live-guarded modalities are kept first class. Double negations introduced
// by normalization are simplified on construction.
struct MuFormula {
  enum class Kind {
    Query,      // FO query leaf (atoms, equalities, their boolean combos)
    Not,
    And,
    Exists,     // unrestricted quantification (full muL)
    ExistsLive, // exists x. live(x) & body
    Dia,
    Box,
    DiaLive,    // dia(live(x...) & body)
    BoxLive,    // box(live(x...) & body)
    PredVar,
    Mu,
    Nu,
    Live,       // live(x) or live(t) once grounded
  };

  Kind kind;
  FormulaPtr query;             // Query
  std::vector<MuPtr> children;  // Not:1, And:n
  std::string name;             // Exists*/PredVar/Mu/Nu
  MuPtr body;                   // Exists*/Dia/Box/DiaLive/BoxLive/Mu/Nu
  std::vector<QArg> live_args;  // Live:1, DiaLive/BoxLive guard

  static MuPtr query_leaf(FormulaPtr q);
  static MuPtr negation(MuPtr f);
  static MuPtr conj(std::vector<MuPtr> fs);
  static MuPtr disj(std::vector<MuPtr> fs);  // normalized to !(!a & !b)
  static MuPtr exists_raw(std::string var, MuPtr body);
  static MuPtr exists_live(std::string var, MuPtr body);
  static MuPtr dia(MuPtr body);
  static MuPtr box(MuPtr body);
  static MuPtr dia_live(std::vector<QArg> args, MuPtr body);
  static MuPtr box_live(std::vector<QArg> args, MuPtr body);
  static MuPtr pred_var(std::string name);
  static MuPtr mu(std::string var, MuPtr body);
  static MuPtr nu(std::string var, MuPtr body);
  static MuPtr live(QArg arg);
  static MuPtr truth();
  static MuPtr falsity();
};

enum class MuFragment { MuL, MuLA, MuLP };

std::string fragment_name(MuFragment f);

struct MuParseResult {
  MuPtr formula;
  std::vector<Diagnostic> errors;
};

// Parses a formula; `constants` resolves bare identifiers in argument
// positions (quoted and numeric tokens are always constants). Rejects unbound
// predicate variables and fixpoints violating syntactic monotonicity.
MuParseResult parse_mu_formula(const std::string& text, const std::set<std::string>& constants);

// Tightest fragment the formula falls into. MuLP implies MuLA.
MuFragment classify(const MuPtr& f);

// Free individual variables; bound predicate variables contribute the free
// variables of their bounding formula, computed by a fixpoint over the
// binder dependency graph.
std::set<std::string> mu_free_vars(const MuPtr& f);

// Free variables by substitution: var -> ground term.
MuPtr mu_substitute(const MuPtr& f, const std::map<std::string, Term>& binding);

std::string mu_str(const MuPtr& f);

// Replaces fixpoint binders by their negated duals: nu Z. f(Z) becomes
// !mu Z. !f(!Z) and vice versa. Used by the duality checks.
MuPtr dualize_fixpoint(const MuPtr& f);

}  // namespace dcds
