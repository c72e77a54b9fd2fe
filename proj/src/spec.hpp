#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "formula.hpp"
#include "instance.hpp"

namespace dcds {

enum class Semantics { Deterministic, Nondeterministic };

// Argument of a head fact template: a parameter/query variable, a constant,
// or a service-call template over variables and constants (no nesting).
struct HeadArg {
  enum class Kind { Var, Const, Call };
  Kind kind;
  std::string var;             // Var
  Term constant;               // Const
  std::string function;        // Call
  std::vector<HeadArg> args;   // Call arguments (Var or Const only)

  std::string str() const;
  friend bool operator==(const HeadArg& a, const HeadArg& b);
  friend bool operator!=(const HeadArg& a, const HeadArg& b) { return !(a == b); }
};

struct FactTemplate {
  std::string rel;
  std::vector<HeadArg> args;

  std::string str() const;
  friend bool operator==(const FactTemplate& a, const FactTemplate& b) {
    return a.rel == b.rel && a.args == b.args;
  }
};

// One effect specification q+ /\ Q- ~> E. The body is kept as parsed; the
// split into the positive part (a UCQ selecting bindings) and the filter is
// derived: top-level conjuncts that are atoms, equalities, `true`, or
// disjunctions of conjunctions thereof are positive, the rest form Q-.
struct EffectSpec {
  FormulaPtr body;
  std::vector<FactTemplate> head;
  int line = 0, col = 0;

  std::vector<FormulaPtr> positive_conjuncts() const;
  std::vector<FormulaPtr> negative_conjuncts() const;
  FormulaPtr positive_body() const;  // conjunction of the positive part
};

struct Action {
  std::string name;
  std::vector<std::string> params;
  std::vector<EffectSpec> effects;
  int line = 0, col = 0;
};

struct ConditionActionRule {
  FormulaPtr guard;
  std::string action;
  int line = 0, col = 0;
};

struct LocatedEc {
  EqualityConstraint ec;
  int line = 0, col = 0;
};

struct DcdsSpec {
  Semantics semantics = Semantics::Deterministic;
  std::set<std::string> constants;  // declared plus those occurring in init
  Schema schema;
  Schema services;
  Instance init;
  std::vector<LocatedEc> constraints;
  std::vector<Action> actions;
  std::vector<ConditionActionRule> process;

  const Action* find_action(const std::string& name) const;
  std::vector<EqualityConstraint> ecs() const;
};

bool spec_equal(const DcdsSpec& a, const DcdsSpec& b);

struct Diagnostic {
  enum class Severity { Error, Warning };
  Severity severity = Severity::Error;
  int line = 0;
  int col = 0;
  std::string message;

  std::string str(const std::string& file = "") const;
};

// Semantic validation; parse must have succeeded. Valid means no
// error-severity diagnostics.
std::vector<Diagnostic> validate(const DcdsSpec& spec);
bool valid(const std::vector<Diagnostic>& diags);

// Canonical source form; parses back to an equal spec.
std::string pretty_print(const DcdsSpec& spec);

}  // namespace dcds
