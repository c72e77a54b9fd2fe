#pragma once

#include <map>
#include <memory>
#include <set>
#include <string>
#include <vector>

#include "term.hpp"

namespace dcds {

// Argument of an atom or equality: a variable or a ground term. Query
// constants are ground constant terms; grounded queries over abstract
// instances may carry arbitrary ground terms (representatives).
struct QArg {
  static QArg var(std::string name);
  static QArg ground(Term t);

  bool is_var = false;
  std::string name;  // variable name when is_var
  Term term;         // ground term otherwise

  std::string str() const;
  friend bool operator==(const QArg& a, const QArg& b);
  friend bool operator!=(const QArg& a, const QArg& b) { return !(a == b); }
  friend bool operator<(const QArg& a, const QArg& b);
};

struct Formula;
using FormulaPtr = std::shared_ptr<const Formula>;

// First-order query AST. Derived connectives are kept as parsed so that
// printing round-trips; evaluation treats them by their definitions.
struct Formula {
  enum class Kind { True, Atom, Eq, Not, And, Or, Implies, Exists, Forall };

  Kind kind;
  std::string rel;                  // Atom
  std::vector<QArg> args;           // Atom (all), Eq (two)
  std::vector<FormulaPtr> children; // Not:1, And/Or:>=2, Implies:2
  std::vector<std::string> vars;    // Exists/Forall
  FormulaPtr body;                  // Exists/Forall

  static FormulaPtr truth();
  static FormulaPtr atom(std::string rel, std::vector<QArg> args);
  static FormulaPtr eq(QArg lhs, QArg rhs);
  static FormulaPtr negation(FormulaPtr f);
  static FormulaPtr conj(std::vector<FormulaPtr> fs);
  static FormulaPtr disj(std::vector<FormulaPtr> fs);
  static FormulaPtr implies(FormulaPtr lhs, FormulaPtr rhs);
  static FormulaPtr exists(std::vector<std::string> vars, FormulaPtr body);
  static FormulaPtr forall(std::vector<std::string> vars, FormulaPtr body);
};

std::set<std::string> free_vars(const FormulaPtr& f);

// Replaces free variables by ground terms. Bound variables shadow.
FormulaPtr substitute(const FormulaPtr& f, const std::map<std::string, Term>& binding);

std::string formula_str(const FormulaPtr& f);

// All constants (ground terms) mentioned in the formula.
std::set<Term> formula_constants(const FormulaPtr& f);

// Relation symbols used by atoms.
std::set<std::string> formula_relations(const FormulaPtr& f);

// Structural equality (used by spec round-trip checks).
bool formula_equal(const FormulaPtr& a, const FormulaPtr& b);

// Q -> /\ z_i = y_i over the schema; body free variables cover the z/y
// variables, other sides may be constants.
struct EqualityConstraint {
  FormulaPtr body;
  std::vector<std::pair<QArg, QArg>> equalities;

  std::string str() const;
};

}  // namespace dcds
