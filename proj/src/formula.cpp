#include "formula.hpp"

#include <sstream>
#include <stdexcept>

namespace dcds {

QArg QArg::var(std::string name) {
  QArg a;
  a.is_var = true;
  a.name = std::move(name);
  return a;
}

QArg QArg::ground(Term t) {
  QArg a;
  a.is_var = false;
  a.term = std::move(t);
  return a;
}

std::string QArg::str() const { return is_var ? name : term.str(); }

bool operator==(const QArg& a, const QArg& b) {
  if (a.is_var != b.is_var) return false;
  return a.is_var ? a.name == b.name : a.term == b.term;
}

bool operator<(const QArg& a, const QArg& b) {
  if (a.is_var != b.is_var) return a.is_var;
  if (a.is_var) return a.name < b.name;
  return a.term < b.term;
}

namespace {
FormulaPtr node(Formula f) { return std::make_shared<const Formula>(std::move(f)); }
}  // namespace

FormulaPtr Formula::truth() { return node({Kind::True, {}, {}, {}, {}, nullptr}); }

FormulaPtr Formula::atom(std::string rel, std::vector<QArg> args) {
  return node({Kind::Atom, std::move(rel), std::move(args), {}, {}, nullptr});
}

FormulaPtr Formula::eq(QArg lhs, QArg rhs) {
  return node({Kind::Eq, {}, {std::move(lhs), std::move(rhs)}, {}, {}, nullptr});
}

FormulaPtr Formula::negation(FormulaPtr f) {
  return node({Kind::Not, {}, {}, {std::move(f)}, {}, nullptr});
}

FormulaPtr Formula::conj(std::vector<FormulaPtr> fs) {
  if (fs.empty()) return truth();
  if (fs.size() == 1) return fs[0];
  return node({Kind::And, {}, {}, std::move(fs), {}, nullptr});
}

FormulaPtr Formula::disj(std::vector<FormulaPtr> fs) {
  if (fs.empty()) throw std::invalid_argument("empty disjunction");
  if (fs.size() == 1) return fs[0];
  return node({Kind::Or, {}, {}, std::move(fs), {}, nullptr});
}

FormulaPtr Formula::implies(FormulaPtr lhs, FormulaPtr rhs) {
  return node({Kind::Implies, {}, {}, {std::move(lhs), std::move(rhs)}, {}, nullptr});
}

FormulaPtr Formula::exists(std::vector<std::string> vars, FormulaPtr body) {
  return node({Kind::Exists, {}, {}, {}, std::move(vars), std::move(body)});
}

FormulaPtr Formula::forall(std::vector<std::string> vars, FormulaPtr body) {
  return node({Kind::Forall, {}, {}, {}, std::move(vars), std::move(body)});
}

std::set<std::string> free_vars(const FormulaPtr& f) {
  std::set<std::string> out;
  switch (f->kind) {
    case Formula::Kind::True:
      break;
    case Formula::Kind::Atom:
    case Formula::Kind::Eq:
      for (const QArg& a : f->args) {
        if (a.is_var) out.insert(a.name);
      }
      break;
    case Formula::Kind::Not:
    case Formula::Kind::And:
    case Formula::Kind::Or:
    case Formula::Kind::Implies:
      for (const auto& c : f->children) {
        auto sub = free_vars(c);
        out.insert(sub.begin(), sub.end());
      }
      break;
    case Formula::Kind::Exists:
    case Formula::Kind::Forall: {
      out = free_vars(f->body);
      for (const auto& v : f->vars) out.erase(v);
      break;
    }
  }
  return out;
}

FormulaPtr substitute(const FormulaPtr& f, const std::map<std::string, Term>& binding) {
  switch (f->kind) {
    case Formula::Kind::True:
      return f;
    case Formula::Kind::Atom:
    case Formula::Kind::Eq: {
      std::vector<QArg> args = f->args;
      bool changed = false;
      for (QArg& a : args) {
        if (a.is_var) {
          auto it = binding.find(a.name);
          if (it != binding.end()) {
            a = QArg::ground(it->second);
            changed = true;
          }
        }
      }
      if (!changed) return f;
      return f->kind == Formula::Kind::Atom ? Formula::atom(f->rel, std::move(args))
                                            : Formula::eq(args[0], args[1]);
    }
    case Formula::Kind::Not:
      return Formula::negation(substitute(f->children[0], binding));
    case Formula::Kind::And:
    case Formula::Kind::Or:
    case Formula::Kind::Implies: {
      std::vector<FormulaPtr> kids;
      kids.reserve(f->children.size());
      for (const auto& c : f->children) kids.push_back(substitute(c, binding));
      if (f->kind == Formula::Kind::And) return Formula::conj(std::move(kids));
      if (f->kind == Formula::Kind::Or) return Formula::disj(std::move(kids));
      return Formula::implies(kids[0], kids[1]);
    }
    case Formula::Kind::Exists:
    case Formula::Kind::Forall: {
      std::map<std::string, Term> inner = binding;
      for (const auto& v : f->vars) inner.erase(v);
      FormulaPtr body = inner.empty() ? f->body : substitute(f->body, inner);
      return f->kind == Formula::Kind::Exists ? Formula::exists(f->vars, body)
                                              : Formula::forall(f->vars, body);
    }
  }
  throw std::logic_error("unreachable");
}

namespace {

int precedence(Formula::Kind k) {
  switch (k) {
    case Formula::Kind::Implies:
      return 1;
    case Formula::Kind::Or:
      return 2;
    case Formula::Kind::And:
      return 3;
    default:
      return 4;
  }
}

void print(const FormulaPtr& f, std::ostringstream& out, int parent_prec) {
  int prec = precedence(f->kind);
  bool parens = prec < parent_prec;
  switch (f->kind) {
    case Formula::Kind::True:
      out << "true";
      return;
    case Formula::Kind::Atom: {
      out << f->rel << '(';
      for (size_t i = 0; i < f->args.size(); ++i) {
        if (i) out << ", ";
        out << f->args[i].str();
      }
      out << ')';
      return;
    }
    case Formula::Kind::Eq:
      out << f->args[0].str() << " = " << f->args[1].str();
      return;
    case Formula::Kind::Not:
      out << '!';
      print(f->children[0], out, 5);
      return;
    case Formula::Kind::And:
    case Formula::Kind::Or: {
      if (parens) out << '(';
      const char* sep = f->kind == Formula::Kind::And ? " & " : " | ";
      for (size_t i = 0; i < f->children.size(); ++i) {
        if (i) out << sep;
        print(f->children[i], out, prec + 1);
      }
      if (parens) out << ')';
      return;
    }
    case Formula::Kind::Implies:
      if (parens) out << '(';
      print(f->children[0], out, prec + 1);
      out << " -> ";
      print(f->children[1], out, prec);
      if (parens) out << ')';
      return;
    case Formula::Kind::Exists:
    case Formula::Kind::Forall: {
      if (parens) out << '(';
      out << (f->kind == Formula::Kind::Exists ? "exists " : "forall ");
      for (size_t i = 0; i < f->vars.size(); ++i) {
        if (i) out << ", ";
        out << f->vars[i];
      }
      out << ". ";
      print(f->body, out, 1);
      if (parens) out << ')';
      return;
    }
  }
}

}  // namespace

std::string formula_str(const FormulaPtr& f) {
  std::ostringstream out;
  print(f, out, 0);
  return out.str();
}

std::set<Term> formula_constants(const FormulaPtr& f) {
  std::set<Term> out;
  if (f->kind == Formula::Kind::Atom || f->kind == Formula::Kind::Eq) {
    for (const QArg& a : f->args) {
      if (!a.is_var) out.insert(a.term);
    }
  }
  for (const auto& c : f->children) {
    auto sub = formula_constants(c);
    out.insert(sub.begin(), sub.end());
  }
  if (f->body) {
    auto sub = formula_constants(f->body);
    out.insert(sub.begin(), sub.end());
  }
  return out;
}

std::set<std::string> formula_relations(const FormulaPtr& f) {
  std::set<std::string> out;
  if (f->kind == Formula::Kind::Atom) out.insert(f->rel);
  for (const auto& c : f->children) {
    auto sub = formula_relations(c);
    out.insert(sub.begin(), sub.end());
  }
  if (f->body) {
    auto sub = formula_relations(f->body);
    out.insert(sub.begin(), sub.end());
  }
  return out;
}

bool formula_equal(const FormulaPtr& a, const FormulaPtr& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  if (a->kind != b->kind || a->rel != b->rel || a->args != b->args || a->vars != b->vars) {
    return false;
  }
  if (a->children.size() != b->children.size()) return false;
  for (size_t i = 0; i < a->children.size(); ++i) {
    if (!formula_equal(a->children[i], b->children[i])) return false;
  }
  if ((a->body == nullptr) != (b->body == nullptr)) return false;
  if (a->body && !formula_equal(a->body, b->body)) return false;
  return true;
}

std::string EqualityConstraint::str() const {
  std::ostringstream out;
  out << formula_str(body) << " -> ";
  for (size_t i = 0; i < equalities.size(); ++i) {
    if (i) out << " & ";
    out << equalities[i].first.str() << " = " << equalities[i].second.str();
  }
  return out.str();
}

}  // namespace dcds
