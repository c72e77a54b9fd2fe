#include "spec.hpp"

#include <algorithm>
#include <regex>
#include <sstream>

#include "query_eval.hpp"

namespace dcds {

std::string HeadArg::str() const {
  switch (kind) {
    case Kind::Var:
      return var;
    case Kind::Const:
      return constant.str();
    case Kind::Call: {
      std::ostringstream out;
      out << function << '(';
      for (size_t i = 0; i < args.size(); ++i) {
        if (i) out << ", ";
        out << args[i].str();
      }
      out << ')';
      return out.str();
    }
  }
  return "";
}

bool operator==(const HeadArg& a, const HeadArg& b) {
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case HeadArg::Kind::Var:
      return a.var == b.var;
    case HeadArg::Kind::Const:
      return a.constant == b.constant;
    case HeadArg::Kind::Call:
      return a.function == b.function && a.args == b.args;
  }
  return false;
}

std::string FactTemplate::str() const {
  std::ostringstream out;
  out << rel << '(';
  for (size_t i = 0; i < args.size(); ++i) {
    if (i) out << ", ";
    out << args[i].str();
  }
  out << ')';
  return out.str();
}

namespace {

void flatten_conj(const FormulaPtr& f, std::vector<FormulaPtr>* out) {
  if (f->kind == Formula::Kind::And) {
    for (const auto& c : f->children) flatten_conj(c, out);
  } else {
    out->push_back(f);
  }
}

bool positive_cq(const FormulaPtr& f) {
  switch (f->kind) {
    case Formula::Kind::True:
    case Formula::Kind::Atom:
    case Formula::Kind::Eq:
      return true;
    case Formula::Kind::And:
      return std::all_of(f->children.begin(), f->children.end(), positive_cq);
    default:
      return false;
  }
}

// Positive component: true, atoms, equalities, and unions of conjunctive
// queries. Anything else (negation, implication, quantifiers, non-UCQ
// disjunctions) belongs to the filter Q-.
bool positive_component(const FormulaPtr& f) {
  if (positive_cq(f)) return true;
  if (f->kind == Formula::Kind::Or) {
    return std::all_of(f->children.begin(), f->children.end(), positive_cq);
  }
  return false;
}

}  // namespace

std::vector<FormulaPtr> EffectSpec::positive_conjuncts() const {
  std::vector<FormulaPtr> conjuncts;
  flatten_conj(body, &conjuncts);
  std::vector<FormulaPtr> out;
  for (const auto& c : conjuncts) {
    if (positive_component(c)) out.push_back(c);
  }
  return out;
}

std::vector<FormulaPtr> EffectSpec::negative_conjuncts() const {
  std::vector<FormulaPtr> conjuncts;
  flatten_conj(body, &conjuncts);
  std::vector<FormulaPtr> out;
  for (const auto& c : conjuncts) {
    if (!positive_component(c)) out.push_back(c);
  }
  return out;
}

FormulaPtr EffectSpec::positive_body() const { return Formula::conj(positive_conjuncts()); }

const Action* DcdsSpec::find_action(const std::string& name) const {
  for (const Action& a : actions) {
    if (a.name == name) return &a;
  }
  return nullptr;
}

std::vector<EqualityConstraint> DcdsSpec::ecs() const {
  std::vector<EqualityConstraint> out;
  out.reserve(constraints.size());
  for (const auto& c : constraints) out.push_back(c.ec);
  return out;
}

bool spec_equal(const DcdsSpec& a, const DcdsSpec& b) {
  if (a.semantics != b.semantics || a.constants != b.constants || a.schema != b.schema ||
      a.services != b.services || !(a.init == b.init)) {
    return false;
  }
  if (a.constraints.size() != b.constraints.size()) return false;
  for (size_t i = 0; i < a.constraints.size(); ++i) {
    if (!formula_equal(a.constraints[i].ec.body, b.constraints[i].ec.body)) return false;
    if (a.constraints[i].ec.equalities != b.constraints[i].ec.equalities) return false;
  }
  if (a.actions.size() != b.actions.size()) return false;
  for (size_t i = 0; i < a.actions.size(); ++i) {
    const Action& x = a.actions[i];
    const Action& y = b.actions[i];
    if (x.name != y.name || x.params != y.params || x.effects.size() != y.effects.size()) {
      return false;
    }
    for (size_t j = 0; j < x.effects.size(); ++j) {
      if (!formula_equal(x.effects[j].body, y.effects[j].body)) return false;
      if (!(x.effects[j].head == y.effects[j].head)) return false;
    }
  }
  if (a.process.size() != b.process.size()) return false;
  for (size_t i = 0; i < a.process.size(); ++i) {
    if (a.process[i].action != b.process[i].action) return false;
    if (!formula_equal(a.process[i].guard, b.process[i].guard)) return false;
  }
  return true;
}

std::string Diagnostic::str(const std::string& file) const {
  std::ostringstream out;
  if (!file.empty()) out << file << ':';
  out << line << ':' << col << ": "
      << (severity == Severity::Error ? "error" : "warning") << ": " << message;
  return out.str();
}

namespace {

struct Validator {
  const DcdsSpec& spec;
  std::vector<Diagnostic> diags;
  std::set<Term> init_adom;

  void error(int line, int col, const std::string& msg) {
    diags.push_back({Diagnostic::Severity::Error, line, col, msg});
  }

  void check_formula_atoms(const FormulaPtr& f, int line, int col) {
    if (f->kind == Formula::Kind::Atom) {
      auto it = spec.schema.find(f->rel);
      if (it == spec.schema.end()) {
        error(line, col, "unknown relation '" + f->rel + "'");
      } else if (static_cast<size_t>(it->second) != f->args.size()) {
        error(line, col, "relation '" + f->rel + "' used with arity " +
                             std::to_string(f->args.size()) + ", declared " +
                             std::to_string(it->second));
      }
    }
    for (const auto& c : f->children) check_formula_atoms(c, line, col);
    if (f->body) check_formula_atoms(f->body, line, col);
  }

  void check_formula_constants(const FormulaPtr& f, int line, int col, const char* where) {
    for (const Term& t : formula_constants(f)) {
      if (!init_adom.count(t)) {
        error(line, col, std::string(where) + " uses constant " + t.str() +
                             " that does not appear in the initial instance");
      }
    }
  }

  void run() {
    init_adom = spec.init.adom();

    for (const auto& [name, arity] : spec.schema) {
      if (spec.services.count(name)) {
        error(1, 1, "'" + name + "' declared both as relation and service");
      }
      if (arity < 0) error(1, 1, "negative arity for relation '" + name + "'");
    }
    static const std::regex fresh_value_re("\\$v[0-9]+");
    for (const std::string& c : spec.constants) {
      if (std::regex_match(c, fresh_value_re)) {
        error(1, 1, "constant '" + c +
                        "' collides with the reserved fresh-value namespace $v<n>");
      }
    }

    for (const Fact& f : spec.init.facts()) {
      auto it = spec.schema.find(f.rel);
      if (it == spec.schema.end()) {
        error(1, 1, "initial instance uses unknown relation '" + f.rel + "'");
      } else if (static_cast<size_t>(it->second) != f.args.size()) {
        error(1, 1, "initial fact " + f.str() + " has wrong arity for '" + f.rel + "'");
      }
      for (const Term& t : f.args) {
        if (t.is_call()) error(1, 1, "initial fact " + f.str() + " contains a service call");
      }
    }

    for (size_t k = 0; k < spec.constraints.size(); ++k) {
      const LocatedEc& lec = spec.constraints[k];
      check_formula_atoms(lec.ec.body, lec.line, lec.col);
      check_formula_constants(lec.ec.body, lec.line, lec.col, "constraint body");
      auto body_vars = free_vars(lec.ec.body);
      for (const auto& [l, r] : lec.ec.equalities) {
        for (const QArg* side : {&l, &r}) {
          if (side->is_var) {
            if (!body_vars.count(side->name)) {
              error(lec.line, lec.col,
                    "equality variable '" + side->name + "' is not free in the constraint body");
            }
          } else if (!init_adom.count(side->term)) {
            error(lec.line, lec.col, "constraint equality uses constant " + side->term.str() +
                                         " that does not appear in the initial instance");
          }
        }
      }
    }

    for (const Action& a : spec.actions) {
      std::set<std::string> params(a.params.begin(), a.params.end());
      if (params.size() != a.params.size()) {
        error(a.line, a.col, "action '" + a.name + "' repeats a parameter");
      }
      for (const EffectSpec& e : a.effects) {
        check_formula_atoms(e.body, e.line, e.col);
        check_formula_constants(e.body, e.line, e.col, "effect body");
        std::set<std::string> plus_vars;
        for (const auto& c : e.positive_conjuncts()) {
          auto fv = free_vars(c);
          plus_vars.insert(fv.begin(), fv.end());
        }
        for (const auto& c : e.negative_conjuncts()) {
          for (const std::string& v : free_vars(c)) {
            if (!plus_vars.count(v) && !params.count(v)) {
              error(e.line, e.col,
                    "filter variable '" + v + "' is not free in the positive effect query");
            }
          }
        }
        auto check_simple = [&](const HeadArg& arg) {
          if (arg.kind == HeadArg::Kind::Var) {
            if (!plus_vars.count(arg.var) && !params.count(arg.var)) {
              error(e.line, e.col, "head variable '" + arg.var +
                                       "' is neither an action parameter nor free in the "
                                       "positive effect query");
            }
          } else if (arg.kind == HeadArg::Kind::Const) {
            if (!init_adom.count(arg.constant)) {
              error(e.line, e.col, "head constant " + arg.constant.str() +
                                       " does not appear in the initial instance");
            }
          }
        };
        for (const FactTemplate& ft : e.head) {
          auto it = spec.schema.find(ft.rel);
          if (it == spec.schema.end()) {
            error(e.line, e.col, "head uses unknown relation '" + ft.rel + "'");
          } else if (static_cast<size_t>(it->second) != ft.args.size()) {
            error(e.line, e.col, "head fact " + ft.str() + " has wrong arity for '" + ft.rel + "'");
          }
          for (const HeadArg& arg : ft.args) {
            if (arg.kind == HeadArg::Kind::Call) {
              auto sit = spec.services.find(arg.function);
              if (sit == spec.services.end()) {
                error(e.line, e.col, "call to undeclared service '" + arg.function + "'");
              } else if (static_cast<size_t>(sit->second) != arg.args.size()) {
                error(e.line, e.col, "service '" + arg.function + "' called with arity " +
                                         std::to_string(arg.args.size()) + ", declared " +
                                         std::to_string(sit->second));
              }
              for (const HeadArg& inner : arg.args) {
                if (inner.kind == HeadArg::Kind::Call) {
                  error(e.line, e.col, "nested service call in head template");
                } else {
                  check_simple(inner);
                }
              }
            } else {
              check_simple(arg);
            }
          }
        }
      }
    }

    for (const ConditionActionRule& r : spec.process) {
      const Action* a = spec.find_action(r.action);
      if (!a) {
        error(r.line, r.col, "rule names unknown action '" + r.action + "'");
        continue;
      }
      check_formula_atoms(r.guard, r.line, r.col);
      check_formula_constants(r.guard, r.line, r.col, "rule guard");
      auto gv = free_vars(r.guard);
      std::set<std::string> params(a->params.begin(), a->params.end());
      if (gv != params) {
        std::ostringstream msg;
        msg << "guard free variables {";
        bool first = true;
        for (const auto& v : gv) {
          msg << (first ? "" : ", ") << v;
          first = false;
        }
        msg << "} must be exactly the parameters of action '" << r.action << "'";
        error(r.line, r.col, msg.str());
      }
    }

    // The initial instance must satisfy the equality constraints.
    if (diags.empty()) {
      EcCheck check = satisfies_ec(spec.init, spec.ecs());
      if (!check.ok) {
        error(1, 1, "initial instance violates " + check.witness);
      }
    }
  }
};

}  // namespace

std::vector<Diagnostic> validate(const DcdsSpec& spec) {
  Validator v{spec};
  v.run();
  return v.diags;
}

bool valid(const std::vector<Diagnostic>& diags) {
  return std::none_of(diags.begin(), diags.end(), [](const Diagnostic& d) {
    return d.severity == Diagnostic::Severity::Error;
  });
}

std::string pretty_print(const DcdsSpec& spec) {
  std::ostringstream out;
  out << "semantics "
      << (spec.semantics == Semantics::Deterministic ? "deterministic" : "nondeterministic")
      << ";\n\n";
  if (!spec.constants.empty()) {
    out << "constants {";
    bool first = true;
    for (const std::string& c : spec.constants) {
      out << (first ? " " : ", ") << Term::constant(c).str();
      first = false;
    }
    out << " }\n\n";
  }
  out << "schema {";
  bool first = true;
  for (const auto& [name, arity] : spec.schema) {
    out << (first ? " " : " ") << name << '/' << arity << ';';
    first = false;
  }
  out << " }\n\n";
  if (!spec.services.empty()) {
    out << "services {";
    for (const auto& [name, arity] : spec.services) {
      out << ' ' << name << '/' << arity << ';';
    }
    out << " }\n\n";
  }
  out << "init {";
  for (const Fact& f : spec.init.facts()) out << ' ' << f.str() << ';';
  out << " }\n\n";
  if (!spec.constraints.empty()) {
    out << "constraints {\n";
    for (const auto& c : spec.constraints) out << "  " << c.ec.str() << ";\n";
    out << "}\n\n";
  }
  for (const Action& a : spec.actions) {
    out << "action " << a.name << '(';
    for (size_t i = 0; i < a.params.size(); ++i) {
      if (i) out << ", ";
      out << a.params[i];
    }
    out << ") {\n";
    for (const EffectSpec& e : a.effects) {
      out << "  " << formula_str(e.body) << " ~> ";
      for (size_t i = 0; i < e.head.size(); ++i) {
        if (i) out << ", ";
        out << e.head[i].str();
      }
      out << ";\n";
    }
    out << "}\n\n";
  }
  out << "process {\n";
  for (const ConditionActionRule& r : spec.process) {
    out << "  " << formula_str(r.guard) << " => " << r.action << ";\n";
  }
  out << "}\n";
  return out.str();
}

}  // namespace dcds
