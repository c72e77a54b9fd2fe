#include "query_eval.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace dcds {

namespace {

// Evaluation works over answer sets keyed by exactly the free variables of
// the subformula at hand; padding extends a set over additional variables by
// the full active domain (active-domain complementation).

using AnswerSet = std::set<Assignment>;

std::vector<std::string> sorted(const std::set<std::string>& s) {
  return std::vector<std::string>(s.begin(), s.end());
}

AnswerSet all_assignments(const std::set<std::string>& vars, const std::set<Term>& adom) {
  AnswerSet out;
  out.insert(Assignment{});
  for (const std::string& v : vars) {
    AnswerSet next;
    for (const Assignment& a : out) {
      for (const Term& t : adom) {
        Assignment b = a;
        b[v] = t;
        next.insert(std::move(b));
      }
    }
    out = std::move(next);
  }
  return out;
}

AnswerSet pad(const AnswerSet& in, const std::set<std::string>& have,
              const std::set<std::string>& want, const std::set<Term>& adom) {
  std::set<std::string> missing;
  for (const std::string& v : want) {
    if (!have.count(v)) missing.insert(v);
  }
  if (missing.empty()) return in;
  AnswerSet pads = all_assignments(missing, adom);
  AnswerSet out;
  for (const Assignment& a : in) {
    for (const Assignment& p : pads) {
      Assignment b = a;
      b.insert(p.begin(), p.end());
      out.insert(std::move(b));
    }
  }
  return out;
}

struct Evaluator {
  const Instance& inst;
  const Schema* schema;
  std::set<Term> adom;

  AnswerSet eval_free(const FormulaPtr& f) {
    switch (f->kind) {
      case Formula::Kind::True:
        return {Assignment{}};
      case Formula::Kind::Atom:
        return eval_atom(f);
      case Formula::Kind::Eq:
        return eval_eq(f);
      case Formula::Kind::Not: {
        auto vars = free_vars(f->children[0]);
        AnswerSet inner = eval_free(f->children[0]);
        AnswerSet all = all_assignments(vars, adom);
        AnswerSet out;
        std::set_difference(all.begin(), all.end(), inner.begin(), inner.end(),
                            std::inserter(out, out.begin()));
        return out;
      }
      case Formula::Kind::And: {
        AnswerSet acc = {Assignment{}};
        for (const auto& c : f->children) {
          AnswerSet rhs = eval_free(c);
          AnswerSet joined;
          for (const Assignment& a : acc) {
            for (const Assignment& b : rhs) {
              bool compatible = true;
              for (const auto& [v, t] : b) {
                auto it = a.find(v);
                if (it != a.end() && !(it->second == t)) {
                  compatible = false;
                  break;
                }
              }
              if (!compatible) continue;
              Assignment merged = a;
              merged.insert(b.begin(), b.end());
              joined.insert(std::move(merged));
            }
          }
          acc = std::move(joined);
          if (acc.empty()) break;
        }
        return acc;
      }
      case Formula::Kind::Or: {
        auto vars = free_vars(f);
        AnswerSet out;
        for (const auto& c : f->children) {
          AnswerSet part = pad(eval_free(c), free_vars(c), vars, adom);
          out.insert(part.begin(), part.end());
        }
        return out;
      }
      case Formula::Kind::Implies: {
        // a -> b  ==  !a | b over the union of their free variables
        auto rewritten = Formula::disj({Formula::negation(f->children[0]), f->children[1]});
        return eval_free(rewritten);
      }
      case Formula::Kind::Exists: {
        AnswerSet inner = eval_free(f->body);
        AnswerSet out;
        for (const Assignment& a : inner) {
          Assignment b = a;
          for (const std::string& v : f->vars) b.erase(v);
          out.insert(std::move(b));
        }
        return out;
      }
      case Formula::Kind::Forall: {
        // forall x. b  ==  !(exists x. !b)
        auto rewritten =
            Formula::negation(Formula::exists(f->vars, Formula::negation(f->body)));
        return eval_free(rewritten);
      }
    }
    throw std::logic_error("unreachable");
  }

  AnswerSet eval_atom(const FormulaPtr& f) {
    if (schema && !schema->count(f->rel)) {
      throw std::invalid_argument("unbound relation symbol: " + f->rel);
    }
    AnswerSet out;
    for (const Fact& fact : inst.facts()) {
      if (fact.rel != f->rel || fact.args.size() != f->args.size()) continue;
      Assignment binding;
      bool match = true;
      for (size_t i = 0; i < f->args.size(); ++i) {
        const QArg& arg = f->args[i];
        if (arg.is_var) {
          auto it = binding.find(arg.name);
          if (it == binding.end()) {
            binding[arg.name] = fact.args[i];
          } else if (!(it->second == fact.args[i])) {
            match = false;
            break;
          }
        } else if (!(arg.term == fact.args[i])) {
          match = false;
          break;
        }
      }
      if (match) out.insert(std::move(binding));
    }
    return out;
  }

  AnswerSet eval_eq(const FormulaPtr& f) {
    const QArg& l = f->args[0];
    const QArg& r = f->args[1];
    AnswerSet out;
    if (!l.is_var && !r.is_var) {
      if (l.term == r.term) out.insert(Assignment{});
      return out;
    }
    if (l.is_var && r.is_var) {
      if (l.name == r.name) {
        for (const Term& t : adom) out.insert({{l.name, t}});
        return out;
      }
      for (const Term& t : adom) out.insert({{l.name, t}, {r.name, t}});
      return out;
    }
    const QArg& v = l.is_var ? l : r;
    const QArg& g = l.is_var ? r : l;
    if (adom.count(g.term)) out.insert({{v.name, g.term}});
    return out;
  }
};

}  // namespace

std::set<Assignment> eval(const FormulaPtr& q, const Instance& i, const Schema* schema) {
  Evaluator ev{i, schema, i.adom()};
  return ev.eval_free(q);
}

bool eval_bool(const FormulaPtr& q, const Instance& i, const Schema* schema) {
  return !eval(q, i, schema).empty();
}

EcCheck satisfies_ec(const Instance& i, const std::vector<EqualityConstraint>& ecs) {
  for (size_t k = 0; k < ecs.size(); ++k) {
    const EqualityConstraint& ec = ecs[k];
    for (const Assignment& theta : eval(ec.body, i)) {
      for (const auto& [lhs, rhs] : ec.equalities) {
        Term l = lhs.is_var ? theta.at(lhs.name) : lhs.term;
        Term r = rhs.is_var ? theta.at(rhs.name) : rhs.term;
        if (!(l == r)) {
          std::ostringstream w;
          w << "constraint #" << (k + 1) << ": " << lhs.str() << " = " << l.str()
            << " but " << rhs.str() << " = " << r.str();
          bool first = true;
          for (const auto& [var, t] : theta) {
            w << (first ? " under " : ", ") << var << " = " << t.str();
            first = false;
          }
          return {false, w.str()};
        }
      }
    }
  }
  return {true, ""};
}

}  // namespace dcds
