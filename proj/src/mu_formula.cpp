#include "mu_formula.hpp"

#include <algorithm>
#include <functional>
#include <sstream>
#include <stdexcept>

#include "lexer.hpp"

namespace dcds {

namespace {
MuPtr node(MuFormula f) { return std::make_shared<const MuFormula>(std::move(f)); }
}  // namespace

MuPtr MuFormula::query_leaf(FormulaPtr q) {
  return node({Kind::Query, std::move(q), {}, {}, nullptr, {}});
}

MuPtr MuFormula::negation(MuPtr f) {
  if (f->kind == Kind::Not) return f->children[0];
  return node({Kind::Not, nullptr, {std::move(f)}, {}, nullptr, {}});
}

MuPtr MuFormula::conj(std::vector<MuPtr> fs) {
  if (fs.empty()) return truth();
  if (fs.size() == 1) return fs[0];
  // Flatten nested conjunctions.
  std::vector<MuPtr> flat;
  for (MuPtr& f : fs) {
    if (f->kind == Kind::And) {
      flat.insert(flat.end(), f->children.begin(), f->children.end());
    } else {
      flat.push_back(std::move(f));
    }
  }
  return node({Kind::And, nullptr, std::move(flat), {}, nullptr, {}});
}

MuPtr MuFormula::disj(std::vector<MuPtr> fs) {
  std::vector<MuPtr> negated;
  negated.reserve(fs.size());
  for (MuPtr& f : fs) negated.push_back(negation(std::move(f)));
  return negation(conj(std::move(negated)));
}

MuPtr MuFormula::exists_raw(std::string var, MuPtr body) {
  return node({Kind::Exists, nullptr, {}, std::move(var), std::move(body), {}});
}

MuPtr MuFormula::exists_live(std::string var, MuPtr body) {
  return node({Kind::ExistsLive, nullptr, {}, std::move(var), std::move(body), {}});
}

MuPtr MuFormula::dia(MuPtr body) {
  return node({Kind::Dia, nullptr, {}, {}, std::move(body), {}});
}

MuPtr MuFormula::box(MuPtr body) {
  return node({Kind::Box, nullptr, {}, {}, std::move(body), {}});
}

MuPtr MuFormula::dia_live(std::vector<QArg> args, MuPtr body) {
  return node({Kind::DiaLive, nullptr, {}, {}, std::move(body), std::move(args)});
}

MuPtr MuFormula::box_live(std::vector<QArg> args, MuPtr body) {
  return node({Kind::BoxLive, nullptr, {}, {}, std::move(body), std::move(args)});
}

MuPtr MuFormula::pred_var(std::string name) {
  return node({Kind::PredVar, nullptr, {}, std::move(name), nullptr, {}});
}

MuPtr MuFormula::mu(std::string var, MuPtr body) {
  return node({Kind::Mu, nullptr, {}, std::move(var), std::move(body), {}});
}

MuPtr MuFormula::nu(std::string var, MuPtr body) {
  return node({Kind::Nu, nullptr, {}, std::move(var), std::move(body), {}});
}

MuPtr MuFormula::live(QArg arg) {
  return node({Kind::Live, nullptr, {}, {}, nullptr, {std::move(arg)}});
}

MuPtr MuFormula::truth() { return query_leaf(Formula::truth()); }

MuPtr MuFormula::falsity() { return negation(truth()); }

std::string fragment_name(MuFragment f) {
  switch (f) {
    case MuFragment::MuL:
      return "muL";
    case MuFragment::MuLA:
      return "muL_A";
    case MuFragment::MuLP:
      return "muL_P";
  }
  return "?";
}

// ---------------------------------------------------------------------------
// Parser

namespace {

bool numeric(const std::string& s) {
  return !s.empty() &&
         std::all_of(s.begin(), s.end(),
                     [](char c) { return std::isdigit(static_cast<unsigned char>(c)); });
}

struct MuParseError {
  Diagnostic diag;
};

struct MuParser {
  std::vector<Token> toks;
  size_t pos = 0;
  const std::set<std::string>& constants;

  const Token& peek(size_t ahead = 0) const {
    size_t i = pos + ahead;
    return i < toks.size() ? toks[i] : toks.back();
  }
  const Token& next() {
    const Token& t = peek();
    if (pos < toks.size() - 1) ++pos;
    return t;
  }
  bool at_punct(const std::string& p) const {
    return peek().kind == Token::Kind::Punct && peek().text == p;
  }
  bool at_keyword(const std::string& k) const {
    return peek().kind == Token::Kind::Ident && !peek().quoted && peek().text == k;
  }
  bool eat_punct(const std::string& p) {
    if (at_punct(p)) {
      next();
      return true;
    }
    return false;
  }
  [[noreturn]] void fail(const std::string& msg) {
    const Token& t = peek();
    throw MuParseError{{Diagnostic::Severity::Error, t.line, t.col, msg}};
  }
  void expect_punct(const std::string& p) {
    if (!eat_punct(p)) fail("expected '" + p + "'");
  }

  bool is_constant_token(const Token& t) const {
    return t.quoted || numeric(t.text) || constants.count(t.text) > 0;
  }

  QArg arg() {
    if (peek().kind != Token::Kind::Ident) fail("expected term");
    Token t = next();
    if (at_punct("(")) fail("service calls cannot appear in formulas");
    if (is_constant_token(t)) return QArg::ground(Term::constant(t.text));
    return QArg::var(t.text);
  }

  MuPtr formula() { return implication(); }

  MuPtr implication() {
    MuPtr lhs = disjunction();
    if (eat_punct("->")) {
      MuPtr rhs = implication();
      return MuFormula::disj({MuFormula::negation(lhs), rhs});
    }
    return lhs;
  }

  MuPtr disjunction() {
    std::vector<MuPtr> parts{conjunction()};
    while (eat_punct("|")) parts.push_back(conjunction());
    return parts.size() == 1 ? parts[0] : MuFormula::disj(std::move(parts));
  }

  MuPtr conjunction() {
    std::vector<MuPtr> parts{unary()};
    while (eat_punct("&")) parts.push_back(unary());
    return parts.size() == 1 ? parts[0] : MuFormula::conj(std::move(parts));
  }

  // Splits live(...) conjuncts off an And chain; returns the guard variables
  // in order of appearance.
  static void split_live(const MuPtr& f, std::vector<QArg>* lives, std::vector<MuPtr>* rest) {
    if (f->kind == MuFormula::Kind::Live) {
      lives->push_back(f->live_args[0]);
      return;
    }
    if (f->kind == MuFormula::Kind::And) {
      for (const MuPtr& c : f->children) split_live(c, lives, rest);
      return;
    }
    rest->push_back(f);
  }

  MuPtr quantifier(bool is_forall) {
    std::vector<std::string> vars;
    if (peek().kind != Token::Kind::Ident) fail("expected variable");
    vars.push_back(next().text);
    while (eat_punct(",")) {
      if (peek().kind != Token::Kind::Ident) fail("expected variable");
      vars.push_back(next().text);
    }
    expect_punct(".");
    MuPtr body = implication();
    if (is_forall) body = MuFormula::negation(body);
    // Innermost variable first.
    for (auto it = vars.rbegin(); it != vars.rend(); ++it) {
      body = bind_one(*it, body);
    }
    if (is_forall) body = MuFormula::negation(body);
    return body;
  }

  // exists v. body, recognizing the live(v) guard anywhere in a top-level
  // conjunction.
  static MuPtr bind_one(const std::string& v, MuPtr body) {
    std::vector<QArg> lives;
    std::vector<MuPtr> rest;
    split_live(body, &lives, &rest);
    bool guards_v = std::any_of(lives.begin(), lives.end(),
                                [&](const QArg& a) { return a.is_var && a.name == v; });
    if (!guards_v) return MuFormula::exists_raw(v, std::move(body));
    // Keep other live conjuncts in the body.
    std::vector<MuPtr> kept;
    bool dropped = false;
    for (const QArg& a : lives) {
      if (!dropped && a.is_var && a.name == v) {
        dropped = true;
        continue;
      }
      kept.push_back(MuFormula::live(a));
    }
    kept.insert(kept.end(), rest.begin(), rest.end());
    return MuFormula::exists_live(v, MuFormula::conj(std::move(kept)));
  }

  MuPtr modality(bool is_dia) {
    expect_punct("(");
    MuPtr body = implication();
    expect_punct(")");
    std::vector<QArg> lives;
    std::vector<MuPtr> rest;
    // Guard pattern: live(x...) & phi. An implication live(x...) -> phi has
    // already been normalized into !(live & !phi), which the Not case below
    // picks apart.
    if (body->kind == MuFormula::Kind::Live || body->kind == MuFormula::Kind::And) {
      split_live(body, &lives, &rest);
      if (!lives.empty()) {
        MuPtr inner = MuFormula::conj(std::move(rest));
        return is_dia ? MuFormula::dia_live(std::move(lives), inner)
                      : MuFormula::box_live(std::move(lives), inner);
      }
    }
    if (body->kind == MuFormula::Kind::Not) {
      const MuPtr& negated = body->children[0];
      if (negated->kind == MuFormula::Kind::Live || negated->kind == MuFormula::Kind::And) {
        std::vector<QArg> glives;
        std::vector<MuPtr> grest;
        split_live(negated, &glives, &grest);
        if (!glives.empty()) {
          // <live(x) -> phi> == !" [live(x) & !phi] " and dually for box.
          MuPtr inner = MuFormula::negation(MuFormula::conj(std::move(grest)));
          MuPtr guarded = is_dia ? MuFormula::box_live(std::move(glives), inner)
                                 : MuFormula::dia_live(std::move(glives), inner);
          return MuFormula::negation(guarded);
        }
      }
    }
    return is_dia ? MuFormula::dia(std::move(body)) : MuFormula::box(std::move(body));
  }

  MuPtr unary() {
    if (eat_punct("!")) return MuFormula::negation(unary());
    if (at_keyword("exists")) {
      next();
      return quantifier(false);
    }
    if (at_keyword("forall")) {
      next();
      return quantifier(true);
    }
    if (at_keyword("mu") || at_keyword("nu")) {
      bool is_mu = peek().text == "mu";
      next();
      if (peek().kind != Token::Kind::Ident) fail("expected predicate variable");
      std::string var = next().text;
      expect_punct(".");
      MuPtr body = implication();
      return is_mu ? MuFormula::mu(var, body) : MuFormula::nu(var, body);
    }
    if (at_keyword("dia") || at_keyword("box")) {
      bool is_dia = peek().text == "dia";
      next();
      return modality(is_dia);
    }
    if (at_keyword("live")) {
      next();
      expect_punct("(");
      std::vector<MuPtr> lives{MuFormula::live(arg())};
      while (eat_punct(",")) lives.push_back(MuFormula::live(arg()));
      expect_punct(")");
      return MuFormula::conj(std::move(lives));
    }
    if (at_keyword("true") &&
        !(peek(1).kind == Token::Kind::Punct && peek(1).text == "(")) {
      next();
      return MuFormula::truth();
    }
    if (at_keyword("false")) {
      next();
      return MuFormula::falsity();
    }
    if (eat_punct("(")) {
      MuPtr f = implication();
      expect_punct(")");
      return f;
    }
    if (peek().kind != Token::Kind::Ident) fail("expected formula");
    // Relation atom, equality, or predicate variable.
    if (peek(1).kind == Token::Kind::Punct && peek(1).text == "(" && !peek().quoted) {
      std::string rel = next().text;
      expect_punct("(");
      std::vector<QArg> args;
      if (!eat_punct(")")) {
        args.push_back(arg());
        while (eat_punct(",")) args.push_back(arg());
        expect_punct(")");
      }
      return MuFormula::query_leaf(Formula::atom(std::move(rel), std::move(args)));
    }
    if (peek(1).kind == Token::Kind::Punct && peek(1).text == "=") {
      QArg lhs = arg();
      expect_punct("=");
      QArg rhs = arg();
      return MuFormula::query_leaf(Formula::eq(std::move(lhs), std::move(rhs)));
    }
    // Bare identifier: a predicate variable.
    Token t = next();
    if (t.quoted || is_constant_token(t)) fail("expected formula, found constant");
    return MuFormula::pred_var(t.text);
  }
};

// Checks predicate-variable binding and syntactic monotonicity: every
// occurrence of a bound variable must be under an even number of negations
// within its binder.
void check_predvars(const MuPtr& f, std::map<std::string, int> polarity,
                    std::vector<Diagnostic>* errors) {
  switch (f->kind) {
    case MuFormula::Kind::PredVar: {
      auto it = polarity.find(f->name);
      if (it == polarity.end()) {
        errors->push_back({Diagnostic::Severity::Error, 1, 1,
                           "unbound predicate variable '" + f->name + "'"});
      } else if (it->second % 2 != 0) {
        errors->push_back({Diagnostic::Severity::Error, 1, 1,
                           "predicate variable '" + f->name +
                               "' occurs under an odd number of negation symbols"});
      }
      return;
    }
    case MuFormula::Kind::Not: {
      for (auto& [k, v] : polarity) ++v;
      check_predvars(f->children[0], polarity, errors);
      return;
    }
    case MuFormula::Kind::Mu:
    case MuFormula::Kind::Nu: {
      polarity[f->name] = 0;
      check_predvars(f->body, polarity, errors);
      return;
    }
    default:
      for (const MuPtr& c : f->children) check_predvars(c, polarity, errors);
      if (f->body) check_predvars(f->body, polarity, errors);
      return;
  }
}

}  // namespace

MuParseResult parse_mu_formula(const std::string& text, const std::set<std::string>& constants) {
  MuParseResult result;
  std::vector<Token> toks;
  LexError lerr;
  if (!lex(text, &toks, &lerr)) {
    result.errors.push_back({Diagnostic::Severity::Error, lerr.line, lerr.col, lerr.message});
    return result;
  }
  MuParser p{std::move(toks), 0, constants};
  try {
    MuPtr f = p.formula();
    if (p.peek().kind != Token::Kind::End) p.fail("trailing input after formula");
    check_predvars(f, {}, &result.errors);
    if (result.errors.empty()) result.formula = f;
  } catch (const MuParseError& e) {
    result.errors.push_back(e.diag);
  }
  return result;
}

// ---------------------------------------------------------------------------
// Free variables and classification

namespace {

struct FreeVarContext {
  // Per fixpoint binder name, the current estimate of the free variables of
  // its bounding formula.
  std::map<std::string, std::set<std::string>> binder_fv;

  std::set<std::string> free(const MuPtr& f) const {
    std::set<std::string> out;
    switch (f->kind) {
      case MuFormula::Kind::Query:
        return free_vars(f->query);
      case MuFormula::Kind::Live:
        if (f->live_args[0].is_var) out.insert(f->live_args[0].name);
        return out;
      case MuFormula::Kind::PredVar: {
        auto it = binder_fv.find(f->name);
        return it == binder_fv.end() ? out : it->second;
      }
      case MuFormula::Kind::Exists:
      case MuFormula::Kind::ExistsLive: {
        out = free(f->body);
        out.erase(f->name);
        return out;
      }
      case MuFormula::Kind::DiaLive:
      case MuFormula::Kind::BoxLive: {
        out = free(f->body);
        for (const QArg& a : f->live_args) {
          if (a.is_var) out.insert(a.name);
        }
        return out;
      }
      case MuFormula::Kind::Mu:
      case MuFormula::Kind::Nu:
      case MuFormula::Kind::Dia:
      case MuFormula::Kind::Box:
        return free(f->body);
      default: {
        for (const MuPtr& c : f->children) {
          auto sub = free(c);
          out.insert(sub.begin(), sub.end());
        }
        if (f->body) {
          auto sub = free(f->body);
          out.insert(sub.begin(), sub.end());
        }
        return out;
      }
    }
  }
};

void collect_binders(const MuPtr& f, std::vector<std::pair<std::string, MuPtr>>* out) {
  if (f->kind == MuFormula::Kind::Mu || f->kind == MuFormula::Kind::Nu) {
    out->emplace_back(f->name, f->body);
  }
  for (const MuPtr& c : f->children) collect_binders(c, out);
  if (f->body) collect_binders(f->body, out);
}

FreeVarContext fixpoint_free_vars(const MuPtr& f) {
  FreeVarContext ctx;
  std::vector<std::pair<std::string, MuPtr>> binders;
  collect_binders(f, &binders);
  for (const auto& [name, body] : binders) ctx.binder_fv[name];  // start empty
  bool changed = true;
  while (changed) {
    changed = false;
    for (const auto& [name, body] : binders) {
      std::set<std::string> fv = ctx.free(body);
      if (fv != ctx.binder_fv[name]) {
        ctx.binder_fv[name] = std::move(fv);
        changed = true;
      }
    }
  }
  return ctx;
}

bool has_raw_exists(const MuPtr& f) {
  if (f->kind == MuFormula::Kind::Exists) return true;
  for (const MuPtr& c : f->children) {
    if (has_raw_exists(c)) return true;
  }
  return f->body && has_raw_exists(f->body);
}

// muL_P proviso: modality bodies carry a live guard over exactly their free
// variables; unguarded modalities are only allowed on closed bodies.
bool persistence_guarded(const MuPtr& f, const FreeVarContext& ctx) {
  switch (f->kind) {
    case MuFormula::Kind::Dia:
    case MuFormula::Kind::Box:
      return ctx.free(f->body).empty() && persistence_guarded(f->body, ctx);
    case MuFormula::Kind::DiaLive:
    case MuFormula::Kind::BoxLive: {
      std::set<std::string> guard;
      for (const QArg& a : f->live_args) {
        if (a.is_var) guard.insert(a.name);
      }
      return guard == ctx.free(f->body) && persistence_guarded(f->body, ctx);
    }
    default:
      for (const MuPtr& c : f->children) {
        if (!persistence_guarded(c, ctx)) return false;
      }
      return !f->body || persistence_guarded(f->body, ctx);
  }
}

}  // namespace

std::set<std::string> mu_free_vars(const MuPtr& f) {
  return fixpoint_free_vars(f).free(f);
}

MuFragment classify(const MuPtr& f) {
  if (has_raw_exists(f)) return MuFragment::MuL;
  FreeVarContext ctx = fixpoint_free_vars(f);
  if (persistence_guarded(f, ctx)) return MuFragment::MuLP;
  return MuFragment::MuLA;
}

MuPtr mu_substitute(const MuPtr& f, const std::map<std::string, Term>& binding) {
  if (binding.empty()) return f;
  switch (f->kind) {
    case MuFormula::Kind::Query:
      return MuFormula::query_leaf(substitute(f->query, binding));
    case MuFormula::Kind::Live: {
      const QArg& a = f->live_args[0];
      if (a.is_var) {
        auto it = binding.find(a.name);
        if (it != binding.end()) return MuFormula::live(QArg::ground(it->second));
      }
      return f;
    }
    case MuFormula::Kind::PredVar:
      return f;
    case MuFormula::Kind::Not:
      return MuFormula::negation(mu_substitute(f->children[0], binding));
    case MuFormula::Kind::And: {
      std::vector<MuPtr> kids;
      kids.reserve(f->children.size());
      for (const MuPtr& c : f->children) kids.push_back(mu_substitute(c, binding));
      return MuFormula::conj(std::move(kids));
    }
    case MuFormula::Kind::Exists:
    case MuFormula::Kind::ExistsLive: {
      auto inner = binding;
      inner.erase(f->name);
      MuPtr body = mu_substitute(f->body, inner);
      return f->kind == MuFormula::Kind::Exists ? MuFormula::exists_raw(f->name, body)
                                                : MuFormula::exists_live(f->name, body);
    }
    case MuFormula::Kind::Dia:
      return MuFormula::dia(mu_substitute(f->body, binding));
    case MuFormula::Kind::Box:
      return MuFormula::box(mu_substitute(f->body, binding));
    case MuFormula::Kind::DiaLive:
    case MuFormula::Kind::BoxLive: {
      std::vector<QArg> args = f->live_args;
      for (QArg& a : args) {
        if (a.is_var) {
          auto it = binding.find(a.name);
          if (it != binding.end()) a = QArg::ground(it->second);
        }
      }
      MuPtr body = mu_substitute(f->body, binding);
      return f->kind == MuFormula::Kind::DiaLive
                 ? MuFormula::dia_live(std::move(args), body)
                 : MuFormula::box_live(std::move(args), body);
    }
    case MuFormula::Kind::Mu:
      return MuFormula::mu(f->name, mu_substitute(f->body, binding));
    case MuFormula::Kind::Nu:
      return MuFormula::nu(f->name, mu_substitute(f->body, binding));
  }
  throw std::logic_error("unreachable");
}

namespace {

void print_mu(const MuPtr& f, std::ostringstream& out) {
  switch (f->kind) {
    case MuFormula::Kind::Query:
      out << formula_str(f->query);
      return;
    case MuFormula::Kind::Live:
      out << "live(" << f->live_args[0].str() << ')';
      return;
    case MuFormula::Kind::Not:
      out << '!';
      if (f->children[0]->kind == MuFormula::Kind::And) {
        out << '(';
        print_mu(f->children[0], out);
        out << ')';
      } else {
        print_mu(f->children[0], out);
      }
      return;
    case MuFormula::Kind::And: {
      bool first = true;
      for (const MuPtr& c : f->children) {
        if (!first) out << " & ";
        first = false;
        bool parens = c->kind == MuFormula::Kind::Mu || c->kind == MuFormula::Kind::Nu ||
                      c->kind == MuFormula::Kind::Exists ||
                      c->kind == MuFormula::Kind::ExistsLive;
        if (parens) out << '(';
        print_mu(c, out);
        if (parens) out << ')';
      }
      return;
    }
    case MuFormula::Kind::Exists:
      out << "exists " << f->name << ". ";
      print_mu(f->body, out);
      return;
    case MuFormula::Kind::ExistsLive:
      out << "exists " << f->name << ". live(" << f->name << ") & ";
      print_mu(f->body, out);
      return;
    case MuFormula::Kind::Dia:
    case MuFormula::Kind::Box:
      out << (f->kind == MuFormula::Kind::Dia ? "dia(" : "box(");
      print_mu(f->body, out);
      out << ')';
      return;
    case MuFormula::Kind::DiaLive:
    case MuFormula::Kind::BoxLive: {
      out << (f->kind == MuFormula::Kind::DiaLive ? "dia(live(" : "box(live(");
      for (size_t i = 0; i < f->live_args.size(); ++i) {
        if (i) out << ", ";
        out << f->live_args[i].str();
      }
      out << ") & ";
      print_mu(f->body, out);
      out << ')';
      return;
    }
    case MuFormula::Kind::PredVar:
      out << f->name;
      return;
    case MuFormula::Kind::Mu:
    case MuFormula::Kind::Nu:
      out << (f->kind == MuFormula::Kind::Mu ? "mu " : "nu ") << f->name << ". ";
      print_mu(f->body, out);
      return;
  }
}

MuPtr negate_predvar(const MuPtr& f, const std::string& var) {
  switch (f->kind) {
    case MuFormula::Kind::PredVar:
      return f->name == var ? MuFormula::negation(f) : f;
    case MuFormula::Kind::Mu:
    case MuFormula::Kind::Nu:
      if (f->name == var) return f;  // shadowed
      return f->kind == MuFormula::Kind::Mu
                 ? MuFormula::mu(f->name, negate_predvar(f->body, var))
                 : MuFormula::nu(f->name, negate_predvar(f->body, var));
    case MuFormula::Kind::Not:
      return MuFormula::negation(negate_predvar(f->children[0], var));
    case MuFormula::Kind::And: {
      std::vector<MuPtr> kids;
      for (const MuPtr& c : f->children) kids.push_back(negate_predvar(c, var));
      return MuFormula::conj(std::move(kids));
    }
    case MuFormula::Kind::Exists:
      return MuFormula::exists_raw(f->name, negate_predvar(f->body, var));
    case MuFormula::Kind::ExistsLive:
      return MuFormula::exists_live(f->name, negate_predvar(f->body, var));
    case MuFormula::Kind::Dia:
      return MuFormula::dia(negate_predvar(f->body, var));
    case MuFormula::Kind::Box:
      return MuFormula::box(negate_predvar(f->body, var));
    case MuFormula::Kind::DiaLive:
      return MuFormula::dia_live(f->live_args, negate_predvar(f->body, var));
    case MuFormula::Kind::BoxLive:
      return MuFormula::box_live(f->live_args, negate_predvar(f->body, var));
    default:
      return f;
  }
}

}  // namespace

std::string mu_str(const MuPtr& f) {
  std::ostringstream out;
  print_mu(f, out);
  return out.str();
}

MuPtr dualize_fixpoint(const MuPtr& f) {
  switch (f->kind) {
    case MuFormula::Kind::Mu:
    case MuFormula::Kind::Nu: {
      MuPtr body = dualize_fixpoint(f->body);
      MuPtr negated_body = MuFormula::negation(negate_predvar(body, f->name));
      return f->kind == MuFormula::Kind::Nu
                 ? MuFormula::negation(MuFormula::mu(f->name, negated_body))
                 : MuFormula::negation(MuFormula::nu(f->name, negated_body));
    }
    case MuFormula::Kind::Not:
      return MuFormula::negation(dualize_fixpoint(f->children[0]));
    case MuFormula::Kind::And: {
      std::vector<MuPtr> kids;
      for (const MuPtr& c : f->children) kids.push_back(dualize_fixpoint(c));
      return MuFormula::conj(std::move(kids));
    }
    case MuFormula::Kind::Exists:
      return MuFormula::exists_raw(f->name, dualize_fixpoint(f->body));
    case MuFormula::Kind::ExistsLive:
      return MuFormula::exists_live(f->name, dualize_fixpoint(f->body));
    case MuFormula::Kind::Dia:
      return MuFormula::dia(dualize_fixpoint(f->body));
    case MuFormula::Kind::Box:
      return MuFormula::box(dualize_fixpoint(f->body));
    case MuFormula::Kind::DiaLive:
      return MuFormula::dia_live(f->live_args, dualize_fixpoint(f->body));
    case MuFormula::Kind::BoxLive:
      return MuFormula::box_live(f->live_args, dualize_fixpoint(f->body));
    default:
      return f;
  }
}

}  // namespace dcds
