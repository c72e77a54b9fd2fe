#include "parser.hpp"

#include <algorithm>
#include <cctype>

#include "lexer.hpp"

namespace dcds {

namespace {

bool numeric(const std::string& s) {
  return !s.empty() &&
         std::all_of(s.begin(), s.end(),
                     [](char c) { return std::isdigit(static_cast<unsigned char>(c)); });
}

struct ParseError {
  Diagnostic diag;
};

// Recursive-descent parser over the shared token stream. Formula parsing is
// reused by parse_fo_formula with an explicit constant set.
struct Parser {
  std::vector<Token> toks;
  size_t pos = 0;
  std::set<std::string> constants;  // resolution set for argument identifiers
  std::vector<Diagnostic> errors;

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
  bool at_ident(const std::string& s) const {
    return peek().kind == Token::Kind::Ident && !peek().quoted && peek().text == s;
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
    throw ParseError{{Diagnostic::Severity::Error, t.line, t.col, msg}};
  }

  void expect_punct(const std::string& p) {
    if (!eat_punct(p)) fail("expected '" + p + "'");
  }

  std::string expect_ident(const std::string& what) {
    if (peek().kind != Token::Kind::Ident) fail("expected " + what);
    return next().text;
  }

  bool is_constant_token(const Token& t) const {
    return t.quoted || numeric(t.text) || constants.count(t.text) > 0;
  }

  // ---- FO formulas ----------------------------------------------------

  QArg formula_arg() {
    const Token& t = peek();
    if (t.kind != Token::Kind::Ident) fail("expected term");
    if (!t.quoted && t.text == "true") fail("'true' is reserved");
    Token tok = next();
    if (at_punct("(")) fail("service calls cannot appear in queries");
    if (is_constant_token(tok)) return QArg::ground(Term::constant(tok.text));
    return QArg::var(tok.text);
  }

  FormulaPtr formula() { return implication(); }

  FormulaPtr implication() {
    FormulaPtr lhs = disjunction();
    if (eat_punct("->")) {
      FormulaPtr rhs = implication();
      return Formula::implies(lhs, rhs);
    }
    return lhs;
  }

  FormulaPtr disjunction() {
    std::vector<FormulaPtr> parts{conjunction()};
    while (eat_punct("|")) parts.push_back(conjunction());
    return parts.size() == 1 ? parts[0] : Formula::disj(std::move(parts));
  }

  FormulaPtr conjunction() {
    std::vector<FormulaPtr> parts{unary()};
    while (eat_punct("&")) parts.push_back(unary());
    return parts.size() == 1 ? parts[0] : Formula::conj(std::move(parts));
  }

  FormulaPtr unary() {
    if (eat_punct("!")) return Formula::negation(unary());
    if (at_ident("exists") || at_ident("forall")) {
      bool is_exists = peek().text == "exists";
      next();
      std::vector<std::string> vars;
      vars.push_back(expect_ident("variable"));
      while (eat_punct(",")) vars.push_back(expect_ident("variable"));
      expect_punct(".");
      FormulaPtr body = implication();
      return is_exists ? Formula::exists(std::move(vars), body)
                       : Formula::forall(std::move(vars), body);
    }
    if (eat_punct("(")) {
      FormulaPtr f = implication();
      expect_punct(")");
      return maybe_eq(f);
    }
    return atom_or_eq();
  }

  // After a parenthesized term we cannot have an equality, so only bare
  // arguments participate in '='.
  FormulaPtr maybe_eq(FormulaPtr f) { return f; }

  FormulaPtr atom_or_eq() {
    if (peek().kind != Token::Kind::Ident) fail("expected formula");
    if (!peek().quoted && peek().text == "true" && !(peek(1).kind == Token::Kind::Punct && peek(1).text == "(")) {
      next();
      return Formula::truth();
    }
    // An identifier followed by '(' is a relation atom; bare arguments take
    // part in equalities.
    if (peek(1).kind == Token::Kind::Punct && peek(1).text == "(" && !peek().quoted) {
      std::string rel = next().text;
      expect_punct("(");
      std::vector<QArg> args;
      if (!eat_punct(")")) {
        args.push_back(formula_arg());
        while (eat_punct(",")) args.push_back(formula_arg());
        expect_punct(")");
      }
      return Formula::atom(std::move(rel), std::move(args));
    }
    QArg lhs = formula_arg();
    expect_punct("=");
    QArg rhs = formula_arg();
    return Formula::eq(std::move(lhs), std::move(rhs));
  }

  // ---- spec sections ---------------------------------------------------

  void skip_to_recovery_point() {
    int depth = 0;
    while (peek().kind != Token::Kind::End) {
      if (at_punct("{")) ++depth;
      if (at_punct("}")) {
        if (depth == 0) {
          next();
          return;
        }
        --depth;
      }
      if (at_punct(";") && depth == 0) {
        next();
        return;
      }
      next();
    }
  }

  void prescan_constants() {
    for (size_t i = 0; i < toks.size(); ++i) {
      const Token& t = toks[i];
      if (t.kind != Token::Kind::Ident || t.quoted) continue;
      if (t.text == "constants") {
        size_t j = i + 1;
        if (j < toks.size() && toks[j].kind == Token::Kind::Punct && toks[j].text == "{") {
          ++j;
          for (; j < toks.size(); ++j) {
            if (toks[j].kind == Token::Kind::Punct && toks[j].text == "}") break;
            if (toks[j].kind == Token::Kind::Ident) constants.insert(toks[j].text);
          }
        }
      } else if (t.text == "init") {
        size_t j = i + 1;
        if (j < toks.size() && toks[j].kind == Token::Kind::Punct && toks[j].text == "{") {
          ++j;
          for (; j < toks.size(); ++j) {
            if (toks[j].kind == Token::Kind::Punct && toks[j].text == "}") break;
            if (toks[j].kind != Token::Kind::Ident) continue;
            bool is_relation = !toks[j].quoted && j + 1 < toks.size() &&
                               toks[j + 1].kind == Token::Kind::Punct && toks[j + 1].text == "(";
            if (!is_relation) constants.insert(toks[j].text);
          }
        }
      }
    }
  }

  Term constant_term() {
    if (peek().kind != Token::Kind::Ident) fail("expected constant");
    Token t = next();
    if (!t.quoted && t.text == "true") fail("'true' is reserved");
    return Term::constant(t.text);
  }

  HeadArg head_arg(bool allow_call) {
    if (peek().kind != Token::Kind::Ident) fail("expected head argument");
    if (!peek().quoted && peek().text == "true") fail("'true' is reserved");
    Token tok = next();
    if (at_punct("(")) {
      if (!allow_call) fail("nested service call in head template");
      if (tok.quoted) fail("quoted atom cannot be called");
      next();
      HeadArg call;
      call.kind = HeadArg::Kind::Call;
      call.function = tok.text;
      if (!eat_punct(")")) {
        call.args.push_back(head_arg(false));
        while (eat_punct(",")) call.args.push_back(head_arg(false));
        expect_punct(")");
      }
      return call;
    }
    HeadArg a;
    if (is_constant_token(tok)) {
      a.kind = HeadArg::Kind::Const;
      a.constant = Term::constant(tok.text);
    } else {
      a.kind = HeadArg::Kind::Var;
      a.var = tok.text;
    }
    return a;
  }

  FactTemplate fact_template() {
    FactTemplate ft;
    ft.rel = expect_ident("relation name");
    expect_punct("(");
    if (!eat_punct(")")) {
      ft.args.push_back(head_arg(true));
      while (eat_punct(",")) ft.args.push_back(head_arg(true));
      expect_punct(")");
    }
    return ft;
  }

  void decl_block(Schema* out, const char* what) {
    expect_punct("{");
    while (!eat_punct("}")) {
      const Token& name_tok = peek();
      std::string name = expect_ident(what);
      expect_punct("/");
      std::string arity = expect_ident("arity");
      if (!numeric(arity)) fail("arity must be a number");
      if (out->count(name)) {
        errors.push_back({Diagnostic::Severity::Error, name_tok.line, name_tok.col,
                          std::string("duplicate declaration of '") + name + "'"});
      }
      (*out)[name] = std::stoi(arity);
      eat_punct(";");
    }
  }

  DcdsSpec parse() {
    prescan_constants();
    DcdsSpec spec;
    spec.constants = constants;
    bool saw_semantics = false;
    while (peek().kind != Token::Kind::End) {
      try {
        if (at_ident("semantics")) {
          next();
          std::string s = expect_ident("semantics mode");
          if (s == "deterministic") {
            spec.semantics = Semantics::Deterministic;
          } else if (s == "nondeterministic") {
            spec.semantics = Semantics::Nondeterministic;
          } else {
            fail("semantics must be 'deterministic' or 'nondeterministic'");
          }
          saw_semantics = true;
          eat_punct(";");
        } else if (at_ident("constants")) {
          next();
          expect_punct("{");
          while (!eat_punct("}")) {
            constant_term();
            if (!eat_punct(",")) eat_punct(";");
          }
        } else if (at_ident("schema")) {
          next();
          decl_block(&spec.schema, "relation name");
        } else if (at_ident("services")) {
          next();
          decl_block(&spec.services, "service name");
        } else if (at_ident("init")) {
          next();
          expect_punct("{");
          while (!eat_punct("}")) {
            Fact f;
            f.rel = expect_ident("relation name");
            expect_punct("(");
            if (!eat_punct(")")) {
              f.args.push_back(constant_term());
              while (eat_punct(",")) f.args.push_back(constant_term());
              expect_punct(")");
            }
            spec.init.insert(std::move(f));
            eat_punct(";");
          }
        } else if (at_ident("constraints")) {
          next();
          expect_punct("{");
          while (!eat_punct("}")) {
            const Token& start = peek();
            FormulaPtr f = formula();
            LocatedEc lec;
            lec.line = start.line;
            lec.col = start.col;
            if (f->kind != Formula::Kind::Implies) {
              fail("equality constraint must have the form body -> x = y & ...");
            }
            lec.ec.body = f->children[0];
            std::vector<FormulaPtr> eqs;
            flatten(f->children[1], &eqs);
            for (const auto& e : eqs) {
              if (e->kind != Formula::Kind::Eq) {
                fail("right-hand side of a constraint must be a conjunction of equalities");
              }
              lec.ec.equalities.emplace_back(e->args[0], e->args[1]);
            }
            spec.constraints.push_back(std::move(lec));
            eat_punct(";");
          }
        } else if (at_ident("action")) {
          const Token& start = peek();
          next();
          Action a;
          a.line = start.line;
          a.col = start.col;
          a.name = expect_ident("action name");
          expect_punct("(");
          if (!eat_punct(")")) {
            a.params.push_back(expect_ident("parameter"));
            while (eat_punct(",")) a.params.push_back(expect_ident("parameter"));
            expect_punct(")");
          }
          expect_punct("{");
          while (!eat_punct("}")) {
            const Token& estart = peek();
            EffectSpec e;
            e.line = estart.line;
            e.col = estart.col;
            e.body = formula();
            expect_punct("~>");
            e.head.push_back(fact_template());
            while (eat_punct(",")) e.head.push_back(fact_template());
            eat_punct(";");
            a.effects.push_back(std::move(e));
          }
          spec.actions.push_back(std::move(a));
        } else if (at_ident("process")) {
          next();
          expect_punct("{");
          while (!eat_punct("}")) {
            const Token& start = peek();
            ConditionActionRule r;
            r.line = start.line;
            r.col = start.col;
            r.guard = formula();
            expect_punct("=>");
            r.action = expect_ident("action name");
            eat_punct(";");
            spec.process.push_back(std::move(r));
          }
        } else {
          fail("expected a section (semantics, constants, schema, services, init, "
               "constraints, action, process)");
        }
      } catch (const ParseError& e) {
        errors.push_back(e.diag);
        skip_to_recovery_point();
      }
    }
    if (!saw_semantics) {
      errors.push_back({Diagnostic::Severity::Error, 1, 1, "missing 'semantics' section"});
    }
    return spec;
  }

  static void flatten(const FormulaPtr& f, std::vector<FormulaPtr>* out) {
    if (f->kind == Formula::Kind::And) {
      for (const auto& c : f->children) flatten(c, out);
    } else {
      out->push_back(f);
    }
  }
};

}  // namespace

SpecParseResult parse_spec(const std::string& text) {
  SpecParseResult result;
  std::vector<Token> toks;
  LexError lerr;
  if (!lex(text, &toks, &lerr)) {
    result.errors.push_back({Diagnostic::Severity::Error, lerr.line, lerr.col, lerr.message});
    return result;
  }
  Parser p;
  p.toks = std::move(toks);
  DcdsSpec spec = p.parse();
  result.errors = std::move(p.errors);
  if (result.errors.empty()) result.spec = std::move(spec);
  return result;
}

FormulaParseResult parse_fo_formula(const std::string& text,
                                    const std::set<std::string>& constants) {
  FormulaParseResult result;
  std::vector<Token> toks;
  LexError lerr;
  if (!lex(text, &toks, &lerr)) {
    result.errors.push_back({Diagnostic::Severity::Error, lerr.line, lerr.col, lerr.message});
    return result;
  }
  Parser p;
  p.toks = std::move(toks);
  p.constants = constants;
  try {
    FormulaPtr f = p.formula();
    if (p.peek().kind != Token::Kind::End) p.fail("trailing input after formula");
    result.formula = f;
  } catch (const ParseError& e) {
    result.errors.push_back(e.diag);
  }
  return result;
}

}  // namespace dcds
