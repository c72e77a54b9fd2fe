#include "term.hpp"

#include <cctype>
#include <sstream>

namespace dcds {

namespace {

bool plain_symbol(const std::string& s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_' && c != '$') return false;
  }
  return true;
}

}  // namespace

namespace {

// Order key: kind byte, symbol terminated by \x01, argument keys, \x02.
// Symbols never contain the terminator bytes, so the encoding is injective
// and concatenated argument keys compare like argument tuples.
std::string order_key(bool call, const std::string& symbol, const std::vector<Term>& args) {
  std::string key;
  key.push_back(call ? '1' : '0');
  key += symbol;
  key.push_back('\x01');
  if (call) {
    for (const Term& a : args) key += a.key_for_order();
    key.push_back('\x02');
  }
  return key;
}

}  // namespace

Term Term::constant(std::string name) {
  std::string key = order_key(false, name, {});
  return Term(std::make_shared<const Node>(Node{false, std::move(name), {}, std::move(key)}));
}

Term Term::call(std::string function, std::vector<Term> args) {
  std::string key = order_key(true, function, args);
  return Term(std::make_shared<const Node>(
      Node{true, std::move(function), std::move(args), std::move(key)}));
}

std::string Term::str() const {
  if (is_constant()) {
    return plain_symbol(symbol()) ? symbol() : "'" + symbol() + "'";
  }
  std::ostringstream out;
  out << symbol() << '(';
  for (size_t i = 0; i < args().size(); ++i) {
    if (i > 0) out << ", ";
    out << args()[i].str();
  }
  out << ')';
  return out.str();
}

std::set<Term> subterms(const Term& t) {
  std::set<Term> out;
  out.insert(t);
  for (const Term& a : t.args()) {
    auto sub = subterms(a);
    out.insert(sub.begin(), sub.end());
  }
  return out;
}

bool closed_under_subterms(const std::set<Term>& terms) {
  for (const Term& t : terms) {
    for (const Term& s : subterms(t)) {
      if (!terms.count(s)) return false;
    }
  }
  return true;
}

namespace {

struct TermParser {
  const std::string& text;
  size_t pos = 0;
  std::string error;

  void skip_ws() {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
  }

  std::optional<std::string> symbol() {
    skip_ws();
    if (pos < text.size() && text[pos] == '\'') {
      size_t end = text.find('\'', pos + 1);
      if (end == std::string::npos) {
        error = "unterminated quoted symbol";
        return std::nullopt;
      }
      std::string s = text.substr(pos + 1, end - pos - 1);
      pos = end + 1;
      return s;
    }
    size_t start = pos;
    while (pos < text.size()) {
      char c = text[pos];
      if (std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '$') {
        ++pos;
      } else {
        break;
      }
    }
    if (pos == start) {
      error = "expected symbol";
      return std::nullopt;
    }
    return text.substr(start, pos - start);
  }

  std::optional<Term> term() {
    auto sym = symbol();
    if (!sym) return std::nullopt;
    skip_ws();
    if (pos < text.size() && text[pos] == '(') {
      ++pos;
      std::vector<Term> args;
      skip_ws();
      if (pos < text.size() && text[pos] == ')') {
        ++pos;
        return Term::call(*sym, std::move(args));
      }
      while (true) {
        auto arg = term();
        if (!arg) return std::nullopt;
        args.push_back(*arg);
        skip_ws();
        if (pos < text.size() && text[pos] == ',') {
          ++pos;
          continue;
        }
        if (pos < text.size() && text[pos] == ')') {
          ++pos;
          return Term::call(*sym, std::move(args));
        }
        error = "expected ',' or ')' in term";
        return std::nullopt;
      }
    }
    return Term::constant(*sym);
  }
};

}  // namespace

std::optional<Term> parse_term(const std::string& text, std::string* error) {
  TermParser p{text};
  auto t = p.term();
  if (t) {
    p.skip_ws();
    if (p.pos != text.size()) {
      t = std::nullopt;
      p.error = "trailing input after term";
    }
  }
  if (!t && error) *error = p.error;
  return t;
}

}  // namespace dcds
