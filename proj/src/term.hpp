#pragma once

#include <compare>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace dcds {

// A term of the Herbrand universe: either a constant or a function symbol
// applied to argument terms. Service-call placeholders like f(a) are calls.
// Terms are immutable values; copies share the underlying node.
class Term {
public:
  Term() : Term(constant("")) {}

  static Term constant(std::string name);
  static Term call(std::string function, std::vector<Term> args);

  bool is_call() const { return node_->call; }
  bool is_constant() const { return !node_->call; }
  const std::string& symbol() const { return node_->symbol; }
  const std::vector<Term>& args() const { return node_->args; }
  size_t arity() const { return node_->args.size(); }

  // Canonical form: constants print bare, calls as f(t1, t2).
  std::string str() const;

  const std::string& key_for_order() const { return node_->key; }

  // Total order: constants before calls, then by symbol, then by arguments.
  // This is the order used to pick default representatives. Each node caches
  // a self-delimiting key whose lexicographic order realizes it, so
  // comparisons inside sets and maps are single memcmps.
  friend bool operator==(const Term& a, const Term& b) {
    return a.node_ == b.node_ || a.node_->key == b.node_->key;
  }
  friend bool operator!=(const Term& a, const Term& b) { return !(a == b); }
  friend bool operator<(const Term& a, const Term& b) { return a.node_->key < b.node_->key; }
  friend bool operator<=(const Term& a, const Term& b) { return !(b < a); }
  friend bool operator>(const Term& a, const Term& b) { return b < a; }
  friend bool operator>=(const Term& a, const Term& b) { return !(a < b); }

private:
  struct Node {
    bool call;
    std::string symbol;
    std::vector<Term> args;
    std::string key;
  };
  explicit Term(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

// Inductive subterm closure; always contains t itself.
std::set<Term> subterms(const Term& t);

bool closed_under_subterms(const std::set<Term>& terms);

// Parses canonical term syntax. Returns nullopt and fills *error on failure.
std::optional<Term> parse_term(const std::string& text, std::string* error = nullptr);

}  // namespace dcds
