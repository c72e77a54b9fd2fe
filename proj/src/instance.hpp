#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "term.hpp"

namespace dcds {

using Schema = std::map<std::string, int>;  // relation name -> arity

struct Fact {
  std::string rel;
  std::vector<Term> args;

  std::string str() const;

  friend bool operator==(const Fact& a, const Fact& b) {
    return a.rel == b.rel && a.args == b.args;
  }
  friend bool operator<(const Fact& a, const Fact& b) {
    if (a.rel != b.rel) return a.rel < b.rel;
    return a.args < b.args;
  }
};

// A database instance: a finite set of facts. The active domain is the set of
// terms occurring as fact arguments.
class Instance {
public:
  Instance() = default;
  explicit Instance(std::set<Fact> facts) : facts_(std::move(facts)) {}

  const std::set<Fact>& facts() const { return facts_; }
  bool contains(const Fact& f) const { return facts_.count(f) > 0; }
  void insert(Fact f) { facts_.insert(std::move(f)); }
  size_t size() const { return facts_.size(); }
  bool empty() const { return facts_.empty(); }

  std::set<Term> adom() const;

  // Canonical form: sorted facts joined by "; ".
  std::string str() const;

  friend bool operator==(const Instance& a, const Instance& b) { return a.facts_ == b.facts_; }
  friend bool operator!=(const Instance& a, const Instance& b) { return !(a == b); }
  friend bool operator<(const Instance& a, const Instance& b) { return a.facts_ < b.facts_; }

private:
  std::set<Fact> facts_;
};

}  // namespace dcds
