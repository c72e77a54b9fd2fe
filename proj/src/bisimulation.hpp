#pragma once

#include <string>
#include <vector>

#include "transition_system.hpp"

namespace dcds {

// A partial bijection between the data domains of two transition systems,
// kept as a sorted pair list so triples have a canonical encoding.
using PartialBijection = std::vector<std::pair<Term, Term>>;

struct BisimTriple {
  int s1 = 0;
  PartialBijection h;
  int s2 = 0;
};

struct BisimResult {
  enum class Status { Decided, BudgetExceeded };
  Status status = Status::Decided;
  bool bisimilar = false;
  // Surviving triples containing the initial pair, when bisimilar.
  std::vector<BisimTriple> witness;
  // A distinguishing obligation when not bisimilar.
  std::string obligation;
};

// Decides history preserving bisimilarity of two finite systems: a greatest
// fixpoint over triples (state, partial bijection, state) where the bijection
// accumulates along paths and each step extends it. Bijections are truncated
// to values occurring in databases along explored paths, which is sound and
// complete for finite systems. The triple space is capped by max_triples.
BisimResult history_bisimilar(const TransitionSystem& ts1, const TransitionSystem& ts2,
                              size_t max_triples = 200000);

// Persistence preserving variant: the bijection of a triple is exactly an
// isomorphism of the two state databases, and a step only needs to extend its
// restriction to the values surviving into the successor.
BisimResult persistence_bisimilar(const TransitionSystem& ts1, const TransitionSystem& ts2,
                                  size_t max_triples = 200000);

}  // namespace dcds
