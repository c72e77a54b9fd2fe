#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "term.hpp"

namespace dcds {

// A partition of a finite term set into cells, each with a designated
// representative. Terms in one cell are committed equal, terms in distinct
// cells unequal. Cells are kept in canonical order (sorted by least member),
// so two equal partitions serialize identically.
//
// Construction enforces: representative belongs to its cell, and a cell
// holding a constant has that constant as representative. Well-formedness in
// the stronger sense (at most one constant per cell, congruence closure) is a
// separate check, since callers need the violation report.
class Partition {
public:
  Partition() = default;

  // Cells with representatives chosen by the default rule: the cell's
  // constant if present, else the least term. Throws std::invalid_argument
  // if cells overlap, a cell is empty, or a cell holds two constants and the
  // representative would be ambiguous.
  static Partition make(std::vector<std::set<Term>> cells);

  // Explicit representatives (used when extending a commitment: old cells
  // keep their old representative). Throws if rep is outside its cell or a
  // constant-bearing cell names a non-constant rep.
  static Partition make(std::vector<std::set<Term>> cells, std::vector<Term> reps);

  // Singleton cells, one per term.
  static Partition singletons(const std::set<Term>& terms);

  const std::vector<std::set<Term>>& cells() const { return cells_; }
  const std::vector<Term>& reps() const { return reps_; }
  size_t size() const { return cells_.size(); }
  bool empty() const { return cells_.empty(); }

  std::set<Term> terms() const;
  bool contains(const Term& t) const { return index_.count(t) > 0; }

  // Index of the cell containing t, or -1.
  int cell_of(const Term& t) const;

  // Throws std::out_of_range when t is not in the partition.
  const Term& representative(const Term& t) const;

  std::set<Term> representative_set() const;

  bool same_cell(const Term& a, const Term& b) const;

  // Canonical serialization: sorted cells, members sorted, rep marked '*'.
  // {{*a, f(a, a)}, {*b}}
  std::string str() const;

  friend bool operator==(const Partition& a, const Partition& b) {
    return a.cells_ == b.cells_ && a.reps_ == b.reps_;
  }
  friend bool operator!=(const Partition& a, const Partition& b) { return !(a == b); }
  friend bool operator<(const Partition& a, const Partition& b);

private:
  void build_index();
  std::vector<std::set<Term>> cells_;
  std::vector<Term> reps_;
  std::map<Term, int> index_;
};

// Default representative rule: the constant if the cell has exactly one,
// otherwise the least term.
Term default_representative(const std::set<Term>& cell);

struct WellFormednessViolation {
  std::string message;
};

// Checks the two well-formedness clauses: (i) at most one constant per cell,
// (ii) closure under congruence over terms(p). Violations name the offending
// cells and terms; an empty result means well-formed.
std::vector<WellFormednessViolation> well_formedness_violations(const Partition& p);
bool well_formed(const Partition& p);

// ext is an extension of base iff every cell of base is contained in a single
// cell of ext and no two base cells land in the same ext cell. Embedding
// additionally requires the cell map to be onto.
bool is_extension(const Partition& base, const Partition& ext);
bool is_embedding(const Partition& base, const Partition& ext);

}  // namespace dcds
