#include "partition.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace dcds {

Term default_representative(const std::set<Term>& cell) {
  for (const Term& t : cell) {
    if (t.is_constant()) return t;
  }
  return *cell.begin();
}

Partition Partition::make(std::vector<std::set<Term>> cells) {
  std::vector<Term> reps;
  reps.reserve(cells.size());
  for (const auto& cell : cells) {
    if (cell.empty()) throw std::invalid_argument("partition cell must be non-empty");
    reps.push_back(default_representative(cell));
  }
  return make(std::move(cells), std::move(reps));
}

Partition Partition::make(std::vector<std::set<Term>> cells, std::vector<Term> reps) {
  if (cells.size() != reps.size()) {
    throw std::invalid_argument("cell/representative count mismatch");
  }
  for (size_t i = 0; i < cells.size(); ++i) {
    if (cells[i].empty()) throw std::invalid_argument("partition cell must be non-empty");
    if (!cells[i].count(reps[i])) {
      throw std::invalid_argument("representative " + reps[i].str() + " not in its cell");
    }
    bool has_constant = std::any_of(cells[i].begin(), cells[i].end(),
                                    [](const Term& t) { return t.is_constant(); });
    if (has_constant && !reps[i].is_constant()) {
      throw std::invalid_argument("cell containing a constant must have a constant representative");
    }
  }
  // Canonical cell order: by least member.
  std::vector<size_t> order(cells.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](size_t a, size_t b) {
    return *cells[a].begin() < *cells[b].begin();
  });
  Partition p;
  for (size_t i : order) {
    p.cells_.push_back(std::move(cells[i]));
    p.reps_.push_back(std::move(reps[i]));
  }
  p.build_index();
  return p;
}

Partition Partition::singletons(const std::set<Term>& terms) {
  std::vector<std::set<Term>> cells;
  for (const Term& t : terms) cells.push_back({t});
  return make(std::move(cells));
}

void Partition::build_index() {
  index_.clear();
  for (size_t i = 0; i < cells_.size(); ++i) {
    for (const Term& t : cells_[i]) {
      auto [it, inserted] = index_.emplace(t, static_cast<int>(i));
      if (!inserted) {
        throw std::invalid_argument("partition cells overlap on " + t.str());
      }
    }
  }
}

std::set<Term> Partition::terms() const {
  std::set<Term> out;
  for (const auto& cell : cells_) out.insert(cell.begin(), cell.end());
  return out;
}

int Partition::cell_of(const Term& t) const {
  auto it = index_.find(t);
  return it == index_.end() ? -1 : it->second;
}

const Term& Partition::representative(const Term& t) const {
  auto it = index_.find(t);
  if (it == index_.end()) {
    throw std::out_of_range("term not in partition: " + t.str());
  }
  return reps_[it->second];
}

std::set<Term> Partition::representative_set() const {
  return std::set<Term>(reps_.begin(), reps_.end());
}

bool Partition::same_cell(const Term& a, const Term& b) const {
  int ca = cell_of(a);
  int cb = cell_of(b);
  if (ca < 0 || cb < 0) throw std::out_of_range("term not in partition");
  return ca == cb;
}

std::string Partition::str() const {
  std::ostringstream out;
  out << '{';
  for (size_t i = 0; i < cells_.size(); ++i) {
    if (i > 0) out << ", ";
    out << '{';
    bool first = true;
    for (const Term& t : cells_[i]) {
      if (!first) out << ", ";
      first = false;
      if (t == reps_[i]) out << '*';
      out << t.str();
    }
    out << '}';
  }
  out << '}';
  return out.str();
}

bool operator<(const Partition& a, const Partition& b) {
  if (a.cells_ != b.cells_) return a.cells_ < b.cells_;
  return a.reps_ < b.reps_;
}

std::vector<WellFormednessViolation> well_formedness_violations(const Partition& p) {
  std::vector<WellFormednessViolation> out;
  for (const auto& cell : p.cells()) {
    std::vector<Term> constants;
    for (const Term& t : cell) {
      if (t.is_constant()) constants.push_back(t);
    }
    if (constants.size() > 1) {
      std::ostringstream msg;
      msg << "cell {";
      for (size_t i = 0; i < constants.size(); ++i) {
        if (i) msg << ", ";
        msg << constants[i].str();
      }
      msg << "} holds more than one constant";
      out.push_back({msg.str()});
    }
  }
  // Congruence: equal-argument calls with the same symbol must share a cell.
  std::set<Term> all = p.terms();
  std::vector<Term> calls;
  for (const Term& t : all) {
    if (t.is_call()) calls.push_back(t);
  }
  for (size_t i = 0; i < calls.size(); ++i) {
    for (size_t j = i + 1; j < calls.size(); ++j) {
      const Term& s = calls[i];
      const Term& t = calls[j];
      if (s.symbol() != t.symbol() || s.arity() != t.arity()) continue;
      bool args_known = true;
      bool args_equal = true;
      for (size_t k = 0; k < s.arity(); ++k) {
        int cs = p.cell_of(s.args()[k]);
        int ct = p.cell_of(t.args()[k]);
        if (cs < 0 || ct < 0) {
          args_known = false;
          break;
        }
        if (cs != ct) {
          args_equal = false;
          break;
        }
      }
      if (args_known && args_equal && !p.same_cell(s, t)) {
        out.push_back({"congruence forces [" + s.str() + "] = [" + t.str() +
                       "] but they are in distinct cells"});
      }
    }
  }
  return out;
}

bool well_formed(const Partition& p) { return well_formedness_violations(p).empty(); }

bool is_extension(const Partition& base, const Partition& ext) {
  std::vector<int> image;
  image.reserve(base.size());
  for (const auto& cell : base.cells()) {
    int target = -1;
    for (const Term& t : cell) {
      int c = ext.cell_of(t);
      if (c < 0) return false;  // terms(base) must be contained in terms(ext)
      if (target < 0) {
        target = c;
      } else if (target != c) {
        return false;  // cell split across two ext cells
      }
    }
    image.push_back(target);
  }
  // Injectivity: distinct base cells keep distinct images.
  std::set<int> seen(image.begin(), image.end());
  return seen.size() == image.size();
}

bool is_embedding(const Partition& base, const Partition& ext) {
  if (!is_extension(base, ext)) return false;
  std::set<int> hit;
  for (const auto& cell : base.cells()) {
    hit.insert(ext.cell_of(*cell.begin()));
  }
  return hit.size() == ext.size();
}

}  // namespace dcds
