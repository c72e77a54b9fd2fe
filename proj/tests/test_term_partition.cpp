#include <doctest.h>

#include <random>

#include "partition.hpp"
#include "term.hpp"

using namespace dcds;

namespace {

Term c(const std::string& name) { return Term::constant(name); }
Term f1(const std::string& fn, Term a) { return Term::call(fn, {std::move(a)}); }
Term f2(const std::string& fn, Term a, Term b) {
  return Term::call(fn, {std::move(a), std::move(b)});
}

}  // namespace

TEST_CASE("subterm closure") {
  Term a = c("a");
  Term b = c("b");
  Term faa = f2("f", a, a);
  Term t = f2("f", faa, b);

  CHECK(subterms(t) == std::set<Term>{t, faa, a, b});
  CHECK(subterms(a) == std::set<Term>{a});
  CHECK(subterms(f2("g", a, b)) == std::set<Term>{f2("g", a, b), a, b});

  SUBCASE("closure is a fixed point") {
    std::set<Term> all;
    for (const Term& s : subterms(t)) {
      auto sub = subterms(s);
      all.insert(sub.begin(), sub.end());
    }
    CHECK(all == subterms(t));
    CHECK(closed_under_subterms(subterms(t)));
  }
}

TEST_CASE("term order and printing") {
  CHECK(c("a") < f1("f", c("a")));  // constants before calls
  CHECK(c("a") < c("b"));
  CHECK(f1("f", c("a")) < f1("f", c("b")));
  CHECK(f1("f", c("a")) < f1("g", c("a")));
  CHECK(f2("f", c("a"), f1("g", c("b"))).str() == "f(a, g(b))");

  auto parsed = parse_term("f(a, g(b))");
  REQUIRE(parsed.has_value());
  CHECK(*parsed == f2("f", c("a"), f1("g", c("b"))));
  CHECK_FALSE(parse_term("f(a").has_value());
}

TEST_CASE("well-formed partitions") {
  Term a = c("a");
  Term b = c("b");
  Term faa = f2("f", a, a);

  SUBCASE("partition from the running example") {
    Partition p = Partition::make({{a, faa}, {b}});
    CHECK(well_formed(p));
    CHECK(p.representative(a) == a);
    CHECK(p.representative(faa) == a);  // constant wins the cell
    CHECK(p.representative(b) == b);
    CHECK(p.str() == "{{*a, f(a, a)}, {*b}}");
  }

  SUBCASE("two constants in one cell") {
    Partition p = Partition::make({{a, b}});
    auto violations = well_formedness_violations(p);
    REQUIRE(violations.size() == 1);
    CHECK(violations[0].message.find("more than one constant") != std::string::npos);
  }

  SUBCASE("congruence violation") {
    // [a] = [f(a)] forces [f(a)] = [f(f(a))].
    Term fa = f1("f", a);
    Term ffa = f1("f", fa);
    Partition p = Partition::make({{a, fa}, {ffa}});
    auto violations = well_formedness_violations(p);
    REQUIRE(violations.size() == 1);
    CHECK(violations[0].message.find("congruence") != std::string::npos);
    CHECK_FALSE(well_formed(p));
  }

  SUBCASE("singleton call cell keeps itself as representative") {
    Term fab = f2("f", a, b);
    Partition p = Partition::make({{fab}});
    CHECK(p.representative(fab) == fab);
  }

  SUBCASE("missing term") {
    Partition p = Partition::make({{a}});
    CHECK_THROWS_AS(p.representative(b), std::out_of_range);
  }
}

TEST_CASE("extension and embedding") {
  Term a = c("a");
  Term b = c("b");
  Term fa = f1("f", a);

  Partition small = Partition::make({{a}});
  Partition bigger = Partition::make({{a, fa}, {b}});
  CHECK(is_extension(small, bigger));
  CHECK_FALSE(is_embedding(small, bigger));  // not onto

  // Splitting a cell is not an extension: two cells would map to one.
  Partition split = Partition::make({{a}, {fa}});
  Partition merged = Partition::make({{a, fa}});
  CHECK_FALSE(is_extension(split, merged));

  CHECK(is_extension(bigger, bigger));
  CHECK(is_embedding(bigger, bigger));
}

TEST_CASE("extension properties on random partitions") {
  std::mt19937 rng(7);
  std::vector<Term> universe;
  for (const char* name : {"a", "b", "c"}) universe.push_back(c(name));
  universe.push_back(f1("f", c("a")));
  universe.push_back(f1("f", c("b")));
  universe.push_back(f1("g", c("a")));

  auto random_partition = [&](size_t take) {
    std::vector<std::set<Term>> cells;
    for (size_t i = 0; i < take; ++i) {
      const Term& t = universe[i];
      bool placed = false;
      if (!cells.empty() && rng() % 2 == 0) {
        // join a random cell unless it would pair two constants
        size_t k = rng() % cells.size();
        bool has_const = false;
        for (const Term& u : cells[k]) has_const = has_const || u.is_constant();
        if (!(t.is_constant() && has_const)) {
          cells[k].insert(t);
          placed = true;
        }
      }
      if (!placed) cells.push_back({t});
    }
    return Partition::make(std::move(cells));
  };

  for (int round = 0; round < 200; ++round) {
    Partition p = random_partition(3 + rng() % 3);
    CHECK(is_extension(p, p));  // reflexive
    for (const auto& cell : p.cells()) {
      for (const Term& t : cell) {
        CHECK(p.representative(t) == p.representative(*cell.begin()));
        CHECK(cell.count(p.representative(t)) == 1);  // rep inside its cell
      }
    }
  }

  // Transitivity on a chained triple.
  Partition p1 = Partition::make({{c("a")}});
  Partition p2 = Partition::make({{c("a"), f1("f", c("a"))}});
  Partition p3 = Partition::make({{c("a"), f1("f", c("a")), f1("g", c("a"))}, {c("b")}});
  CHECK(is_extension(p1, p2));
  CHECK(is_extension(p2, p3));
  CHECK(is_extension(p1, p3));
  CHECK(is_embedding(p1, p2));
}
