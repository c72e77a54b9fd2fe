#include <doctest.h>

#include <random>

#include "bisimulation.hpp"
#include "transition_system.hpp"

using namespace dcds;

namespace {

Term c(const std::string& name) { return Term::constant(name); }

Instance inst(std::initializer_list<Fact> facts) {
  Instance i;
  for (const Fact& f : facts) i.insert(f);
  return i;
}

// Random transition system over unary P with values drawn from the pool.
TransitionSystem random_ts(std::mt19937& rng, const std::vector<Term>& pool, int max_states) {
  TransitionSystem ts;
  int n = 1 + static_cast<int>(rng() % max_states);
  for (int i = 0; i < n; ++i) {
    Instance db;
    size_t facts = rng() % 3;
    for (size_t k = 0; k < facts; ++k) db.insert({"P", {pool[rng() % pool.size()]}});
    ts.add_state(std::move(db));
  }
  ts.set_initial(0);
  int edges = static_cast<int>(rng() % (2 * n + 1));
  for (int k = 0; k < edges; ++k) {
    ts.add_edge(static_cast<int>(rng() % n), static_cast<int>(rng() % n));
  }
  return ts;
}

// Isomorphic copy: permuted state ids, values renamed by a bijection.
TransitionSystem renamed_copy(const TransitionSystem& ts, const std::map<Term, Term>& renaming,
                              int rotation) {
  int n = static_cast<int>(ts.state_count());
  auto remap = [&](int s) { return (s + rotation) % n; };
  std::vector<Instance> dbs(n);
  for (int s = 0; s < n; ++s) {
    Instance db;
    for (const Fact& f : ts.state(s).db.facts()) {
      Fact g;
      g.rel = f.rel;
      for (const Term& t : f.args) {
        auto it = renaming.find(t);
        g.args.push_back(it == renaming.end() ? t : it->second);
      }
      db.insert(std::move(g));
    }
    dbs[remap(s)] = std::move(db);
  }
  TransitionSystem out;
  for (int s = 0; s < n; ++s) out.add_state(dbs[s]);
  out.set_initial(remap(ts.initial()));
  for (const auto& e : ts.edges()) out.add_edge(remap(e.src), remap(e.dst), e.label);
  return out;
}

}  // namespace

TEST_CASE("dot export of a single-state system") {
  TransitionSystem ts;
  ts.add_state(inst({{"P", {c("a")}}}));
  ts.set_initial(0);
  std::string dot = export_dot(ts);
  CHECK(dot.find("digraph") != std::string::npos);
  CHECK(dot.find("P(a)") != std::string::npos);
  CHECK(dot.find("->") == std::string::npos);  // no edges
}

TEST_CASE("json export round-trips") {
  TransitionSystem ts;
  ts.add_state(inst({{"P", {c("a")}}, {"Q", {c("a"), Term::call("f", {c("a")})}}}), "note");
  ts.add_state(inst({{"P", {c("b")}}}));
  ts.set_initial(0);
  ts.add_edge(0, 1, "alpha");
  ts.add_edge(1, 1, "alpha");

  TsImportResult imported = import_json(export_json(ts));
  REQUIRE(imported.ts.has_value());
  CHECK(*imported.ts == ts);
  CHECK(imported.ts->state_count() == ts.state_count());
  CHECK(imported.ts->edge_count() == ts.edge_count());

  CHECK_FALSE(import_json("{broken").ts.has_value());
}

TEST_CASE("runs are edge-connected prefixes") {
  TransitionSystem ts;
  ts.add_state(inst({{"P", {c("a")}}}));
  ts.add_state(inst({{"P", {c("b")}}}));
  ts.set_initial(0);
  ts.add_edge(0, 1);
  CHECK(is_run(ts, {0, 1}));
  CHECK_FALSE(is_run(ts, {1, 0}));
  CHECK_FALSE(is_run(ts, {0, 0}));
}

TEST_CASE("a system is bisimilar to itself") {
  TransitionSystem ts;
  ts.add_state(inst({{"P", {c("a")}}}));
  ts.add_state(inst({{"P", {c("a")}}, {"P", {c("b")}}}));
  ts.set_initial(0);
  ts.add_edge(0, 1);
  ts.add_edge(1, 0);

  BisimResult h = history_bisimilar(ts, ts);
  CHECK(h.bisimilar);
  CHECK_FALSE(h.witness.empty());
  CHECK(persistence_bisimilar(ts, ts).bisimilar);
}

TEST_CASE("cardinality mismatch distinguishes one-state systems") {
  TransitionSystem a;
  a.add_state(inst({{"P", {c("a")}}}));
  a.set_initial(0);
  TransitionSystem b;
  b.add_state(inst({{"P", {c("a")}}, {"P", {c("b")}}}));
  b.set_initial(0);

  BisimResult h = history_bisimilar(a, b);
  CHECK_FALSE(h.bisimilar);
  CHECK(h.obligation.find("initial") != std::string::npos);
  CHECK_FALSE(persistence_bisimilar(a, b).bisimilar);
}

TEST_CASE("renamed copies are history and persistence bisimilar") {
  std::mt19937 rng(23);
  std::vector<Term> pool{c("a"), c("b"), c("u"), c("v")};
  std::map<Term, Term> renaming{
      {c("a"), c("x1")}, {c("b"), c("x2")}, {c("u"), c("x3")}, {c("v"), c("x4")}};
  for (int round = 0; round < 20; ++round) {
    TransitionSystem ts = random_ts(rng, pool, 4);
    TransitionSystem copy = renamed_copy(ts, renaming, static_cast<int>(rng() % 3));
    CAPTURE(export_json(ts));
    CHECK(history_bisimilar(ts, copy).bisimilar);
    CHECK(persistence_bisimilar(ts, copy).bisimilar);
  }
}

TEST_CASE("history bisimilarity implies persistence bisimilarity") {
  std::mt19937 rng(31);
  std::vector<Term> pool{c("a"), c("b"), c("d")};
  int checked = 0;
  for (int round = 0; round < 40; ++round) {
    TransitionSystem a = random_ts(rng, pool, 4);
    TransitionSystem b = random_ts(rng, pool, 4);
    BisimResult h = history_bisimilar(a, b);
    if (h.bisimilar) {
      ++checked;
      CHECK(persistence_bisimilar(a, b).bisimilar);
    }
  }
  CHECK(checked > 0);  // the suite must exercise some positive pairs
}

TEST_CASE("symmetry of both checkers") {
  std::mt19937 rng(37);
  std::vector<Term> pool{c("a"), c("b")};
  for (int round = 0; round < 25; ++round) {
    TransitionSystem a = random_ts(rng, pool, 3);
    TransitionSystem b = random_ts(rng, pool, 3);
    CHECK(history_bisimilar(a, b).bisimilar == history_bisimilar(b, a).bisimilar);
    CHECK(persistence_bisimilar(a, b).bisimilar == persistence_bisimilar(b, a).bisimilar);
  }
}

TEST_CASE("truncate keeps the breadth-first prefix") {
  TransitionSystem ts;
  ts.add_state(inst({{"P", {c("a")}}}));
  ts.add_state(inst({{"P", {c("b")}}}));
  ts.add_state(inst({{"P", {c("d")}}}));
  ts.set_initial(0);
  ts.add_edge(0, 1);
  ts.add_edge(1, 2);
  ts.add_edge(2, 0);

  TransitionSystem cut = truncate(ts, 1);
  CHECK(cut.state_count() == 2);
  CHECK(cut.edge_count() == 1);
  TransitionSystem all = truncate(ts, 5);
  CHECK(all.state_count() == 3);
  CHECK(all.edge_count() == 3);
}
