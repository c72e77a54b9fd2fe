#include <doctest.h>

#include "bisimulation.hpp"
#include "det_engine.hpp"
#include "test_helpers.hpp"

using namespace dcds;
using namespace dcds::testing;

namespace {

Term call1(const std::string& fn, const Term& a) { return Term::call(fn, {a}); }

}  // namespace

TEST_CASE("do_effects grounds heads over every body answer") {
  DcdsSpec openruntime = load_spec("openruntime.dcds");
  const Action& alpha = openruntime.actions[0];

  std::set<Fact> produced = do_effects(openruntime.init, alpha, {});
  std::set<Fact> expected{
      {"R", {cst("a")}},
      {"P", {cst("a")}},
      {"Q", {call1("f", cst("a")), call1("g", cst("a"))}},
  };
  CHECK(produced == expected);

  DcdsSpec nonwa = load_spec("nonwa.dcds");
  std::set<Fact> step = do_effects(nonwa.init, nonwa.actions[0], {});
  CHECK(step == std::set<Fact>{{"Q", {call1("f", cst("a"))}}});

  // An effect whose body has no answers contributes nothing.
  Instance only_q = make_instance({{"Q", {cst("a")}}});
  std::set<Fact> back = do_effects(only_q, nonwa.actions[0], {});
  CHECK(back == std::set<Fact>{{"R", {cst("a")}}});
}

TEST_CASE("legal assignments are the guard answers") {
  DcdsSpec openruntime = load_spec("openruntime.dcds");
  CHECK(legal_assignments(openruntime.init, openruntime.process[0]) ==
        std::set<Assignment>{{}});

  ConditionActionRule rule;
  rule.guard = Formula::atom("R", {QArg::var("x")});
  rule.action = "whatever";
  Instance two = make_instance({{"R", {cst("a")}}, {"R", {cst("b")}}});
  auto sigmas = legal_assignments(two, rule);
  CHECK(sigmas == std::set<Assignment>{{{"x", cst("a")}}, {{"x", cst("b")}}});

  ConditionActionRule contradiction;
  contradiction.guard = Formula::conj(
      {Formula::atom("R", {QArg::var("x")}),
       Formula::negation(Formula::atom("R", {QArg::var("x")}))});
  contradiction.action = "whatever";
  CHECK(legal_assignments(two, contradiction).empty());
}

TEST_CASE("abstract successors enumerate the well-formed commitment extensions") {
  DcdsSpec openruntime = load_spec("openruntime.dcds");
  AState initial{openruntime.init, Partition::singletons(openruntime.init.adom())};

  SUBCASE("all complete commitments over {a, f(a), g(a)}") {
    auto succs = abstract_successors(initial, openruntime.actions[0], {}, openruntime.ecs());
    CHECK(succs.size() == 5);
    for (const AState& s : succs) {
      CHECK(well_formed(s.commitment));
      CHECK(is_extension(initial.commitment, s.commitment));
      // Old representatives survive.
      CHECK(s.commitment.representative(cst("a")) == cst("a"));
      // Instance lives over representatives.
      auto reps = s.commitment.representative_set();
      for (const Term& t : s.instance.adom()) CHECK(reps.count(t) == 1);
    }
  }

  SUBCASE("equality constraint keeps only f(a) ~ a commitments") {
    DcdsSpec with_ec = load_spec("openruntime_ec.dcds");
    auto succs = abstract_successors(initial, with_ec.actions[0], {}, with_ec.ecs());
    CHECK(succs.size() == 2);
    for (const AState& s : succs) {
      CHECK(s.commitment.representative(call1("f", cst("a"))) == cst("a"));
    }
  }

  SUBCASE("no new calls means exactly one successor") {
    DcdsSpec nonwa = load_spec("nonwa.dcds");
    // State {Q(a)} with commitment {{a, f(a)}}: the step back to R introduces
    // no new terms, so the commitment is not extended.
    Partition h = Partition::make({{cst("a"), call1("f", cst("a"))}});
    AState state{make_instance({{"Q", {cst("a")}}}), h};
    auto succs = abstract_successors(state, nonwa.actions[0], {}, nonwa.ecs());
    REQUIRE(succs.size() == 1);
    CHECK(succs[0].commitment == h);
    CHECK(succs[0].instance == make_instance({{"R", {cst("a")}}}));
  }
}

TEST_CASE("abstract transition system of openruntime") {
  DcdsSpec spec = load_spec("openruntime.dcds");
  BuildResult result = build_abstract_ts(spec);
  REQUIRE_FALSE(result.diverged());
  const TransitionSystem& ts = *result.ts;
  CHECK(ts.successors(ts.initial()).size() == 5);
  CHECK(ts.state_count() == 10);
  // Finitely branching: every state has at most 5 successors here.
  for (size_t i = 0; i < ts.state_count(); ++i) {
    CHECK(ts.successors(static_cast<int>(i)).size() <= 5);
  }
}

TEST_CASE("nonwa diverges with a nested call chain") {
  DcdsSpec spec = load_spec("nonwa.dcds");
  Budgets budgets;
  budgets.max_terms = 20;
  BuildResult result = build_abstract_ts(spec, budgets);
  REQUIRE(result.diverged());
  CHECK(result.divergence->message.find("term budget") != std::string::npos);
  // The report names the growing f(f(...)) chain.
  CHECK(result.divergence->deepest_term.find("f(f(") != std::string::npos);
}

TEST_CASE("spec with no applicable rules yields the single initial state") {
  std::string text = R"(
semantics deterministic;
schema { P/1; R/1; }
init { P(a); }
action act() {
  R(x) ~> R(x);
}
process {
  exists y. R(y) => act;
}
)";
  SpecParseResult r = parse_spec(text);
  REQUIRE(r.spec.has_value());
  BuildResult result = build_abstract_ts(*r.spec);
  REQUIRE_FALSE(result.diverged());
  CHECK(result.ts->state_count() == 1);
  CHECK(result.ts->edge_count() == 0);
}

TEST_CASE("bounded concrete oracle") {
  DcdsSpec spec = load_spec("openruntime.dcds");
  std::set<Term> pool{cst("a"), cst("b")};

  SUBCASE("depth 0 is the single initial state") {
    TransitionSystem ts = build_concrete_bounded(spec, pool, 0);
    CHECK(ts.state_count() == 1);
  }

  SUBCASE("depth 1 has all pool evaluations of f(a), g(a)") {
    TransitionSystem ts = build_concrete_bounded(spec, pool, 1);
    CHECK(ts.successors(ts.initial()).size() == 4);
  }

  SUBCASE("the equality constraint pins f(a) to a") {
    DcdsSpec with_ec = load_spec("openruntime_ec.dcds");
    TransitionSystem ts = build_concrete_bounded(with_ec, pool, 1);
    CHECK(ts.successors(ts.initial()).size() == 2);
  }

  SUBCASE("pool must cover the initial active domain") {
    CHECK_THROWS_AS(build_concrete_bounded(spec, {cst("b")}, 1), std::invalid_argument);
  }
}

TEST_CASE("service calls never re-evaluate along a run") {
  DcdsSpec spec = load_spec("openruntime.dcds");
  TransitionSystem ts = build_concrete_bounded(spec, {cst("a"), cst("b"), cst("c")}, 3);
  // The annotation holds the call map; along every edge it only grows.
  for (const auto& e : ts.edges()) {
    const std::string& before = ts.state(e.src).annotation;
    const std::string& after = ts.state(e.dst).annotation;
    if (before.empty()) continue;
    std::istringstream in(before);
    std::string entry;
    while (std::getline(in, entry, ',')) {
      while (!entry.empty() && entry.front() == ' ') entry.erase(entry.begin());
      CHECK(after.find(entry) != std::string::npos);
    }
  }
}

TEST_CASE("abstract and bounded concrete systems are history bisimilar at depth 2") {
  DcdsSpec spec = load_spec("openruntime.dcds");
  BuildResult abstract = build_abstract_ts(spec);
  REQUIRE_FALSE(abstract.diverged());
  TransitionSystem concrete = build_concrete_bounded(spec, {cst("a"), cst("b"), cst("c")}, 2);
  BisimResult r = history_bisimilar(truncate(*abstract.ts, 2), truncate(concrete, 2));
  CHECK(r.status == BisimResult::Status::Decided);
  CHECK(r.bisimilar);
}
