#include <doctest.h>

#include <random>

#include "static_analysis.hpp"
#include "test_helpers.hpp"

using namespace dcds;
using namespace dcds::testing;

TEST_CASE("positive approximate strips guards, filters and constraints") {
  DcdsSpec audit = load_spec("travel_audit.dcds");
  DcdsSpec pos = positive_approximate(audit);
  CHECK(pos.constraints.empty());
  for (const ConditionActionRule& r : pos.process) {
    CHECK(r.guard->kind == Formula::Kind::True);
  }
  for (const Action& a : pos.actions) {
    CHECK(a.params.empty());
    for (const EffectSpec& e : a.effects) {
      CHECK(e.negative_conjuncts().empty());
    }
  }

  SUBCASE("parameters become free variables of the body") {
    std::string text = R"(
semantics deterministic;
schema { Q/1; R/1; }
init { Q(a); }
action act(x) {
  Q(x) ~> R(x);
}
process { Q(x) => act; }
)";
    SpecParseResult r = parse_spec(text);
    REQUIRE(r.spec.has_value());
    DcdsSpec p = positive_approximate(*r.spec);
    CHECK(p.actions[0].params.empty());
    CHECK(free_vars(p.actions[0].effects[0].body) == std::set<std::string>{"x"});
  }

  SUBCASE("guard-free negation-free specs only lose their constraints") {
    DcdsSpec openruntime = load_spec("openruntime_ec.dcds");
    DcdsSpec p = positive_approximate(openruntime);
    CHECK(p.constraints.empty());
    REQUIRE(p.actions.size() == 1);
    for (size_t i = 0; i < p.actions[0].effects.size(); ++i) {
      CHECK(formula_equal(p.actions[0].effects[i].body,
                          openruntime.actions[0].effects[i].body));
    }
  }
}

TEST_CASE("weak acyclicity of the bundled corpus") {
  SUBCASE("openruntime is weakly acyclic with the expected edges") {
    WeakAcyclicityResult r = weak_acyclicity(load_spec("openruntime.dcds"));
    CHECK(r.acyclic);
    CHECK(r.graph.edges.count({{"P", 1}, {"R", 1}, false}) == 1);
    CHECK(r.graph.edges.count({{"P", 1}, {"Q", 1}, true}) == 1);
    CHECK(r.graph.edges.count({{"P", 1}, {"Q", 2}, true}) == 1);
    CHECK(r.graph.edges.count({{"P", 1}, {"P", 1}, false}) == 1);
  }

  SUBCASE("nonwa has the special R->Q edge closed by Q->R") {
    WeakAcyclicityResult r = weak_acyclicity(load_spec("nonwa.dcds"));
    CHECK_FALSE(r.acyclic);
    CHECK(r.graph.edges.count({{"R", 1}, {"Q", 1}, true}) == 1);
    CHECK(r.graph.edges.count({{"Q", 1}, {"R", 1}, false}) == 1);
    REQUIRE_FALSE(r.witness_cycle.empty());
    CHECK(r.witness_cycle.front().special);
  }

  SUBCASE("the audit system is weakly acyclic") {
    CHECK(weak_acyclicity(load_spec("travel_audit.dcds")).acyclic);
  }
}

TEST_CASE("GR analysis of the bundled corpus") {
  SUBCASE("nondeterministic nonwa is GR-acyclic") {
    GrResult r = gr_analysis(load_spec("nondet_nonwa.dcds"));
    CHECK(r.gr_acyclic);
    CHECK(r.gr_plus_acyclic);
    CHECK_FALSE(r.inconclusive);
  }

  SUBCASE("the copy variant is not GR-acyclic and not GR+-acyclic") {
    GrResult r = gr_analysis(load_spec("nondet_cyclic_copy.dcds"));
    CHECK_FALSE(r.gr_acyclic);
    CHECK_FALSE(r.gr_plus_acyclic);
  }

  SUBCASE("the replace variant is not GR-acyclic and not GR+-acyclic") {
    GrResult r = gr_analysis(load_spec("nondet_cyclic_replace.dcds"));
    CHECK_FALSE(r.gr_acyclic);
    CHECK_FALSE(r.gr_plus_acyclic);
  }

  SUBCASE("the travel request system is GR+-acyclic but not GR-acyclic") {
    GrResult r = gr_analysis(load_spec("travel_request.dcds"));
    CHECK_FALSE(r.gr_acyclic);
    CHECK(r.gr_plus_acyclic);
    CHECK_FALSE(r.inconclusive);
  }
}

TEST_CASE("dataflow edges are per syntactic occurrence") {
  GrResult r = gr_analysis(load_spec("nondet_cyclic_replace.dcds"));
  // R(x) ~> R(f(x)), R(g(x)): two distinct special self-loops on R.
  int special_loops = 0;
  for (const FlowEdge& e : r.graph.edges) {
    if (e.src == "R" && e.dst == "R" && e.special) ++special_loops;
  }
  CHECK(special_loops == 2);
}

TEST_CASE("actions tag their dataflow edges") {
  GrResult r = gr_analysis(load_spec("travel_request.dcds"));
  for (const FlowEdge& e : r.graph.edges) {
    CHECK(e.actions.size() == 1);  // one generating action per occurrence
  }
}

TEST_CASE("graph shape is insensitive to effect order") {
  DcdsSpec spec = load_spec("nondet_cyclic_copy.dcds");
  DcdsSpec permuted = spec;
  std::reverse(permuted.actions[0].effects.begin(), permuted.actions[0].effects.end());

  auto shape = [](const GrResult& r) {
    std::multiset<std::string> out;
    for (const FlowEdge& e : r.graph.edges) {
      out.insert(e.src + (e.special ? "-*->" : "->") + e.dst);
    }
    return out;
  };
  GrResult a = gr_analysis(spec);
  GrResult b = gr_analysis(permuted);
  CHECK(shape(a) == shape(b));
  CHECK(a.gr_acyclic == b.gr_acyclic);
  CHECK(a.gr_plus_acyclic == b.gr_plus_acyclic);

  WeakAcyclicityResult wa = weak_acyclicity(spec);
  WeakAcyclicityResult wb = weak_acyclicity(permuted);
  CHECK(wa.graph.edges == wb.graph.edges);
}

TEST_CASE("GR-acyclicity implies GR+-acyclicity on random small systems") {
  std::mt19937 rng(47);
  const char* rels[] = {"A", "B", "D"};
  for (int round = 0; round < 60; ++round) {
    // Random single-action or two-action spec over unary relations.
    std::ostringstream spec_text;
    spec_text << "semantics nondeterministic;\nschema { A/1; B/1; D/1; }\n"
              << "services { f/1; }\ninit { A(a); }\n";
    int actions = 1 + static_cast<int>(rng() % 2);
    for (int ai = 0; ai < actions; ++ai) {
      spec_text << "action act" << ai << "() {\n";
      int effects = 1 + static_cast<int>(rng() % 3);
      for (int e = 0; e < effects; ++e) {
        const char* src = rels[rng() % 3];
        const char* dst = rels[rng() % 3];
        bool special = rng() % 2 == 0;
        spec_text << "  " << src << "(x) ~> " << dst << (special ? "(f(x))" : "(x)") << ";\n";
      }
      spec_text << "}\n";
    }
    spec_text << "process {\n";
    for (int ai = 0; ai < actions; ++ai) spec_text << "  true => act" << ai << ";\n";
    spec_text << "}\n";

    SpecParseResult parsed = parse_spec(spec_text.str());
    REQUIRE(parsed.spec.has_value());
    GrResult r = gr_analysis(*parsed.spec);
    if (r.gr_acyclic) CHECK(r.gr_plus_acyclic);
  }
}

TEST_CASE("dot export marks special edges") {
  GrResult r = gr_analysis(load_spec("nondet_nonwa.dcds"));
  CHECK(r.graph.dot().find("*") != std::string::npos);
  WeakAcyclicityResult w = weak_acyclicity(load_spec("nonwa.dcds"));
  CHECK(w.graph.dot().find("*") != std::string::npos);
}
