#include <doctest.h>

#include <map>

#include "det_engine.hpp"
#include "nondet_engine.hpp"
#include "test_helpers.hpp"
#include "transforms.hpp"

using namespace dcds;
using namespace dcds::testing;

namespace {

// Canonical graph of a transition system after projecting every state to a
// key; states with equal keys collapse.
struct ProjectedGraph {
  std::set<std::string> states;
  std::set<std::pair<std::string, std::string>> edges;
  std::string initial;

  friend bool operator==(const ProjectedGraph& a, const ProjectedGraph& b) {
    return a.states == b.states && a.edges == b.edges && a.initial == b.initial;
  }
};

template <typename KeyFn>
ProjectedGraph project(const TransitionSystem& ts, KeyFn key) {
  ProjectedGraph g;
  std::vector<std::string> keys;
  for (size_t i = 0; i < ts.state_count(); ++i) {
    keys.push_back(key(ts.state(static_cast<int>(i))));
    g.states.insert(keys.back());
  }
  g.initial = keys[ts.initial()];
  for (const auto& e : ts.edges()) g.edges.insert({keys[e.src], keys[e.dst]});
  return g;
}

// Projection key for states of a det->nondet transformed system: recording
// relations become the call map, the rest of the facts stay.
std::string nondet_state_key(const TransitionSystem::State& s) {
  Instance plain;
  std::map<std::string, std::string> calls;
  for (const Fact& f : s.db.facts()) {
    if (f.rel.rfind("$R_", 0) == 0) {
      // $R_<fn>_<k>(args..., result)
      std::string fn = f.rel.substr(3, f.rel.rfind('_') - 3);
      std::vector<Term> args(f.args.begin(), f.args.end() - 1);
      calls[Term::call(fn, args).str()] = f.args.back().str();
    } else {
      plain.insert(f);
    }
  }
  std::string key = plain.str() + " | ";
  bool first = true;
  for (const auto& [call, value] : calls) {
    if (!first) key += ", ";
    first = false;
    key += call + "=" + value;
  }
  return key;
}

std::string det_state_key(const TransitionSystem::State& s) {
  return s.db.str() + " | " + s.annotation;
}

// Drops the clock relations of a nondet->det transformed system.
std::string clockless_key(const TransitionSystem::State& s) {
  Instance plain;
  for (const Fact& f : s.db.facts()) {
    if (f.rel == "$now" || f.rel == "$succ") continue;
    plain.insert(f);
  }
  return plain.str();
}

std::string plain_key(const TransitionSystem::State& s) { return s.db.str(); }

}  // namespace

TEST_CASE("det_to_nondet records every call site") {
  DcdsSpec spec = load_spec("openruntime.dcds");
  TransformResult r = det_to_nondet(spec);
  REQUIRE(r.spec.has_value());
  CHECK(r.spec->semantics == Semantics::Nondeterministic);
  CHECK(valid(validate(*r.spec)));

  // Two sites f(x), g(x): two binary recording relations.
  int recorders = 0;
  for (const auto& [rel, arity] : r.spec->schema) {
    if (rel.rfind("$R_", 0) == 0) {
      ++recorders;
      CHECK(arity == 2);
    }
  }
  CHECK(recorders == 2);
  // Functional dependency per site.
  CHECK(r.spec->constraints.size() == spec.constraints.size() + 2);
  // Copy effect per recorder in every action.
  for (const Action& a : r.spec->actions) {
    int copies = 0;
    for (const EffectSpec& e : a.effects) {
      if (!e.head.empty() && e.head[0].rel.rfind("$R_", 0) == 0 &&
          e.positive_conjuncts().size() == 1) {
        ++copies;
      }
    }
    CHECK(copies >= 2);
  }
}

TEST_CASE("det_to_nondet without call sites only flips the flag") {
  DcdsSpec spec = load_spec("minimal.dcds");
  TransformResult r = det_to_nondet(spec);
  REQUIRE(r.spec.has_value());
  CHECK(r.spec->semantics == Semantics::Nondeterministic);
  DcdsSpec expected = spec;
  expected.semantics = Semantics::Nondeterministic;
  CHECK(spec_equal(*r.spec, expected));
}

TEST_CASE("det_to_nondet projection preserves the bounded concrete system") {
  DcdsSpec spec = load_spec("openruntime.dcds");
  TransformResult r = det_to_nondet(spec);
  REQUIRE(r.spec.has_value());

  std::set<Term> pool{cst("a"), cst("b")};
  TransitionSystem det_ts = build_concrete_bounded(spec, pool, 2);
  TransitionSystem nondet_ts = build_concrete_bounded_nondet(*r.spec, pool, 2);

  ProjectedGraph lhs = project(det_ts, det_state_key);
  ProjectedGraph rhs = project(nondet_ts, nondet_state_key);
  CHECK(lhs == rhs);
}

TEST_CASE("nondet_to_det installs the clock") {
  DcdsSpec spec = load_spec("nondet_nonwa.dcds");
  TransformResult r = nondet_to_det(spec);
  REQUIRE(r.spec.has_value());
  CHECK(r.spec->semantics == Semantics::Deterministic);
  CHECK(valid(validate(*r.spec)));

  CHECK(r.spec->schema.count("$now") == 1);
  CHECK(r.spec->schema.count("$succ") == 1);
  CHECK(r.spec->services.count("$new") == 1);
  // succ = {(0,0),(0,1)}, now = {1}.
  CHECK(r.spec->init.contains({"$succ", {cst("0"), cst("0")}}));
  CHECK(r.spec->init.contains({"$succ", {cst("0"), cst("1")}}));
  CHECK(r.spec->init.contains({"$now", {cst("1")}}));
  // Original call sites gained the timestamp argument.
  CHECK(r.spec->services.at("f") == 2);
}

TEST_CASE("nondet_to_det projection at depth 2") {
  DcdsSpec spec = load_spec("nondet_nonwa.dcds");
  TransformResult r = nondet_to_det(spec);
  REQUIRE(r.spec.has_value());

  // Both sides range over the same pool: the clock machinery draws its
  // timestamps from it, so its values must be visible to the original system
  // too for the projections to coincide.
  std::set<Term> pool{cst("a"), cst("b"), cst("0"), cst("1"), cst("2"), cst("3")};
  TransitionSystem nondet_ts = build_concrete_bounded_nondet(spec, pool, 2);
  TransitionSystem det_ts = build_concrete_bounded(*r.spec, pool, 2);

  ProjectedGraph lhs = project(det_ts, clockless_key);
  ProjectedGraph rhs = project(nondet_ts, plain_key);
  CHECK(lhs == rhs);
}

TEST_CASE("denial encoding") {
  std::string text = R"(
semantics deterministic;
schema { P/1; R/1; T/1; }
init { P(a); T(a); T(b); }
action pick(x) {
  T(x) ~> R(x);
  P(y) ~> P(y);
  T(y) ~> T(y);
  R(y) ~> R(y);
}
process {
  T(x) => pick;
}
)";
  SpecParseResult parsed = parse_spec(text);
  REQUIRE(parsed.spec.has_value());
  REQUIRE(valid(validate(*parsed.spec)));
  DcdsSpec spec = *parsed.spec;

  SUBCASE("empty denial list leaves the spec unchanged") {
    TransformResult r = encode_denials(spec, {});
    REQUIRE(r.spec.has_value());
    CHECK(spec_equal(*r.spec, spec));
  }

  FormulaPtr denial = parse_fo_formula("exists x. R(x) & P(x)", {"a", "b"}).formula;
  REQUIRE(denial != nullptr);
  TransformResult r = encode_denials(spec, {denial});
  REQUIRE(r.spec.has_value());
  CHECK(valid(validate(*r.spec)));
  CHECK(r.spec->schema.count("$Neq") == 1);

  BuildResult original = build_abstract_ts(spec);
  BuildResult transformed = build_abstract_ts(*r.spec);
  REQUIRE_FALSE(original.diverged());
  REQUIRE_FALSE(transformed.diverged());

  auto strip = [](const TransitionSystem::State& s) {
    Instance plain;
    for (const Fact& f : s.db.facts()) {
      if (f.rel != "$Neq") plain.insert(f);
    }
    return plain;
  };

  SUBCASE("the Neq seed persists everywhere") {
    for (size_t i = 0; i < transformed.ts->state_count(); ++i) {
      bool has_neq = false;
      for (const Fact& f : transformed.ts->state(static_cast<int>(i)).db.facts()) {
        has_neq = has_neq || f.rel == "$Neq";
      }
      CHECK(has_neq);
    }
  }

  SUBCASE("reachable states are the original ones minus denial violations") {
    std::set<std::string> reachable_transformed;
    for (size_t i = 0; i < transformed.ts->state_count(); ++i) {
      Instance plain = strip(transformed.ts->state(static_cast<int>(i)));
      reachable_transformed.insert(plain.str());
      CHECK(eval(denial, plain).empty());  // denial body false everywhere
    }
    std::set<std::string> expected;
    for (size_t i = 0; i < original.ts->state_count(); ++i) {
      const Instance& db = original.ts->state(static_cast<int>(i)).db;
      if (eval(denial, db).empty()) expected.insert(db.str());
    }
    CHECK(reachable_transformed == expected);
  }
}

TEST_CASE("integrity constraint encoding") {
  std::string text = R"(
semantics deterministic;
schema { P/1; R/1; T/1; }
init { P(a); T(a); T(b); }
action pick(x) {
  T(x) ~> P(x);
  T(y) ~> T(y);
  P(y) ~> P(y);
}
process {
  T(x) => pick;
}
)";
  SpecParseResult parsed = parse_spec(text);
  REQUIRE(parsed.spec.has_value());
  DcdsSpec spec = *parsed.spec;

  SUBCASE("a tautological constraint changes nothing reachable") {
    FormulaPtr ic = parse_fo_formula("true", {}).formula;
    TransformResult r = encode_fo_constraint(spec, ic);
    REQUIRE(r.spec.has_value());
    CHECK(valid(validate(*r.spec)));
    BuildResult original = build_abstract_ts(spec);
    BuildResult transformed = build_abstract_ts(*r.spec);
    REQUIRE_FALSE(original.diverged());
    REQUIRE_FALSE(transformed.diverged());
    CHECK(original.ts->state_count() == transformed.ts->state_count());
  }

  SUBCASE("forall x. P(x) -> R(x) rules out P-without-R states") {
    // Variant whose initial instance satisfies the constraint.
    std::string text2 = R"(
semantics deterministic;
schema { P/1; R/1; T/1; }
init { P(a); R(a); T(a); T(b); }
action pick(x) {
  T(x) ~> P(x);
  T(y) ~> T(y);
  P(y) ~> P(y);
  R(y) ~> R(y);
}
process {
  T(x) => pick;
}
)";
    SpecParseResult parsed2 = parse_spec(text2);
    REQUIRE(parsed2.spec.has_value());
    FormulaPtr ic = parse_fo_formula("forall x. P(x) -> R(x)", {"a", "b"}).formula;
    TransformResult r = encode_fo_constraint(*parsed2.spec, ic);
    REQUIRE(r.spec.has_value());
    CHECK(valid(validate(*r.spec)));
    CHECK(r.spec->schema.count("$aux") == 1);
    BuildResult transformed = build_abstract_ts(*r.spec);
    REQUIRE_FALSE(transformed.diverged());
    // P(b) without R(b) never shows up.
    for (size_t i = 0; i < transformed.ts->state_count(); ++i) {
      const Instance& db = transformed.ts->state(static_cast<int>(i)).db;
      CHECK(eval_bool(ic, db));
    }
    // The violating pick is really attempted and pruned: only sigma = a runs.
    BuildResult plain = build_abstract_ts(*parsed2.spec);
    REQUIRE_FALSE(plain.diverged());
    CHECK(transformed.ts->state_count() < plain.ts->state_count());
  }
}

TEST_CASE("transforms are idempotent on their machinery") {
  DcdsSpec spec = load_spec("openruntime.dcds");
  FormulaPtr denial = parse_fo_formula("exists x. R(x) & P(x)", {"a"}).formula;

  TransformResult once = encode_denials(spec, {denial});
  REQUIRE(once.spec.has_value());
  TransformResult twice = encode_denials(*once.spec, {denial});
  REQUIRE(twice.spec.has_value());
  CHECK(spec_equal(*once.spec, *twice.spec));

  // det2nondet applied to an already-transformed (now nondet) spec is a
  // precondition violation, not silent re-application.
  TransformResult d1 = det_to_nondet(spec);
  REQUIRE(d1.spec.has_value());
  TransformResult d2 = det_to_nondet(*d1.spec);
  CHECK_FALSE(d2.spec.has_value());
}
