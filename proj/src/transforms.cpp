#include "transforms.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace dcds {

std::string TransformReport::str() const {
  std::ostringstream out;
  auto section = [&](const char* label, const std::vector<std::string>& items) {
    out << label << ": ";
    if (items.empty()) {
      out << "none\n";
      return;
    }
    for (size_t i = 0; i < items.size(); ++i) {
      if (i) out << ", ";
      out << items[i];
    }
    out << '\n';
  };
  section("added relations", added_relations);
  section("added effects", added_effects);
  section("added constraints", added_constraints);
  section("reserved constants", reserved_constants);
  return out.str();
}

namespace {

// A variable name not used as a parameter or in the effect bodies of the
// spec; reserved names live in the '$' namespace.
std::string fresh_var(const DcdsSpec& spec, const std::string& stem) {
  std::set<std::string> taken;
  for (const Action& a : spec.actions) {
    taken.insert(a.params.begin(), a.params.end());
    for (const EffectSpec& e : a.effects) {
      auto fv = free_vars(e.body);
      taken.insert(fv.begin(), fv.end());
    }
  }
  if (!taken.count(stem)) return stem;
  for (int i = 0;; ++i) {
    std::string candidate = stem + std::to_string(i);
    if (!taken.count(candidate)) return candidate;
  }
}

bool has_effect(const Action& a, const EffectSpec& e) {
  return std::any_of(a.effects.begin(), a.effects.end(), [&](const EffectSpec& x) {
    return formula_equal(x.body, e.body) && x.head == e.head;
  });
}

bool has_constraint(const DcdsSpec& spec, const EqualityConstraint& ec) {
  return std::any_of(spec.constraints.begin(), spec.constraints.end(), [&](const LocatedEc& x) {
    return formula_equal(x.ec.body, ec.body) && x.ec.equalities == ec.equalities;
  });
}

// Copy effect R(v1..vn) ~> R(v1..vn) over fresh variable names.
EffectSpec copy_effect(const std::string& rel, int arity, const std::string& var_stem) {
  std::vector<QArg> qargs;
  FactTemplate head;
  head.rel = rel;
  for (int i = 0; i < arity; ++i) {
    std::string v = var_stem + std::to_string(i);
    qargs.push_back(QArg::var(v));
    HeadArg h;
    h.kind = HeadArg::Kind::Var;
    h.var = v;
    head.args.push_back(std::move(h));
  }
  EffectSpec e;
  e.body = Formula::atom(rel, std::move(qargs));
  e.head = {std::move(head)};
  return e;
}

std::pair<Term, Term> distinct_pair(DcdsSpec* spec, TransformReport* report) {
  auto adom = spec->init.adom();
  std::vector<Term> values(adom.begin(), adom.end());
  if (values.size() >= 2) return {values[0], values[1]};
  // Too few constants around: introduce reserved ones.
  Term a = Term::constant("$c0");
  Term b = Term::constant("$c1");
  spec->constants.insert("$c0");
  spec->constants.insert("$c1");
  report->reserved_constants.push_back("$c0");
  report->reserved_constants.push_back("$c1");
  if (values.size() == 1) a = values[0];
  return {a, b};
}

// Shared body of the denial and integrity-constraint encodings; they differ
// only in the carrier relation and the constraint body shape.
TransformResult encode_with_carrier(const DcdsSpec& input, const std::string& carrier,
                                    const std::vector<FormulaPtr>& bodies) {
  TransformResult result;
  DcdsSpec spec = input;

  auto it = spec.schema.find(carrier);
  if (it != spec.schema.end() && it->second != 2) {
    result.errors.push_back({Diagnostic::Severity::Error, 1, 1,
                             "relation '" + carrier + "' exists with arity != 2"});
    return result;
  }
  if (bodies.empty()) {
    result.spec = std::move(spec);
    return result;
  }
  if (it == spec.schema.end()) {
    spec.schema[carrier] = 2;
    result.report.added_relations.push_back(carrier + "/2");
  }
  auto [a, b] = distinct_pair(&spec, &result.report);
  Fact seed{carrier, {a, b}};
  if (!spec.init.contains(seed)) spec.init.insert(seed);

  std::string vx = fresh_var(spec, "$nx");
  std::string vy = fresh_var(spec, "$ny");
  EffectSpec persist = copy_effect(carrier, 2, fresh_var(spec, "$n"));
  for (Action& act : spec.actions) {
    if (!has_effect(act, persist)) {
      act.effects.push_back(persist);
      result.report.added_effects.push_back(act.name + ": " + formula_str(persist.body) +
                                            " ~> " + persist.head[0].str());
    }
  }
  for (const FormulaPtr& body : bodies) {
    EqualityConstraint ec;
    ec.body = Formula::conj({body, Formula::atom(carrier, {QArg::var(vx), QArg::var(vy)})});
    ec.equalities.emplace_back(QArg::var(vx), QArg::var(vy));
    if (!has_constraint(spec, ec)) {
      spec.constraints.push_back({ec, 0, 0});
      result.report.added_constraints.push_back(ec.str());
    }
  }
  result.spec = std::move(spec);
  return result;
}

}  // namespace

TransformResult det_to_nondet(const DcdsSpec& input) {
  TransformResult result;
  if (input.semantics != Semantics::Deterministic) {
    result.errors.push_back(
        {Diagnostic::Severity::Error, 1, 1, "transform requires a deterministic spec"});
    return result;
  }
  DcdsSpec spec = input;
  spec.semantics = Semantics::Nondeterministic;

  int site_counter = 0;
  std::vector<std::string> new_relations;
  for (Action& act : spec.actions) {
    for (EffectSpec& e : act.effects) {
      // Distinct call templates of this effect's head, in order of appearance.
      std::vector<HeadArg> sites;
      for (const FactTemplate& ft : e.head) {
        if (ft.rel.rfind("$R_", 0) == 0) continue;  // recording machinery
        for (const HeadArg& arg : ft.args) {
          if (arg.kind != HeadArg::Kind::Call) continue;
          bool known = std::any_of(sites.begin(), sites.end(),
                                   [&](const HeadArg& s) { return s == arg; });
          if (!known) sites.push_back(arg);
        }
      }
      for (const HeadArg& site : sites) {
        // Skip sites this effect already records.
        bool recorded = std::any_of(e.head.begin(), e.head.end(), [&](const FactTemplate& ft) {
          return ft.rel.rfind("$R_", 0) == 0 && !ft.args.empty() && ft.args.back() == site;
        });
        if (recorded) continue;
        std::string rel = "$R_" + site.function + "_" + std::to_string(site_counter++);
        if (spec.schema.count(rel) || spec.services.count(rel)) {
          result.errors.push_back({Diagnostic::Severity::Error, 1, 1,
                                   "name clash with reserved relation '" + rel + "'"});
          return result;
        }
        int arity = static_cast<int>(site.args.size()) + 1;
        spec.schema[rel] = arity;
        new_relations.push_back(rel);
        result.report.added_relations.push_back(rel + "/" + std::to_string(arity));
        FactTemplate record;
        record.rel = rel;
        record.args = site.args;
        record.args.push_back(site);
        result.report.added_effects.push_back(act.name + ": head += " + record.str());
        e.head.push_back(std::move(record));

        // Functional dependency from call arguments to result.
        std::vector<QArg> left, right;
        std::vector<HeadArg> dummy;
        for (size_t i = 0; i < site.args.size(); ++i) {
          std::string v = "$x" + std::to_string(i);
          left.push_back(QArg::var(v));
          right.push_back(QArg::var(v));
        }
        left.push_back(QArg::var("$r0"));
        right.push_back(QArg::var("$r1"));
        EqualityConstraint ec;
        ec.body = Formula::conj({Formula::atom(rel, left), Formula::atom(rel, right)});
        ec.equalities.emplace_back(QArg::var("$r0"), QArg::var("$r1"));
        if (!has_constraint(spec, ec)) {
          spec.constraints.push_back({ec, 0, 0});
          result.report.added_constraints.push_back(ec.str());
        }
      }
    }
  }
  // Every action copies every recording relation.
  for (const std::string& rel : new_relations) {
    EffectSpec persist = copy_effect(rel, spec.schema[rel], "$k");
    for (Action& act : spec.actions) {
      if (!has_effect(act, persist)) {
        act.effects.push_back(persist);
        result.report.added_effects.push_back(act.name + ": copy " + rel);
      }
    }
  }
  result.spec = std::move(spec);
  return result;
}

TransformResult nondet_to_det(const DcdsSpec& input) {
  TransformResult result;
  if (input.semantics != Semantics::Nondeterministic) {
    result.errors.push_back(
        {Diagnostic::Severity::Error, 1, 1, "transform requires a nondeterministic spec"});
    return result;
  }
  DcdsSpec spec = input;
  spec.semantics = Semantics::Deterministic;

  for (const char* reserved : {"$now", "$succ"}) {
    if (spec.schema.count(reserved) || spec.services.count(reserved)) {
      result.errors.push_back({Diagnostic::Severity::Error, 1, 1,
                               std::string("name clash with reserved relation '") + reserved +
                                   "'"});
      return result;
    }
  }
  if (spec.services.count("$new")) {
    result.errors.push_back(
        {Diagnostic::Severity::Error, 1, 1, "name clash with reserved service '$new'"});
    return result;
  }

  spec.schema["$now"] = 1;
  spec.schema["$succ"] = 2;
  spec.services["$new"] = 1;
  result.report.added_relations.push_back("$now/1");
  result.report.added_relations.push_back("$succ/2");
  for (auto& [name, arity] : spec.services) {
    if (name != "$new") ++arity;  // timestamp argument
  }

  Term zero = Term::constant("0");
  Term one = Term::constant("1");
  spec.constants.insert("0");
  spec.constants.insert("1");
  spec.init.insert({"$succ", {zero, zero}});
  spec.init.insert({"$succ", {zero, one}});
  spec.init.insert({"$now", {one}});
  result.report.reserved_constants.push_back("0");
  result.report.reserved_constants.push_back("1");

  std::string clock_var = fresh_var(spec, "$t");
  for (Action& act : spec.actions) {
    for (EffectSpec& e : act.effects) {
      bool has_call = false;
      for (FactTemplate& ft : e.head) {
        for (HeadArg& arg : ft.args) {
          if (arg.kind == HeadArg::Kind::Call) {
            HeadArg ts;
            ts.kind = HeadArg::Kind::Var;
            ts.var = clock_var;
            arg.args.push_back(std::move(ts));
            has_call = true;
          }
        }
      }
      if (has_call) {
        e.body = Formula::conj({e.body, Formula::atom("$now", {QArg::var(clock_var)})});
      }
    }
    // Clock advance: $now(t) ~> $now($new(t)), $succ(t, $new(t)).
    {
      EffectSpec advance;
      advance.body = Formula::atom("$now", {QArg::var(clock_var)});
      HeadArg tvar;
      tvar.kind = HeadArg::Kind::Var;
      tvar.var = clock_var;
      HeadArg call;
      call.kind = HeadArg::Kind::Call;
      call.function = "$new";
      call.args = {tvar};
      FactTemplate now_fact;
      now_fact.rel = "$now";
      now_fact.args = {call};
      FactTemplate succ_fact;
      succ_fact.rel = "$succ";
      succ_fact.args = {tvar, call};
      advance.head = {now_fact, succ_fact};
      if (!has_effect(act, advance)) {
        act.effects.push_back(advance);
        result.report.added_effects.push_back(act.name + ": clock advance");
      }
    }
    EffectSpec keep = copy_effect("$succ", 2, "$s");
    if (!has_effect(act, keep)) {
      act.effects.push_back(keep);
      result.report.added_effects.push_back(act.name + ": copy $succ");
    }
  }

  // The second component of $succ is a key.
  EqualityConstraint key;
  key.body = Formula::conj({Formula::atom("$succ", {QArg::var("$s0"), QArg::var("$s2")}),
                            Formula::atom("$succ", {QArg::var("$s1"), QArg::var("$s2")})});
  key.equalities.emplace_back(QArg::var("$s0"), QArg::var("$s1"));
  if (!has_constraint(spec, key)) {
    spec.constraints.push_back({key, 0, 0});
    result.report.added_constraints.push_back(key.str());
  }

  result.spec = std::move(spec);
  return result;
}

TransformResult encode_denials(const DcdsSpec& spec, const std::vector<FormulaPtr>& denials) {
  return encode_with_carrier(spec, "$Neq", denials);
}

TransformResult encode_fo_constraint(const DcdsSpec& spec, const FormulaPtr& ic) {
  return encode_with_carrier(spec, "$aux", {Formula::negation(ic)});
}

}  // namespace dcds
