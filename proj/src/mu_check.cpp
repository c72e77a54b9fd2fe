#include "mu_check.hpp"

#include <algorithm>
#include <stdexcept>

#include "query_eval.hpp"

namespace dcds {

MuPtr propositionalize(const MuPtr& f, const std::set<Term>& domain) {
  switch (f->kind) {
    case MuFormula::Kind::Exists:
      throw std::invalid_argument(
          "formula is outside muL_A: unrestricted quantification admits no finite abstraction");
    case MuFormula::Kind::ExistsLive: {
      std::vector<MuPtr> disjuncts;
      for (const Term& t : domain) {
        MuPtr grounded = mu_substitute(f->body, {{f->name, t}});
        disjuncts.push_back(MuFormula::conj(
            {MuFormula::live(QArg::ground(t)), propositionalize(grounded, domain)}));
      }
      if (disjuncts.empty()) return MuFormula::falsity();
      return MuFormula::disj(std::move(disjuncts));
    }
    case MuFormula::Kind::Not:
      return MuFormula::negation(propositionalize(f->children[0], domain));
    case MuFormula::Kind::And: {
      std::vector<MuPtr> kids;
      kids.reserve(f->children.size());
      for (const MuPtr& c : f->children) kids.push_back(propositionalize(c, domain));
      return MuFormula::conj(std::move(kids));
    }
    case MuFormula::Kind::Dia:
      return MuFormula::dia(propositionalize(f->body, domain));
    case MuFormula::Kind::Box:
      return MuFormula::box(propositionalize(f->body, domain));
    case MuFormula::Kind::DiaLive:
      return MuFormula::dia_live(f->live_args, propositionalize(f->body, domain));
    case MuFormula::Kind::BoxLive:
      return MuFormula::box_live(f->live_args, propositionalize(f->body, domain));
    case MuFormula::Kind::Mu:
      return MuFormula::mu(f->name, propositionalize(f->body, domain));
    case MuFormula::Kind::Nu:
      return MuFormula::nu(f->name, propositionalize(f->body, domain));
    default:
      return f;
  }
}

namespace {

using StateSet = std::set<int>;

StateSet all_states(const TransitionSystem& ts) {
  StateSet out;
  for (size_t i = 0; i < ts.state_count(); ++i) out.insert(static_cast<int>(i));
  return out;
}

bool live_in(const TransitionSystem& ts, int s, const QArg& a) {
  if (a.is_var) throw std::logic_error("live(" + a.name + ") not grounded");
  return ts.state(s).db.adom().count(a.term) > 0;
}

struct Extensions {
  std::vector<std::pair<std::string, std::vector<int>>> rows;
  std::set<std::string> seen;

  void record(const MuPtr& f, const StateSet& states) {
    std::string key = mu_str(f);
    if (!seen.insert(key).second) return;
    rows.emplace_back(std::move(key), std::vector<int>(states.begin(), states.end()));
  }
};

// Fixpoint evaluation over the propositionalized formula. Valuations map
// predicate variables to state sets.
struct PropEvaluator {
  const TransitionSystem& ts;
  Extensions* extensions;

  StateSet eval(const MuPtr& f, std::map<std::string, StateSet>& env) {
    StateSet out;
    switch (f->kind) {
      case MuFormula::Kind::Query: {
        for (size_t i = 0; i < ts.state_count(); ++i) {
          if (eval_bool(f->query, ts.state(static_cast<int>(i)).db)) {
            out.insert(static_cast<int>(i));
          }
        }
        break;
      }
      case MuFormula::Kind::Live: {
        for (size_t i = 0; i < ts.state_count(); ++i) {
          if (live_in(ts, static_cast<int>(i), f->live_args[0])) {
            out.insert(static_cast<int>(i));
          }
        }
        break;
      }
      case MuFormula::Kind::Not: {
        StateSet inner = eval(f->children[0], env);
        for (int s : all_states(ts)) {
          if (!inner.count(s)) out.insert(s);
        }
        break;
      }
      case MuFormula::Kind::And: {
        out = all_states(ts);
        for (const MuPtr& c : f->children) {
          StateSet part = eval(c, env);
          StateSet kept;
          std::set_intersection(out.begin(), out.end(), part.begin(), part.end(),
                                std::inserter(kept, kept.begin()));
          out = std::move(kept);
        }
        break;
      }
      case MuFormula::Kind::Dia:
      case MuFormula::Kind::DiaLive: {
        StateSet inner = eval(f->body, env);
        for (size_t i = 0; i < ts.state_count(); ++i) {
          int s = static_cast<int>(i);
          for (int t : ts.successors(s)) {
            if (!inner.count(t)) continue;
            if (f->kind == MuFormula::Kind::DiaLive) {
              bool alive = std::all_of(f->live_args.begin(), f->live_args.end(),
                                       [&](const QArg& a) { return live_in(ts, t, a); });
              if (!alive) continue;
            }
            out.insert(s);
            break;
          }
        }
        break;
      }
      case MuFormula::Kind::Box:
      case MuFormula::Kind::BoxLive: {
        // [phi]: every successor satisfies phi; the live-guarded form also
        // requires the guard values to persist into every successor.
        StateSet inner = eval(f->body, env);
        for (size_t i = 0; i < ts.state_count(); ++i) {
          int s = static_cast<int>(i);
          bool all = true;
          for (int t : ts.successors(s)) {
            bool sat = inner.count(t) > 0;
            if (sat && f->kind == MuFormula::Kind::BoxLive) {
              sat = std::all_of(f->live_args.begin(), f->live_args.end(),
                                [&](const QArg& a) { return live_in(ts, t, a); });
            }
            if (!sat) {
              all = false;
              break;
            }
          }
          if (all) out.insert(s);
        }
        break;
      }
      case MuFormula::Kind::PredVar: {
        auto it = env.find(f->name);
        if (it == env.end()) throw std::logic_error("unbound predicate variable " + f->name);
        out = it->second;
        break;
      }
      case MuFormula::Kind::Mu:
      case MuFormula::Kind::Nu: {
        bool least = f->kind == MuFormula::Kind::Mu;
        StateSet current = least ? StateSet{} : all_states(ts);
        size_t iterations = 0;
        while (true) {
          auto saved = env.find(f->name);
          StateSet saved_val;
          bool had = saved != env.end();
          if (had) saved_val = saved->second;
          env[f->name] = current;
          StateSet next = eval(f->body, env);
          if (had) {
            env[f->name] = std::move(saved_val);
          } else {
            env.erase(f->name);
          }
          // Monotonicity of the iterated operator.
          if (least && !std::includes(next.begin(), next.end(), current.begin(),
                                      current.end())) {
            throw std::logic_error("least fixpoint iterate shrank; operator not monotone");
          }
          if (!least && !std::includes(current.begin(), current.end(), next.begin(),
                                       next.end())) {
            throw std::logic_error("greatest fixpoint iterate grew; operator not monotone");
          }
          if (next == current) break;
          current = std::move(next);
          if (++iterations > ts.state_count() + 1) {
            throw std::logic_error("fixpoint did not converge within |states| iterations");
          }
        }
        out = std::move(current);
        break;
      }
      case MuFormula::Kind::Exists:
      case MuFormula::Kind::ExistsLive:
        throw std::logic_error("quantifier survived propositionalization");
    }
    if (extensions) extensions->record(f, out);
    return out;
  }
};

// Valuation-based evaluation; quantifiers range over adom(ts).
struct DirectEvaluator {
  const TransitionSystem& ts;
  std::set<Term> domain;

  StateSet eval(const MuPtr& f, std::map<std::string, Term>& v,
                std::map<std::string, StateSet>& env) {
    StateSet out;
    switch (f->kind) {
      case MuFormula::Kind::Query: {
        FormulaPtr grounded = substitute(f->query, v);
        for (size_t i = 0; i < ts.state_count(); ++i) {
          if (eval_bool(grounded, ts.state(static_cast<int>(i)).db)) {
            out.insert(static_cast<int>(i));
          }
        }
        break;
      }
      case MuFormula::Kind::Live: {
        QArg a = f->live_args[0];
        if (a.is_var) {
          auto it = v.find(a.name);
          if (it == v.end()) throw std::logic_error("unbound variable " + a.name);
          a = QArg::ground(it->second);
        }
        for (size_t i = 0; i < ts.state_count(); ++i) {
          if (live_in(ts, static_cast<int>(i), a)) out.insert(static_cast<int>(i));
        }
        break;
      }
      case MuFormula::Kind::ExistsLive: {
        for (const Term& t : domain) {
          auto saved = v.find(f->name);
          Term saved_val;
          bool had = saved != v.end();
          if (had) saved_val = saved->second;
          v[f->name] = t;
          StateSet part = eval(f->body, v, env);
          if (had) {
            v[f->name] = saved_val;
          } else {
            v.erase(f->name);
          }
          for (int s : part) {
            if (ts.state(s).db.adom().count(t)) out.insert(s);
          }
        }
        break;
      }
      case MuFormula::Kind::Exists:
        throw std::invalid_argument("formula is outside muL_A");
      case MuFormula::Kind::Not: {
        StateSet inner = eval(f->children[0], v, env);
        for (int s : all_states(ts)) {
          if (!inner.count(s)) out.insert(s);
        }
        break;
      }
      case MuFormula::Kind::And: {
        out = all_states(ts);
        for (const MuPtr& c : f->children) {
          StateSet part = eval(c, v, env);
          StateSet kept;
          std::set_intersection(out.begin(), out.end(), part.begin(), part.end(),
                                std::inserter(kept, kept.begin()));
          out = std::move(kept);
        }
        break;
      }
      case MuFormula::Kind::Dia:
      case MuFormula::Kind::DiaLive:
      case MuFormula::Kind::Box:
      case MuFormula::Kind::BoxLive: {
        std::vector<QArg> guard = f->live_args;
        for (QArg& a : guard) {
          if (a.is_var) {
            auto it = v.find(a.name);
            if (it == v.end()) throw std::logic_error("unbound variable " + a.name);
            a = QArg::ground(it->second);
          }
        }
        StateSet inner = eval(f->body, v, env);
        bool diamond =
            f->kind == MuFormula::Kind::Dia || f->kind == MuFormula::Kind::DiaLive;
        for (size_t i = 0; i < ts.state_count(); ++i) {
          int s = static_cast<int>(i);
          bool witness = false;
          bool all = true;
          for (int t : ts.successors(s)) {
            bool sat = inner.count(t) > 0 &&
                       std::all_of(guard.begin(), guard.end(),
                                   [&](const QArg& a) { return live_in(ts, t, a); });
            witness = witness || sat;
            all = all && sat;
          }
          if (diamond ? witness : all) out.insert(s);
        }
        break;
      }
      case MuFormula::Kind::PredVar: {
        auto it = env.find(f->name);
        if (it == env.end()) throw std::logic_error("unbound predicate variable " + f->name);
        out = it->second;
        break;
      }
      case MuFormula::Kind::Mu:
      case MuFormula::Kind::Nu: {
        bool least = f->kind == MuFormula::Kind::Mu;
        StateSet current = least ? StateSet{} : all_states(ts);
        while (true) {
          auto saved = env.find(f->name);
          StateSet saved_val;
          bool had = saved != env.end();
          if (had) saved_val = saved->second;
          env[f->name] = current;
          StateSet next = eval(f->body, v, env);
          if (had) {
            env[f->name] = std::move(saved_val);
          } else {
            env.erase(f->name);
          }
          if (next == current) break;
          current = std::move(next);
        }
        out = std::move(current);
        break;
      }
    }
    return out;
  }
};

}  // namespace

ModelCheckResult model_check(const TransitionSystem& ts, const MuPtr& f) {
  ModelCheckResult result;
  result.fragment = classify(f);
  if (result.fragment == MuFragment::MuL) {
    result.ok = false;
    result.error =
        "formula is in full muL: unrestricted quantification admits no faithful finite "
        "abstraction; restrict quantifiers with live(x)";
    return result;
  }
  MuPtr prop = propositionalize(f, ts.adom());
  Extensions ext;
  PropEvaluator ev{ts, &ext};
  std::map<std::string, StateSet> env;
  StateSet states = ev.eval(prop, env);
  result.holds = states.count(ts.initial()) > 0;
  result.extensions = std::move(ext.rows);
  return result;
}

ModelCheckResult model_check_direct(const TransitionSystem& ts, const MuPtr& f) {
  ModelCheckResult result;
  result.fragment = classify(f);
  if (result.fragment == MuFragment::MuL) {
    result.ok = false;
    result.error = "formula is in full muL";
    return result;
  }
  DirectEvaluator ev{ts, ts.adom()};
  std::map<std::string, Term> v;
  std::map<std::string, StateSet> env;
  StateSet states = ev.eval(f, v, env);
  result.holds = states.count(ts.initial()) > 0;
  return result;
}

}  // namespace dcds
