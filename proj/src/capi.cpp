#include "dcds/dcds.h"

#include <cstring>
#include <sstream>
#include <string>

#include <json.hpp>

#include "bisimulation.hpp"
#include "det_engine.hpp"
#include "mu_check.hpp"
#include "nondet_engine.hpp"
#include "parser.hpp"
#include "static_analysis.hpp"
#include "transforms.hpp"

using namespace dcds;

struct dcds_spec {
  DcdsSpec spec;
  std::vector<Diagnostic> diagnostics;
  std::string filename;
};

struct dcds_ts {
  TransitionSystem ts;
};

struct dcds_formula {
  MuPtr formula;
};

struct dcds_analysis {
  WeakAcyclicityResult wa;
  GrResult gr;
};

namespace {

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

void set_out(char** slot, const std::string& s) {
  if (slot) *slot = dup_string(s);
}

std::string join_diagnostics(const std::vector<Diagnostic>& diags, const std::string& file) {
  std::ostringstream out;
  for (size_t i = 0; i < diags.size(); ++i) {
    if (i) out << '\n';
    out << diags[i].str(file);
  }
  return out.str();
}

}  // namespace

extern "C" {

dcds_budgets dcds_budgets_default(void) {
  Budgets b;
  return {static_cast<uint32_t>(b.max_states), static_cast<uint32_t>(b.max_terms)};
}

void dcds_string_free(char* s) { std::free(s); }

dcds_status dcds_spec_parse(const char* text, const char* filename, dcds_spec** out,
                            char** diagnostics) {
  if (!text || !out) return DCDS_ERR_ARGUMENT;
  *out = nullptr;
  std::string file = filename ? filename : "";
  SpecParseResult parsed = parse_spec(text);
  if (!parsed.spec) {
    set_out(diagnostics, join_diagnostics(parsed.errors, file));
    return DCDS_ERR_INPUT;
  }
  std::vector<Diagnostic> diags = validate(*parsed.spec);
  if (!valid(diags)) {
    set_out(diagnostics, join_diagnostics(diags, file));
    return DCDS_ERR_INPUT;
  }
  auto* handle = new dcds_spec{std::move(*parsed.spec), std::move(diags), std::move(file)};
  *out = handle;
  if (diagnostics) set_out(diagnostics, join_diagnostics(handle->diagnostics, handle->filename));
  return DCDS_OK;
}

dcds_status dcds_spec_diagnostics(const dcds_spec* spec, char** diagnostics) {
  if (!spec || !diagnostics) return DCDS_ERR_ARGUMENT;
  set_out(diagnostics, join_diagnostics(spec->diagnostics, spec->filename));
  return DCDS_OK;
}

int dcds_spec_semantics(const dcds_spec* spec) {
  return spec && spec->spec.semantics == Semantics::Nondeterministic ? 1 : 0;
}

char* dcds_spec_print(const dcds_spec* spec) {
  return spec ? dup_string(pretty_print(spec->spec)) : nullptr;
}

void dcds_spec_free(dcds_spec* spec) { delete spec; }

dcds_status dcds_analyze(const dcds_spec* spec, dcds_analysis** out) {
  if (!spec || !out) return DCDS_ERR_ARGUMENT;
  try {
    auto* a = new dcds_analysis{weak_acyclicity(spec->spec), gr_analysis(spec->spec)};
    *out = a;
    return DCDS_OK;
  } catch (const std::exception&) {
    return DCDS_ERR_ARGUMENT;
  }
}

int dcds_analysis_weakly_acyclic(const dcds_analysis* a) { return a && a->wa.acyclic ? 1 : 0; }
int dcds_analysis_gr_acyclic(const dcds_analysis* a) { return a && a->gr.gr_acyclic ? 1 : 0; }
int dcds_analysis_gr_plus_acyclic(const dcds_analysis* a) {
  return a && a->gr.gr_plus_acyclic ? 1 : 0;
}

char* dcds_analysis_report(const dcds_analysis* a, int as_json) {
  if (!a) return nullptr;
  if (as_json) {
    nlohmann::json j;
    j["weakly_acyclic"] = a->wa.acyclic;
    j["gr_acyclic"] = a->gr.gr_acyclic;
    j["gr_plus_acyclic"] = a->gr.gr_plus_acyclic;
    j["inconclusive"] = a->gr.inconclusive;
    if (!a->gr.witness_text.empty()) j["gr_witness"] = a->gr.witness_text;
    if (!a->wa.acyclic) {
      nlohmann::json cycle = nlohmann::json::array();
      for (const DepEdge& e : a->wa.witness_cycle) {
        cycle.push_back(e.src.str() + (e.special ? " -*-> " : " -> ") + e.dst.str());
      }
      j["weak_acyclicity_witness"] = cycle;
    }
    return dup_string(j.dump(2));
  }
  std::ostringstream out;
  out << "weakly-acyclic: " << (a->wa.acyclic ? "yes" : "no");
  if (!a->wa.acyclic && !a->wa.witness_cycle.empty()) {
    out << " (cycle:";
    for (const DepEdge& e : a->wa.witness_cycle) {
      out << ' ' << e.src.str() << (e.special ? " -*->" : " ->") << ' ' << e.dst.str();
    }
    out << ')';
  }
  out << "; GR-acyclic: " << (a->gr.gr_acyclic ? "yes" : "no");
  out << "; GR+-acyclic: " << (a->gr.gr_plus_acyclic ? "yes" : "no");
  if (!a->gr.gr_acyclic && !a->gr.witness_text.empty()) {
    out << " (" << a->gr.witness_text << ')';
  }
  return dup_string(out.str());
}

char* dcds_analysis_dependency_dot(const dcds_analysis* a) {
  return a ? dup_string(a->wa.graph.dot()) : nullptr;
}

char* dcds_analysis_dataflow_dot(const dcds_analysis* a) {
  return a ? dup_string(a->gr.graph.dot()) : nullptr;
}

void dcds_analysis_free(dcds_analysis* a) { delete a; }

dcds_status dcds_build_ts(const dcds_spec* spec, const dcds_budgets* budgets, dcds_ts** out,
                          char** report) {
  if (!spec || !out) return DCDS_ERR_ARGUMENT;
  *out = nullptr;
  Budgets b;
  if (budgets) {
    b.max_states = budgets->max_states;
    b.max_terms = budgets->max_terms;
  }
  try {
    BuildResult result;
    if (spec->spec.semantics == Semantics::Deterministic) {
      result = build_abstract_ts(spec->spec, b);
    } else {
      RcyclOptions opts;
      opts.budgets = b;
      result = rcycl(spec->spec, opts);
    }
    if (result.diverged()) {
      set_out(report, result.divergence->str());
      return DCDS_ERR_BUDGET;
    }
    *out = new dcds_ts{std::move(*result.ts)};
    return DCDS_OK;
  } catch (const std::exception& e) {
    set_out(report, e.what());
    return DCDS_ERR_ARGUMENT;
  }
}

dcds_status dcds_build_oracle(const dcds_spec* spec, const char* pool_csv, uint32_t depth,
                              dcds_ts** out, char** error) {
  if (!spec || !out) return DCDS_ERR_ARGUMENT;
  *out = nullptr;
  std::set<Term> pool = spec->spec.init.adom();
  if (pool_csv) {
    std::string csv = pool_csv;
    size_t start = 0;
    while (start <= csv.size()) {
      size_t comma = csv.find(',', start);
      std::string item = csv.substr(start, comma == std::string::npos ? comma : comma - start);
      // trim
      while (!item.empty() && std::isspace(static_cast<unsigned char>(item.front()))) {
        item.erase(item.begin());
      }
      while (!item.empty() && std::isspace(static_cast<unsigned char>(item.back()))) {
        item.pop_back();
      }
      if (!item.empty()) pool.insert(Term::constant(item));
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
  }
  try {
    TransitionSystem ts = spec->spec.semantics == Semantics::Deterministic
                              ? build_concrete_bounded(spec->spec, pool, static_cast<int>(depth))
                              : build_concrete_bounded_nondet(spec->spec, pool,
                                                              static_cast<int>(depth));
    *out = new dcds_ts{std::move(ts)};
    return DCDS_OK;
  } catch (const std::exception& e) {
    set_out(error, e.what());
    return DCDS_ERR_ARGUMENT;
  }
}

uint32_t dcds_ts_state_count(const dcds_ts* ts) {
  return ts ? static_cast<uint32_t>(ts->ts.state_count()) : 0;
}

uint32_t dcds_ts_edge_count(const dcds_ts* ts) {
  return ts ? static_cast<uint32_t>(ts->ts.edge_count()) : 0;
}

uint32_t dcds_ts_initial(const dcds_ts* ts) {
  return ts ? static_cast<uint32_t>(ts->ts.initial()) : 0;
}

uint32_t dcds_ts_successor_count(const dcds_ts* ts, uint32_t state) {
  if (!ts || state >= ts->ts.state_count()) return 0;
  return static_cast<uint32_t>(ts->ts.successors(static_cast<int>(state)).size());
}

char* dcds_ts_to_dot(const dcds_ts* ts) { return ts ? dup_string(export_dot(ts->ts)) : nullptr; }

char* dcds_ts_to_json(const dcds_ts* ts) {
  return ts ? dup_string(export_json(ts->ts)) : nullptr;
}

dcds_status dcds_ts_from_json(const char* json_text, dcds_ts** out, char** error) {
  if (!json_text || !out) return DCDS_ERR_ARGUMENT;
  *out = nullptr;
  TsImportResult result = import_json(json_text);
  if (!result.ts) {
    set_out(error, result.error);
    return DCDS_ERR_INPUT;
  }
  *out = new dcds_ts{std::move(*result.ts)};
  return DCDS_OK;
}

static dcds_status bisim_verdict(const dcds_ts* a, const dcds_ts* b, bool history, int* verdict) {
  if (!a || !b || !verdict) return DCDS_ERR_ARGUMENT;
  BisimResult r = history ? history_bisimilar(a->ts, b->ts) : persistence_bisimilar(a->ts, b->ts);
  if (r.status == BisimResult::Status::BudgetExceeded) return DCDS_ERR_BUDGET;
  *verdict = r.bisimilar ? 1 : 0;
  return DCDS_OK;
}

dcds_status dcds_ts_history_bisimilar(const dcds_ts* a, const dcds_ts* b, int* verdict) {
  return bisim_verdict(a, b, true, verdict);
}

dcds_status dcds_ts_persistence_bisimilar(const dcds_ts* a, const dcds_ts* b, int* verdict) {
  return bisim_verdict(a, b, false, verdict);
}

void dcds_ts_free(dcds_ts* ts) { delete ts; }

dcds_status dcds_formula_parse(const char* text, const dcds_spec* spec, dcds_formula** out,
                               char** diagnostics) {
  if (!text || !out) return DCDS_ERR_ARGUMENT;
  *out = nullptr;
  std::set<std::string> constants;
  if (spec) {
    constants = spec->spec.constants;
    for (const Term& t : spec->spec.init.adom()) constants.insert(t.symbol());
  }
  MuParseResult parsed = parse_mu_formula(text, constants);
  if (!parsed.formula) {
    set_out(diagnostics, join_diagnostics(parsed.errors, "<formula>"));
    return DCDS_ERR_INPUT;
  }
  *out = new dcds_formula{parsed.formula};
  return DCDS_OK;
}

int dcds_formula_fragment(const dcds_formula* f) {
  if (!f) return 0;
  switch (classify(f->formula)) {
    case MuFragment::MuL:
      return 0;
    case MuFragment::MuLA:
      return 1;
    case MuFragment::MuLP:
      return 2;
  }
  return 0;
}

char* dcds_formula_print(const dcds_formula* f) {
  return f ? dup_string(mu_str(f->formula)) : nullptr;
}

dcds_status dcds_model_check(const dcds_ts* ts, const dcds_formula* f, int* holds,
                             char** extensions_json) {
  if (!ts || !f || !holds) return DCDS_ERR_ARGUMENT;
  ModelCheckResult result = model_check(ts->ts, f->formula);
  if (!result.ok) {
    set_out(extensions_json, result.error);
    return DCDS_ERR_UNSUPPORTED;
  }
  *holds = result.holds ? 1 : 0;
  if (extensions_json) {
    nlohmann::json j = nlohmann::json::array();
    for (const auto& [formula, states] : result.extensions) {
      j.push_back({{"formula", formula}, {"states", states}});
    }
    set_out(extensions_json, j.dump(2));
  }
  return DCDS_OK;
}

void dcds_formula_free(dcds_formula* f) { delete f; }

dcds_status dcds_transform(const dcds_spec* spec, dcds_transform_kind kind,
                           const char* const* formulas, size_t formula_count, dcds_spec** out,
                           char** report) {
  if (!spec || !out) return DCDS_ERR_ARGUMENT;
  *out = nullptr;
  std::set<std::string> constants = spec->spec.constants;
  for (const Term& t : spec->spec.init.adom()) constants.insert(t.symbol());

  std::vector<FormulaPtr> parsed;
  for (size_t i = 0; i < formula_count; ++i) {
    FormulaParseResult r = parse_fo_formula(formulas[i], constants);
    if (!r.formula) {
      set_out(report, join_diagnostics(r.errors, "<formula>"));
      return DCDS_ERR_INPUT;
    }
    parsed.push_back(r.formula);
  }

  TransformResult result;
  switch (kind) {
    case DCDS_TRANSFORM_DET_TO_NONDET:
      result = det_to_nondet(spec->spec);
      break;
    case DCDS_TRANSFORM_NONDET_TO_DET:
      result = nondet_to_det(spec->spec);
      break;
    case DCDS_TRANSFORM_DENIALS:
      result = encode_denials(spec->spec, parsed);
      break;
    case DCDS_TRANSFORM_IC:
      if (parsed.size() != 1) {
        set_out(report, "integrity-constraint transform takes exactly one formula");
        return DCDS_ERR_ARGUMENT;
      }
      result = encode_fo_constraint(spec->spec, parsed[0]);
      break;
    default:
      return DCDS_ERR_ARGUMENT;
  }
  if (!result.spec) {
    set_out(report, join_diagnostics(result.errors, "<transform>"));
    return DCDS_ERR_INPUT;
  }
  set_out(report, result.report.str());
  *out = new dcds_spec{std::move(*result.spec), {}, spec->filename};
  return DCDS_OK;
}

}  // extern "C"
