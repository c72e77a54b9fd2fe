// Command-line front end; talks to the verifier exclusively through the
// public C API.
//
// Exit codes: 0 success / property HOLDS; 1 property FAILS or analysis
// negative; 2 budget exhausted (divergence); 3 input error.

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "dcds/dcds.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitNegative = 1;
constexpr int kExitBudget = 2;
constexpr int kExitInput = 3;

struct StringGuard {
  char* s = nullptr;
  ~StringGuard() { dcds_string_free(s); }
  std::string str() const { return s ? s : ""; }
};

std::string read_file(const std::string& path, bool* ok) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    *ok = false;
    return "";
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  *ok = true;
  return buf.str();
}

bool write_output(const std::string& out_path, const std::string& text) {
  if (out_path.empty()) {
    std::cout << text;
    if (!text.empty() && text.back() != '\n') std::cout << '\n';
    return true;
  }
  std::ofstream out(out_path, std::ios::binary);
  if (!out) {
    std::cerr << "error: cannot write " << out_path << '\n';
    return false;
  }
  out << text;
  return true;
}

dcds_spec* load_spec(const std::string& path, int* exit_code) {
  bool ok = false;
  std::string text = read_file(path, &ok);
  if (!ok) {
    std::cerr << "error: cannot read " << path << '\n';
    *exit_code = kExitInput;
    return nullptr;
  }
  dcds_spec* spec = nullptr;
  StringGuard diags;
  dcds_status status = dcds_spec_parse(text.c_str(), path.c_str(), &spec, &diags.s);
  if (status != DCDS_OK) {
    std::cerr << diags.str() << '\n';
    *exit_code = kExitInput;
    return nullptr;
  }
  if (!diags.str().empty()) std::cerr << diags.str() << '\n';
  return spec;
}

dcds_budgets budgets_from_flags(uint32_t max_states, uint32_t max_terms) {
  dcds_budgets b = dcds_budgets_default();
  if (const char* env = std::getenv("DCDS_BUDGET_STATES")) {
    b.max_states = static_cast<uint32_t>(std::strtoul(env, nullptr, 10));
  }
  if (max_states) b.max_states = max_states;
  if (max_terms) b.max_terms = max_terms;
  return b;
}

int export_ts(dcds_ts* ts, const std::string& format, const std::string& out_path,
              bool json_mode) {
  if (format == "dot") {
    StringGuard dot;
    dot.s = dcds_ts_to_dot(ts);
    return write_output(out_path, dot.str()) ? kExitOk : kExitInput;
  }
  if (format == "json") {
    StringGuard js;
    js.s = dcds_ts_to_json(ts);
    return write_output(out_path, js.str()) ? kExitOk : kExitInput;
  }
  // Summary only.
  if (json_mode) {
    nlohmann::json j;
    j["states"] = dcds_ts_state_count(ts);
    j["edges"] = dcds_ts_edge_count(ts);
    j["initial"] = dcds_ts_initial(ts);
    j["initial_successors"] = dcds_ts_successor_count(ts, dcds_ts_initial(ts));
    return write_output(out_path, j.dump(2)) ? kExitOk : kExitInput;
  }
  std::ostringstream out;
  out << "states: " << dcds_ts_state_count(ts) << "\nedges: " << dcds_ts_edge_count(ts)
      << "\ninitial successors: " << dcds_ts_successor_count(ts, dcds_ts_initial(ts)) << '\n';
  return write_output(out_path, out.str()) ? kExitOk : kExitInput;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"DCDS verifier: decidability analysis, finite abstractions, and "
               "mu-calculus model checking for data-centric dynamic systems"};
  app.require_subcommand(1);

  std::string spec_path, formula, formula_file, export_format, out_path, pool, ic;
  std::vector<std::string> denials;
  uint32_t max_states = 0, max_terms = 0, depth = 1;
  bool json_mode = false;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("spec", spec_path, "path to the .dcds specification")->required();
    cmd->add_flag("--json", json_mode, "machine-readable output");
  };

  CLI::App* check = app.add_subcommand("check", "parse and validate a specification");
  add_common(check);

  CLI::App* analyze =
      app.add_subcommand("analyze", "weak acyclicity and GR/GR+ acyclicity analysis");
  add_common(analyze);

  CLI::App* build = app.add_subcommand(
      "build-ts", "build the finite abstraction (per the spec's service semantics)");
  add_common(build);
  build->add_option("--max-states", max_states, "state budget");
  build->add_option("--max-terms", max_terms, "commitment term budget");
  build->add_option("--export", export_format, "dot|json")
      ->check(CLI::IsMember({"dot", "json"}));
  build->add_option("--out", out_path, "output file (default stdout)");

  CLI::App* model = app.add_subcommand("model-check", "build the abstraction and check a formula");
  add_common(model);
  model->add_option("--formula", formula, "formula text");
  model->add_option("--formula-file", formula_file, "file holding one formula");
  model->add_option("--max-states", max_states, "state budget");
  model->add_option("--max-terms", max_terms, "commitment term budget");

  CLI::App* transform = app.add_subcommand("transform", "semantics-preserving rewritings");
  add_common(transform);
  std::string kind;
  transform->add_option("kind", kind, "det2nondet|nondet2det|denials|ic")
      ->required()
      ->check(CLI::IsMember({"det2nondet", "nondet2det", "denials", "ic"}));
  transform->add_option("--denial", denials, "denial body (repeatable)");
  transform->add_option("--ic", ic, "FO integrity constraint");
  transform->add_option("--out", out_path, "output file (default stdout)");

  CLI::App* oracle = app.add_subcommand("oracle", "bounded concrete transition system");
  add_common(oracle);
  oracle->add_option("--pool", pool, "extra pool values, comma separated");
  oracle->add_option("--depth", depth, "exploration depth");
  oracle->add_option("--export", export_format, "dot|json")
      ->check(CLI::IsMember({"dot", "json"}));
  oracle->add_option("--out", out_path, "output file (default stdout)");

  CLI11_PARSE(app, argc, argv);

  int exit_code = kExitOk;
  dcds_spec* spec = load_spec(spec_path, &exit_code);
  if (!spec) return exit_code;

  if (check->parsed()) {
    if (json_mode) {
      nlohmann::json j;
      j["valid"] = true;
      j["semantics"] = dcds_spec_semantics(spec) ? "nondeterministic" : "deterministic";
      std::cout << j.dump(2) << '\n';
    } else {
      std::cout << "ok\n";
    }
    dcds_spec_free(spec);
    return kExitOk;
  }

  if (analyze->parsed()) {
    dcds_analysis* a = nullptr;
    if (dcds_analyze(spec, &a) != DCDS_OK) {
      dcds_spec_free(spec);
      return kExitInput;
    }
    StringGuard report;
    report.s = dcds_analysis_report(a, json_mode ? 1 : 0);
    std::cout << report.str() << '\n';
    bool positive = dcds_spec_semantics(spec) == 0
                        ? dcds_analysis_weakly_acyclic(a) != 0
                        : dcds_analysis_gr_plus_acyclic(a) != 0;
    dcds_analysis_free(a);
    dcds_spec_free(spec);
    return positive ? kExitOk : kExitNegative;
  }

  if (build->parsed()) {
    dcds_budgets b = budgets_from_flags(max_states, max_terms);
    dcds_ts* ts = nullptr;
    StringGuard report;
    dcds_status status = dcds_build_ts(spec, &b, &ts, &report.s);
    if (status == DCDS_ERR_BUDGET) {
      std::cerr << "divergence: " << report.str() << '\n';
      dcds_spec_free(spec);
      return kExitBudget;
    }
    if (status != DCDS_OK) {
      std::cerr << "error: " << report.str() << '\n';
      dcds_spec_free(spec);
      return kExitInput;
    }
    exit_code = export_ts(ts, export_format, out_path, json_mode);
    dcds_ts_free(ts);
    dcds_spec_free(spec);
    return exit_code;
  }

  if (model->parsed()) {
    std::string formula_text = formula;
    if (formula_text.empty() && !formula_file.empty()) {
      bool ok = false;
      formula_text = read_file(formula_file, &ok);
      if (!ok) {
        std::cerr << "error: cannot read " << formula_file << '\n';
        dcds_spec_free(spec);
        return kExitInput;
      }
    }
    if (formula_text.empty()) {
      std::cerr << "error: provide --formula or --formula-file\n";
      dcds_spec_free(spec);
      return kExitInput;
    }
    dcds_formula* f = nullptr;
    StringGuard ferr;
    if (dcds_formula_parse(formula_text.c_str(), spec, &f, &ferr.s) != DCDS_OK) {
      std::cerr << ferr.str() << '\n';
      dcds_spec_free(spec);
      return kExitInput;
    }
    dcds_budgets b = budgets_from_flags(max_states, max_terms);
    dcds_ts* ts = nullptr;
    StringGuard report;
    dcds_status status = dcds_build_ts(spec, &b, &ts, &report.s);
    if (status == DCDS_ERR_BUDGET) {
      std::cerr << "divergence: " << report.str() << '\n';
      dcds_formula_free(f);
      dcds_spec_free(spec);
      return kExitBudget;
    }
    if (status != DCDS_OK) {
      std::cerr << "error: " << report.str() << '\n';
      dcds_formula_free(f);
      dcds_spec_free(spec);
      return kExitInput;
    }
    int holds = 0;
    StringGuard extensions;
    status = dcds_model_check(ts, f, &holds, json_mode ? &extensions.s : nullptr);
    if (status != DCDS_OK) {
      std::cerr << "error: " << extensions.str() << '\n';
      dcds_ts_free(ts);
      dcds_formula_free(f);
      dcds_spec_free(spec);
      return kExitInput;
    }
    if (json_mode) {
      nlohmann::json j;
      j["holds"] = holds != 0;
      j["states"] = dcds_ts_state_count(ts);
      j["extensions"] = nlohmann::json::parse(extensions.str());
      std::cout << j.dump(2) << '\n';
    } else {
      std::cout << (holds ? "HOLDS" : "FAILS") << '\n';
    }
    dcds_ts_free(ts);
    dcds_formula_free(f);
    dcds_spec_free(spec);
    return holds ? kExitOk : kExitNegative;
  }

  if (transform->parsed()) {
    dcds_transform_kind tkind = DCDS_TRANSFORM_DET_TO_NONDET;
    std::vector<const char*> formulas;
    if (kind == "det2nondet") {
      tkind = DCDS_TRANSFORM_DET_TO_NONDET;
    } else if (kind == "nondet2det") {
      tkind = DCDS_TRANSFORM_NONDET_TO_DET;
    } else if (kind == "denials") {
      tkind = DCDS_TRANSFORM_DENIALS;
      for (const std::string& d : denials) formulas.push_back(d.c_str());
    } else {
      tkind = DCDS_TRANSFORM_IC;
      if (ic.empty()) {
        std::cerr << "error: --ic required for the ic transform\n";
        dcds_spec_free(spec);
        return kExitInput;
      }
      formulas.push_back(ic.c_str());
    }
    dcds_spec* transformed = nullptr;
    StringGuard report;
    dcds_status status = dcds_transform(spec, tkind, formulas.data(), formulas.size(),
                                        &transformed, &report.s);
    if (status != DCDS_OK) {
      std::cerr << "error: " << report.str() << '\n';
      dcds_spec_free(spec);
      return kExitInput;
    }
    StringGuard text;
    text.s = dcds_spec_print(transformed);
    exit_code = write_output(out_path, text.str()) ? kExitOk : kExitInput;
    std::cerr << report.str();
    dcds_spec_free(transformed);
    dcds_spec_free(spec);
    return exit_code;
  }

  if (oracle->parsed()) {
    dcds_ts* ts = nullptr;
    StringGuard err;
    dcds_status status =
        dcds_build_oracle(spec, pool.empty() ? nullptr : pool.c_str(), depth, &ts, &err.s);
    if (status != DCDS_OK) {
      std::cerr << "error: " << err.str() << '\n';
      dcds_spec_free(spec);
      return kExitInput;
    }
    exit_code = export_ts(ts, export_format, out_path, json_mode);
    dcds_ts_free(ts);
    dcds_spec_free(spec);
    return exit_code;
  }

  dcds_spec_free(spec);
  return kExitOk;
}
