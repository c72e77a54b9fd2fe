/* C interface to the DCDS verifier. Handles are opaque; functions return
 * dcds_status and hand results back through out-parameters. Strings returned
 * through char** out-parameters are owned by the caller and must be released
 * with dcds_string_free. */

#ifndef DCDS_DCDS_H
#define DCDS_DCDS_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum dcds_status {
  DCDS_OK = 0,
  DCDS_ERR_INPUT = 1,       /* parse/validation failure; see diagnostics */
  DCDS_ERR_BUDGET = 2,      /* budget exhausted; see the divergence report */
  DCDS_ERR_ARGUMENT = 3,    /* bad argument (null handle, wrong semantics, ...) */
  DCDS_ERR_UNSUPPORTED = 4  /* operation not applicable (e.g. full muL) */
} dcds_status;

typedef struct dcds_spec dcds_spec;
typedef struct dcds_ts dcds_ts;
typedef struct dcds_formula dcds_formula;
typedef struct dcds_analysis dcds_analysis;

typedef struct dcds_budgets {
  uint32_t max_states;
  uint32_t max_terms;
} dcds_budgets;

dcds_budgets dcds_budgets_default(void);

void dcds_string_free(char* s);

/* ---- specifications --------------------------------------------------- */

/* Parses and validates .dcds source. On DCDS_ERR_INPUT, *diagnostics (when
 * non-null) receives the newline-separated diagnostic list. A spec that
 * parses but fails validation is not returned. */
dcds_status dcds_spec_parse(const char* text, const char* filename, dcds_spec** out,
                            char** diagnostics);

/* Validation diagnostics of a parsed spec (empty string when clean). */
dcds_status dcds_spec_diagnostics(const dcds_spec* spec, char** diagnostics);

/* 0 = deterministic, 1 = nondeterministic. */
int dcds_spec_semantics(const dcds_spec* spec);

/* Canonical source form; parses back to an equal spec. */
char* dcds_spec_print(const dcds_spec* spec);

void dcds_spec_free(dcds_spec* spec);

/* ---- static analysis --------------------------------------------------- */

dcds_status dcds_analyze(const dcds_spec* spec, dcds_analysis** out);
int dcds_analysis_weakly_acyclic(const dcds_analysis* a);
int dcds_analysis_gr_acyclic(const dcds_analysis* a);
int dcds_analysis_gr_plus_acyclic(const dcds_analysis* a);
/* Human-readable (as_json = 0) or JSON (as_json != 0) report. */
char* dcds_analysis_report(const dcds_analysis* a, int as_json);
char* dcds_analysis_dependency_dot(const dcds_analysis* a);
char* dcds_analysis_dataflow_dot(const dcds_analysis* a);
void dcds_analysis_free(dcds_analysis* a);

/* ---- transition systems ------------------------------------------------ */

/* Builds the finite abstraction for the spec's semantics: the equality-
 * commitment abstraction for deterministic services, the eventually
 * recycling pruning for nondeterministic ones. DCDS_ERR_BUDGET hands the
 * divergence report through *report. */
dcds_status dcds_build_ts(const dcds_spec* spec, const dcds_budgets* budgets, dcds_ts** out,
                          char** report);

/* Bounded concrete oracle; pool_csv lists extra pool values (adom of the
 * initial instance is always included), e.g. "a,b,c". */
dcds_status dcds_build_oracle(const dcds_spec* spec, const char* pool_csv, uint32_t depth,
                              dcds_ts** out, char** error);

uint32_t dcds_ts_state_count(const dcds_ts* ts);
uint32_t dcds_ts_edge_count(const dcds_ts* ts);
uint32_t dcds_ts_initial(const dcds_ts* ts);
uint32_t dcds_ts_successor_count(const dcds_ts* ts, uint32_t state);
char* dcds_ts_to_dot(const dcds_ts* ts);
char* dcds_ts_to_json(const dcds_ts* ts);
dcds_status dcds_ts_from_json(const char* json_text, dcds_ts** out, char** error);
/* verdict: 1 bisimilar, 0 not. */
dcds_status dcds_ts_history_bisimilar(const dcds_ts* a, const dcds_ts* b, int* verdict);
dcds_status dcds_ts_persistence_bisimilar(const dcds_ts* a, const dcds_ts* b, int* verdict);
void dcds_ts_free(dcds_ts* ts);

/* ---- formulas and model checking ---------------------------------------- */

/* spec may be null; it supplies the constant names for resolution. */
dcds_status dcds_formula_parse(const char* text, const dcds_spec* spec, dcds_formula** out,
                               char** diagnostics);

/* 0 = muL, 1 = muL_A, 2 = muL_P. */
int dcds_formula_fragment(const dcds_formula* f);

char* dcds_formula_print(const dcds_formula* f);

/* holds: 1 when the initial state satisfies the formula. extensions_json,
 * when non-null, receives the per-subformula state sets. Rejects full muL
 * with DCDS_ERR_UNSUPPORTED. */
dcds_status dcds_model_check(const dcds_ts* ts, const dcds_formula* f, int* holds,
                             char** extensions_json);

void dcds_formula_free(dcds_formula* f);

/* ---- transforms --------------------------------------------------------- */

typedef enum dcds_transform_kind {
  DCDS_TRANSFORM_DET_TO_NONDET = 0,
  DCDS_TRANSFORM_NONDET_TO_DET = 1,
  DCDS_TRANSFORM_DENIALS = 2,
  DCDS_TRANSFORM_IC = 3
} dcds_transform_kind;

/* formulas: denial bodies for DENIALS, the single constraint for IC;
 * ignored otherwise. *report receives the transform report. */
dcds_status dcds_transform(const dcds_spec* spec, dcds_transform_kind kind,
                           const char* const* formulas, size_t formula_count, dcds_spec** out,
                           char** report);

#ifdef __cplusplus
}
#endif

#endif /* DCDS_DCDS_H */
