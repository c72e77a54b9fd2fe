#pragma once

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "spec.hpp"

namespace dcds {

struct SpecParseResult {
  std::optional<DcdsSpec> spec;  // set when no errors
  std::vector<Diagnostic> errors;
};

// Parses .dcds source. Identifiers in argument positions resolve to constants
// when they are declared in `constants`, occur in `init`, are quoted, or are
// numeric; anything else is a variable.
SpecParseResult parse_spec(const std::string& text);

struct FormulaParseResult {
  FormulaPtr formula;  // null on error
  std::vector<Diagnostic> errors;
};

// Standalone FO formula (denial bodies, integrity constraints, tests).
FormulaParseResult parse_fo_formula(const std::string& text,
                                    const std::set<std::string>& constants);

}  // namespace dcds
