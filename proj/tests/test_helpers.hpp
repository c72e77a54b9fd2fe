#pragma once

#include <doctest.h>

#include <fstream>
#include <initializer_list>
#include <sstream>
#include <string>

#include "instance.hpp"
#include "parser.hpp"
#include "spec.hpp"

namespace dcds::testing {

inline std::string spec_path(const std::string& name) {
  return std::string(DCDS_SPEC_DIR) + "/" + name;
}

inline std::string slurp_spec(const std::string& name) {
  std::ifstream in(spec_path(name));
  REQUIRE_MESSAGE(in.good(), name.c_str());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

inline DcdsSpec load_spec(const std::string& name) {
  SpecParseResult r = parse_spec(slurp_spec(name));
  if (!r.spec) {
    for (const auto& d : r.errors) MESSAGE(d.str(name));
  }
  REQUIRE(r.spec.has_value());
  auto diags = validate(*r.spec);
  for (const auto& d : diags) MESSAGE(d.str(name));
  REQUIRE(valid(diags));
  return *r.spec;
}

inline Term cst(const std::string& name) { return Term::constant(name); }

inline Instance make_instance(std::initializer_list<Fact> facts) {
  Instance i;
  for (const Fact& f : facts) i.insert(f);
  return i;
}

}  // namespace dcds::testing
