#include "instance.hpp"

#include <sstream>

namespace dcds {

std::string Fact::str() const {
  std::ostringstream out;
  out << rel << '(';
  for (size_t i = 0; i < args.size(); ++i) {
    if (i > 0) out << ", ";
    out << args[i].str();
  }
  out << ')';
  return out.str();
}

std::set<Term> Instance::adom() const {
  std::set<Term> out;
  for (const Fact& f : facts_) out.insert(f.args.begin(), f.args.end());
  return out;
}

std::string Instance::str() const {
  std::ostringstream out;
  bool first = true;
  for (const Fact& f : facts_) {
    if (!first) out << "; ";
    first = false;
    out << f.str();
  }
  return out.str();
}

}  // namespace dcds
