#pragma once

// Helpers for the line-oriented key=value model format.

#include <cstdlib>
#include <string>
#include <utility>

#include "innerlab/errors.hpp"

namespace innerlab::textio {

inline std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

inline double parse_number(const std::string& s, int lineno) {
  char* end = nullptr;
  const double x = std::strtod(s.c_str(), &end);
  if (s.empty() || end == s.c_str() || *end != '\0')
    throw UsageError("line " + std::to_string(lineno) + ": bad number '" + s + "'");
  return x;
}

inline std::pair<double, double> parse_pair(const std::string& v, int lineno) {
  const auto comma = v.find(',');
  if (comma == std::string::npos) throw UsageError("line " + std::to_string(lineno) + ": expected <x>,<y>");
  return {parse_number(trim(v.substr(0, comma)), lineno), parse_number(trim(v.substr(comma + 1)), lineno)};
}

}  // namespace innerlab::textio
