#pragma once

#include <map>
#include <string>
#include <vector>

#include "polyopt/polynomial.hpp"

namespace polyopt {

// Text problem format:
//
//   # comment
//   vars x y;
//   minimize (x-1)^2*(x-2)^2*(x^2+1) + (y-1)^2*(y^2+1);
//   s.t.
//     6*x^5 - 30*x^4 + 56*x^3 - 54*x^2 + 34*x - 12 = 0;
//     1 - x^2 - y^2 >= 0;
//   option gradient-ideal off;
struct ProblemFile {
  int nvars = 0;
  std::vector<std::string> vars;
  Polynomial objective;
  ConstraintSet constraints;
  std::map<std::string, std::string> options;
};

ProblemFile parse_problem(const std::string& text);
ProblemFile load_problem(const std::string& path);
std::string print_problem(const ProblemFile& p);

// Parses a single polynomial expression over the given variables.
Polynomial parse_polynomial(const std::string& text, const std::vector<std::string>& vars);

}  // namespace polyopt
