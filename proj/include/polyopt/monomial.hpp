#pragma once

#include <numeric>
#include <string>
#include <vector>

#include "polyopt/errors.hpp"

namespace polyopt {

// Exponent vector of a monomial x^a = x_1^{a_1} ... x_n^{a_n}.
struct Monomial {
  std::vector<int> exp;

  Monomial() = default;
  explicit Monomial(int nvars) : exp(static_cast<size_t>(nvars), 0) {}
  explicit Monomial(std::vector<int> e) : exp(std::move(e)) {}

  int nvars() const { return static_cast<int>(exp.size()); }
  int degree() const { return std::accumulate(exp.begin(), exp.end(), 0); }
  bool is_one() const {
    for (int e : exp)
      if (e != 0) return false;
    return true;
  }

  bool operator==(const Monomial& o) const { return exp == o.exp; }
  bool operator!=(const Monomial& o) const { return exp != o.exp; }
};

// Graded order: degree first, ties broken reverse-lexicographically so that
// within a degree the monomial with the lexicographically larger exponent
// vector comes first (1 < x < y < x^2 < xy < y^2 < ...).
struct GradedLess {
  bool operator()(const Monomial& a, const Monomial& b) const {
    const int da = a.degree();
    const int db = b.degree();
    if (da != db) return da < db;
    return a.exp > b.exp;
  }
};

inline bool graded_less(const Monomial& a, const Monomial& b) { return GradedLess{}(a, b); }

inline Monomial mono_one(int nvars) { return Monomial(nvars); }

inline Monomial mono_var(int nvars, int var, int power = 1) {
  Monomial m(nvars);
  m.exp[static_cast<size_t>(var)] = power;
  return m;
}

inline Monomial mono_mul(const Monomial& a, const Monomial& b) {
  if (a.nvars() != b.nvars()) throw DimensionMismatch("mono_mul: nvars mismatch");
  Monomial r = a;
  for (int i = 0; i < b.nvars(); ++i) r.exp[static_cast<size_t>(i)] += b.exp[static_cast<size_t>(i)];
  return r;
}

inline bool mono_divides(const Monomial& a, const Monomial& b) {
  if (a.nvars() != b.nvars()) throw DimensionMismatch("mono_divides: nvars mismatch");
  for (int i = 0; i < a.nvars(); ++i)
    if (a.exp[static_cast<size_t>(i)] > b.exp[static_cast<size_t>(i)]) return false;
  return true;
}

// b / x_var, exponent must be positive.
inline Monomial mono_div_var(const Monomial& m, int var) {
  Monomial r = m;
  r.exp[static_cast<size_t>(var)] -= 1;
  return r;
}

// All monomials in n variables of degree exactly d, in graded order.
std::vector<Monomial> monomials_of_degree(int nvars, int d);

// All monomials in n variables of degree <= d, in graded order.
std::vector<Monomial> monomials_up_to(int nvars, int d);

std::string mono_to_string(const Monomial& m, const std::vector<std::string>& names = {});

}  // namespace polyopt
