#pragma once

#include <map>
#include <string>
#include <vector>

#include "polyopt/monomial.hpp"

namespace polyopt {

// Sparse multivariate polynomial with double coefficients, terms kept in
// graded monomial order. Coefficients that fall below a relative drop
// threshold after arithmetic are removed, so supp(p) is exactly the key set.
class Polynomial {
 public:
  using TermMap = std::map<Monomial, double, GradedLess>;

  // Relative coefficient drop threshold applied after add/sub/mul.
  static constexpr double kDropRel = 1e-12;

  Polynomial() : nvars_(0) {}
  explicit Polynomial(int nvars) : nvars_(nvars) {}

  static Polynomial constant(int nvars, double c);
  static Polynomial variable(int nvars, int var);
  static Polynomial monomial(const Monomial& m, double c = 1.0);

  int nvars() const { return nvars_; }
  bool is_zero() const { return terms_.empty(); }
  int degree() const;  // 0 for the zero polynomial
  int term_count() const { return static_cast<int>(terms_.size()); }
  const TermMap& terms() const { return terms_; }

  double coeff(const Monomial& m) const;
  double max_abs_coeff() const;
  // Largest monomial in the graded order; polynomial must be nonzero.
  const Monomial& leading_monomial() const;

  // Adds c*m without pruning; used by builders.
  void add_term(const Monomial& m, double c);

  Polynomial operator-() const;
  Polynomial operator+(const Polynomial& q) const;
  Polynomial operator-(const Polynomial& q) const;
  Polynomial operator*(const Polynomial& q) const;
  Polynomial operator*(double s) const;
  Polynomial& operator+=(const Polynomial& q) { return *this = *this + q; }
  Polynomial& operator-=(const Polynomial& q) { return *this = *this - q; }

  Polynomial differentiate(int var) const;
  double evaluate(const std::vector<double>& point) const;

  // Removes coefficients with |c| < kDropRel * scale (and exact zeros).
  void prune(double scale);

  bool operator==(const Polynomial& o) const { return nvars_ == o.nvars_ && terms_ == o.terms_; }

  std::string to_string(const std::vector<std::string>& names = {}) const;

 private:
  int nvars_;
  TermMap terms_;
};

inline Polynomial operator*(double s, const Polynomial& p) { return p * s; }

struct ConstraintSet {
  std::vector<Polynomial> equalities;    // g^0_i = 0
  std::vector<Polynomial> inequalities;  // g^+_j >= 0

  bool empty() const { return equalities.empty() && inequalities.empty(); }
};

}  // namespace polyopt
