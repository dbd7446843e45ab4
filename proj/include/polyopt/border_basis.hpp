#pragma once

#include <map>
#include <memory>
#include <vector>

#include "polyopt/polynomial.hpp"

namespace polyopt {

struct BorderBasisOptions {
  // A reduced row is treated as zero when its max |coeff| falls below this
  // fraction of the row scale at the current degree.
  double pivot_tol = 1e-9;
  // Relative singular value cut for the direct-sum rank checks.
  double check_tol = 1e-7;
  bool run_check = true;
};

// Graded border basis of an equality ideal truncated at `degree` (= 2t):
// a monomial set B connected to 1 together with a rewrite family F, one
// element per border monomial, normalized monic on its leading monomial.
// Every monomial of degree <= 2t is either in B or carries a rewrite rule
// with support in B, so the projection onto <B> along the ideal span is a
// table lookup.
class BorderBasis {
 public:
  int nvars() const { return nvars_; }
  int degree() const { return degree_; }

  const std::vector<Monomial>& basis() const { return basis_; }
  std::vector<Monomial> basis_up_to(int d) const;
  bool in_basis(const Monomial& m) const { return basis_index_.count(m) > 0; }

  const std::vector<Polynomial>& family() const { return family_; }
  const Monomial& leading(int k) const { return leading_[static_cast<size_t>(k)]; }
  // Index into family() for a border monomial, -1 if not a leading monomial.
  int family_index_of(const Monomial& m) const;

  // Border monomials of degree <= `degree` (boundary of B intersected with R_2t).
  std::vector<Monomial> border() const;

  // Normal form pi_{B,F}: projection onto <B>. Throws DegreeTooSmall when
  // deg(p) exceeds the truncation degree.
  Polynomial reduce(const Polynomial& p) const;
  Polynomial reduce(const Monomial& m) const;

 private:
  int nvars_ = 0;
  int degree_ = 0;
  std::vector<Monomial> basis_;
  std::map<Monomial, int, GradedLess> basis_index_;
  // Rewrite rule tail for every non-basis monomial of degree <= degree_.
  std::map<Monomial, Polynomial, GradedLess> rules_;
  std::vector<Polynomial> family_;
  std::vector<Monomial> leading_;
  std::map<Monomial, int, GradedLess> leading_index_;

  friend BorderBasis compute_border_basis(int, const std::vector<Polynomial>&, int,
                                          const BorderBasisOptions&);
  friend struct BorderBasisCheckAccess;
};

// Degree-by-degree prolongation-projection with a numerically tolerant choice
// function. Throws DegreeTooSmall if an equality exceeds `degree`, and
// NumericalBreakdown when no admissible pivot rises above the tolerance.
BorderBasis compute_border_basis(int nvars, const std::vector<Polynomial>& equalities, int degree,
                                 const BorderBasisOptions& opts = {});

inline Polynomial normal_form(const Polynomial& p, const BorderBasis& bb) { return bb.reduce(p); }

struct BorderBasisCheck {
  bool ok = true;
  std::vector<std::string> violations;
};

// Verifies the defining conditions: B connected to 1, support/leading-monomial
// structure of F, injectivity of the leading map, border coverage, and the
// degreewise direct sum R_d = <B>_d (+) <F|d> via numerical rank.
BorderBasisCheck check_border_basis(const BorderBasis& bb, double tol = 1e-7);

}  // namespace polyopt
