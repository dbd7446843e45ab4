#pragma once

#include <memory>
#include <utility>
#include <vector>

#include "polyopt/border_basis.hpp"
#include "polyopt/polynomial.hpp"
#include "polyopt/sdp.hpp"

namespace polyopt {

// Affine combination c0 + sum_a coeff_a * lambda_a of moment variables.
struct MomentCombo {
  double c0 = 0.0;
  std::vector<std::pair<int, double>> terms;  // sorted by moment id
};

// Moment SDP at order t over the monomial basis B_t: a symmetric moment block
// whose (i,j) entry is the reduction of b_i*b_j, one localizing block per
// inequality, optional explicit equality rows, and the unit normalization
// folded into the affine constants. Distinct reduced monomials share a moment
// id, which encodes the Hankel structure.
class MomentRelaxation {
 public:
  std::shared_ptr<const BorderBasis> bb;
  int t = 0;
  int nvars = 0;

  std::vector<Monomial> basis;                      // B_t
  std::vector<Monomial> moments;                    // id -> monomial (1 excluded)
  std::map<Monomial, int, GradedLess> moment_id;

  std::vector<MomentCombo> moment_block;            // s x s, row-major

  struct Localizer {
    Polynomial g;                                   // reduced inequality
    std::vector<Monomial> basis;                    // B_{t-w}
    std::vector<MomentCombo> entries;               // square, row-major
  };
  std::vector<Localizer> localizers;

  std::vector<MomentCombo> equality_rows;           // rows that must vanish
  MomentCombo objective;

  int p() const { return static_cast<int>(moments.size()); }
  int s() const { return static_cast<int>(basis.size()); }

  const MomentCombo& moment_entry(int i, int j) const {
    return moment_block[static_cast<size_t>(i) * basis.size() + static_cast<size_t>(j)];
  }
};

// Border-basis relaxation: bb must have degree 2t; products, the objective and
// the localizing entries are reduced through the border basis before moment
// ids are assigned. Equalities are absorbed by the reduction, so no explicit
// rows are emitted.
MomentRelaxation build_relaxation(const Polynomial& f, std::shared_ptr<const BorderBasis> bb,
                                  const std::vector<Polynomial>& inequalities, int t);

// Full moment-matrix relaxation: basis = all monomials of degree <= t and one
// explicit equality row per x^alpha * g0 with |alpha| <= 2t - deg(g0).
MomentRelaxation build_full_relaxation(const Polynomial& f,
                                       const std::vector<Polynomial>& equalities,
                                       const std::vector<Polynomial>& inequalities, int t);

// Partial derivatives of f (zero entries included; callers drop them).
std::vector<Polynomial> gradient_ideal_constraints(const Polynomial& f);

// For every subset nu of the inequality indices with |nu| <= n - n1, the
// determinant of the gradient Gram matrix [grad f, grad g0_*, grad g+_nu]
// times the product of the inactive inequalities.
std::vector<Polynomial> regular_case_constraints(const Polynomial& f, const ConstraintSet& cs);
Polynomial regular_case_constraint_for_subset(const Polynomial& f, const ConstraintSet& cs,
                                              const std::vector<int>& nu);

// All 2^k - 1 nonempty products of the inequalities. Guarded at k <= 12.
std::vector<Polynomial> preordering_inequalities(const std::vector<Polynomial>& inequalities);

// Conversion to the generic block-affine SDP form.
sdp::Problem to_sdp(const MomentRelaxation& rel);

// Solution of a moment relaxation with the moments keyed by monomial.
struct SdpSolution {
  sdp::Status status = sdp::Status::SlowProgress;
  double f_mu = 0.0;     // primal (moment) objective
  double dual_obj = 0.0; // SOS-side bound
  double gap = 0.0;
  int iterations = 0;
  std::map<Monomial, double, GradedLess> moments;  // includes 1 -> 1
  Eigen::MatrixXd moment_matrix;
  std::vector<Eigen::MatrixXd> block_values;
};

SdpSolution solve_relaxation(const MomentRelaxation& rel, const sdp::Options& opts = {});
SdpSolution make_relaxation_solution(const MomentRelaxation& rel, const sdp::Solution& sol);
void export_relaxation_sdpa(const MomentRelaxation& rel, const std::string& path);
SdpSolution import_relaxation_solution(const MomentRelaxation& rel, const std::string& path);

}  // namespace polyopt
