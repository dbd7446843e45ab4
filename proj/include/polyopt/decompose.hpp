#pragma once

#include <map>
#include <memory>
#include <vector>

#include "polyopt/border_basis.hpp"
#include "polyopt/polynomial.hpp"
#include "polyopt/relaxation.hpp"

namespace polyopt {

// A linear form given by its moments on the basis monomials of degree <= 2t;
// any polynomial of degree <= 2t is evaluable through the border-basis normal
// form, and <p,q> = L(pq) is the induced inner product.
class MomentSequence {
 public:
  MomentSequence(std::shared_ptr<const BorderBasis> bb, int t,
                 std::map<Monomial, double, GradedLess> values);

  static MomentSequence from_solution(const MomentRelaxation& rel, const SdpSolution& sol);
  // Moments of sum_i w_i ev_{xi_i} up to degree 2t (no equality ideal).
  static MomentSequence from_measure(int nvars, int t,
                                     const std::vector<std::vector<double>>& points,
                                     const std::vector<double>& weights);

  int t() const { return t_; }
  int nvars() const { return bb_->nvars(); }
  const BorderBasis& bb() const { return *bb_; }
  std::shared_ptr<const BorderBasis> bb_ptr() const { return bb_; }

  double value(const Monomial& m) const;         // L(m), reduces first
  double eval(const Polynomial& p) const;        // L(p)
  // <p,q> = L(pq); throws DegreeTooSmall when deg p + deg q > 2t.
  double inner(const Polynomial& p, const Polynomial& q) const;

 private:
  std::shared_ptr<const BorderBasis> bb_;
  int t_;
  std::map<Monomial, double, GradedLess> values_;
};

enum class DecomposeStatus { Success, Failed };

struct DecomposeOptions {
  double rank_tol = 1e-6;
};

// Output of the flat-extension loop: an orthogonal polynomial basis B' with
// b_1 = 1, the positive squared norms L(b_i^2), and on success the kernel
// relations x_k b_j - sum_i <x_k b_j, b_i>/<b_i,b_i> b_i spanning the
// minimizer ideal, normalized monic on their leading monomial.
struct DecompositionResult {
  DecomposeStatus status = DecomposeStatus::Failed;
  std::vector<Polynomial> basis;
  std::vector<double> norms;
  std::vector<Polynomial> relations;
  int rank() const { return static_cast<int>(basis.size()); }
};

// Incremental orthogonal-basis construction with pivoted Gram extraction.
// Returns Failed when the next prolongation needs moments beyond degree 2t;
// throws NumericalBreakdown when a squared norm is negative beyond tolerance.
DecompositionResult decompose(const MomentSequence& L, const DecomposeOptions& opts = {});

struct DecompositionCheck {
  bool ok = true;
  std::vector<std::string> violations;
};

// Verifies the output the way a border-basis check would: orthogonality of
// B', kernel membership of the relations, and the span identity
// <B'> (+) <relations> = <B'+>.
DecompositionCheck check_decomposition(const DecompositionResult& d, const MomentSequence& L,
                                       double tol = 1e-6);

}  // namespace polyopt
