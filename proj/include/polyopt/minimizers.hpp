#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "polyopt/decompose.hpp"

namespace polyopt {

// Recovered minimizer points with weights of the representing measure.
struct MinimizerSet {
  std::vector<std::vector<double>> points;  // sorted lexicographically
  std::vector<double> weights;              // positive, summing to ~1
  std::vector<double> f_values;             // f at each point
  double f_star = 0.0;

  int size() const { return static_cast<int>(points.size()); }
};

// Matrices of multiplication by x_k on span(B'): column j holds the
// coordinates of x_k * b_j, entry (i,j) = <x_k b_j, b_i> / <b_i, b_i>.
std::vector<Eigen::MatrixXd> multiplication_matrices(const DecompositionResult& d,
                                                     const MomentSequence& L);

struct ExtractOptions {
  std::uint64_t seed = 12345;
  int max_retries = 5;
  double cluster_tol = 1e-8;   // relative eigenvalue separation per retry
  double imag_tol = 1e-6;      // tolerated imaginary part
  double residual_tol = 1e-6;  // ||M_k u - xi u|| <= tol ||u||
  double merge_tol = 1e-6;     // inf-norm point merge distance
};

// Simultaneous diagonalization through a random unit-sphere combination of
// the multiplication matrices; coordinates by Rayleigh quotients, weights by
// least squares on the basis evaluations. Throws NonGenericCombination after
// exhausting retries and ComplexEigenvalue on genuinely complex spectra.
MinimizerSet extract_points(const std::vector<Eigen::MatrixXd>& M, const MomentSequence& L,
                            const DecompositionResult& d, const Polynomial& f,
                            const ExtractOptions& opts = {});

}  // namespace polyopt
