#include "polyopt/minimizers.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "polyopt/errors.hpp"

namespace polyopt {

std::vector<Eigen::MatrixXd> multiplication_matrices(const DecompositionResult& d,
                                                     const MomentSequence& L) {
  const int n = L.nvars();
  const int r = d.rank();
  std::vector<Eigen::MatrixXd> M(static_cast<size_t>(n), Eigen::MatrixXd::Zero(r, r));
  for (int k = 0; k < n; ++k)
    for (int j = 0; j < r; ++j) {
      Polynomial xb = d.basis[static_cast<size_t>(j)] * Polynomial::variable(n, k);
      for (int i = 0; i < r; ++i)
        M[static_cast<size_t>(k)](i, j) =
            L.inner(xb, d.basis[static_cast<size_t>(i)]) / d.norms[static_cast<size_t>(i)];
    }
  return M;
}

MinimizerSet extract_points(const std::vector<Eigen::MatrixXd>& M, const MomentSequence& L,
                            const DecompositionResult& d, const Polynomial& f,
                            const ExtractOptions& opts) {
  const int n = static_cast<int>(M.size());
  const int r = d.rank();
  std::mt19937_64 rng(opts.seed);
  std::normal_distribution<double> gauss(0.0, 1.0);

  std::vector<std::vector<double>> raw_points;
  std::string last_err;
  bool ok = false;
  for (int attempt = 0; attempt < opts.max_retries && !ok; ++attempt) {
    // Random direction on the unit sphere.
    Eigen::VectorXd l(n);
    do {
      for (int k = 0; k < n; ++k) l(k) = gauss(rng);
    } while (l.norm() < 1e-8);
    l.normalize();

    Eigen::MatrixXd C = Eigen::MatrixXd::Zero(r, r);
    for (int k = 0; k < n; ++k) C += l(k) * M[static_cast<size_t>(k)];

    Eigen::EigenSolver<Eigen::MatrixXd> es(C);
    if (es.info() != Eigen::Success) {
      last_err = "eigen decomposition failed";
      continue;
    }
    Eigen::VectorXcd ev = es.eigenvalues();
    double spread = 0.0;
    for (int i = 0; i < r; ++i) spread = std::max(spread, std::abs(ev(i)));
    double max_imag = 0.0;
    for (int i = 0; i < r; ++i) max_imag = std::max(max_imag, std::abs(ev(i).imag()));
    if (max_imag > opts.imag_tol * std::max(1.0, spread))
      throw ComplexEigenvalue("combined multiplication matrix has complex eigenvalues (imag " +
                              std::to_string(max_imag) + ")");
    bool clustered = false;
    for (int i = 0; i < r && !clustered; ++i)
      for (int j = i + 1; j < r; ++j)
        if (std::abs(ev(i) - ev(j)) < opts.cluster_tol * std::max(1.0, spread)) {
          clustered = true;
          break;
        }
    if (clustered) {
      last_err = "eigenvalue cluster for this combination";
      continue;
    }

    raw_points.clear();
    bool residual_ok = true;
    for (int i = 0; i < r && residual_ok; ++i) {
      Eigen::VectorXd u = es.eigenvectors().col(i).real();
      double unorm2 = u.squaredNorm();
      if (unorm2 < 1e-20) {
        residual_ok = false;
        break;
      }
      std::vector<double> xi(static_cast<size_t>(n));
      for (int k = 0; k < n; ++k) {
        double val = u.dot(M[static_cast<size_t>(k)] * u) / unorm2;
        xi[static_cast<size_t>(k)] = val;
        double resid = (M[static_cast<size_t>(k)] * u - val * u).norm();
        if (resid > opts.residual_tol * std::sqrt(unorm2) * std::max(1.0, spread)) {
          residual_ok = false;
          break;
        }
      }
      raw_points.push_back(std::move(xi));
    }
    if (!residual_ok) {
      last_err = "eigenvector residual too large";
      continue;
    }
    ok = true;
  }
  if (!ok) throw NonGenericCombination("no generic combination found: " + last_err);

  // Merge numerical twins.
  std::vector<std::vector<double>> pts;
  std::vector<int> mult;
  for (const auto& q : raw_points) {
    bool merged = false;
    for (size_t i = 0; i < pts.size() && !merged; ++i) {
      double dist = 0.0;
      for (int k = 0; k < n; ++k) dist = std::max(dist, std::abs(pts[i][static_cast<size_t>(k)] -
                                                                 q[static_cast<size_t>(k)]));
      if (dist <= opts.merge_tol) {
        for (int k = 0; k < n; ++k)
          pts[i][static_cast<size_t>(k)] =
              (pts[i][static_cast<size_t>(k)] * mult[i] + q[static_cast<size_t>(k)]) / (mult[i] + 1);
        ++mult[i];
        merged = true;
      }
    }
    if (!merged) {
      pts.push_back(q);
      mult.push_back(1);
    }
  }
  std::sort(pts.begin(), pts.end());

  // Weights from L(b_j) = sum_i w_i b_j(xi_i), least squares.
  const int np = static_cast<int>(pts.size());
  Eigen::MatrixXd A(r, np);
  Eigen::VectorXd rhs(r);
  for (int j = 0; j < r; ++j) {
    rhs(j) = L.eval(d.basis[static_cast<size_t>(j)]);
    for (int i = 0; i < np; ++i)
      A(j, i) = d.basis[static_cast<size_t>(j)].evaluate(pts[static_cast<size_t>(i)]);
  }
  Eigen::VectorXd w = A.colPivHouseholderQr().solve(rhs);
  for (int i = 0; i < np; ++i)
    if (w(i) < -1e-6)
      throw NumericalBreakdown("recovered weight " + std::to_string(w(i)) + " is negative");

  MinimizerSet out;
  out.points = pts;
  out.weights.assign(w.data(), w.data() + np);
  for (const auto& p : out.points) out.f_values.push_back(f.evaluate(p));
  out.f_star = L.eval(L.bb().reduce(f));
  return out;
}

}  // namespace polyopt
