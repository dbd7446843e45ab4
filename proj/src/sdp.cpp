#include "polyopt/sdp.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "polyopt/errors.hpp"

namespace polyopt::sdp {

namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;
using MatrixXld = Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic>;
using VectorXld = Eigen::Matrix<long double, Eigen::Dynamic, 1>;

// Log-det barrier method over the shifted cone S_b(x) + shift*I >= 0.
//
// The moment relaxations this solver exists for typically have *no* strictly
// feasible point (the reduction ties pin the moment matrix to a variety), so
// the cone is opened by a small shift and the reported objective carries the
// first-order correction shift*tr(Y). A pure primal path-following method is
// used: each stage centers exactly at its mu with damped Newton steps, so the
// iterate tracks the central path and converges to the analytic center of the
// optimal face -- the max-rank linear form the downstream rank decisions
// need. Extended precision keeps the Newton systems meaningful down to the
// target complementarity; in plain doubles their conditioning (~1/mu^2)
// swallows both the dual residual and the face-centering curvature.
struct Barrier {
  const Problem& p;
  const Options& opts;
  long double shift;
  int nb = 0;
  int ntot = 0;
  double data_norm = 1.0, c_norm = 1.0;
  int newton_budget;

  std::vector<MatrixXld> F0ld;
  VectorXld cld;

  Barrier(const Problem& prob, const Options& o, double shift_)
      : p(prob), opts(o), shift(shift_) {
    nb = static_cast<int>(p.blocks.size());
    for (const auto& b : p.blocks) {
      ntot += b.size;
      F0ld.push_back(b.F0.cast<long double>());
      if (b.size > 0) data_norm = std::max(data_norm, b.F0.cwiseAbs().maxCoeff());
      for (const auto& tri : b.coeff)
        for (const auto& t : tri) data_norm = std::max(data_norm, std::abs(t.v));
    }
    cld = p.c.cast<long double>();
    c_norm = p.nvar > 0 ? std::max(1.0, p.c.cwiseAbs().maxCoeff()) : 1.0;
    newton_budget = std::max(opts.max_iter, 50) * 4;
  }

  long double sparse_dot(const std::vector<Triplet>& tri, const MatrixXld& M) const {
    long double acc = 0.0L;
    for (const auto& t : tri)
      acc += (t.i == t.j ? 1.0L : 2.0L) * static_cast<long double>(t.v) * M(t.i, t.j);
    return acc;
  }

  std::vector<MatrixXld> slack(const VectorXld& x) const {
    std::vector<MatrixXld> S;
    S.reserve(static_cast<size_t>(nb));
    for (int b = 0; b < nb; ++b) {
      const Block& blk = p.blocks[static_cast<size_t>(b)];
      MatrixXld M = -F0ld[static_cast<size_t>(b)];
      M.diagonal().array() += shift;
      for (int i = 0; i < p.nvar; ++i)
        for (const auto& t : blk.coeff[static_cast<size_t>(i)]) {
          M(t.i, t.j) += x(i) * t.v;
          if (t.i != t.j) M(t.j, t.i) += x(i) * t.v;
        }
      S.push_back(std::move(M));
    }
    return S;
  }

  struct CenterResult {
    long double dec2 = std::numeric_limits<long double>::infinity();
    long double gnorm = std::numeric_limits<long double>::infinity();
    bool converged = false;
  };

  // Damped Newton at fixed mu until the normalized decrement certifies the
  // quadratic zone, then polished so the dual estimate mu*S^{-1} is feasible
  // to near working precision. Exits when the decrement hits its numerical
  // floor.
  CenterResult center(VectorXld& x, long double mu, int max_newton) {
    CenterResult res;
    long double best_dec2 = std::numeric_limits<long double>::infinity();
    VectorXld best_x = x;
    long double best_gnorm = std::numeric_limits<long double>::infinity();
    int no_improve = 0;
    for (int it = 0; it < max_newton && newton_budget > 0; ++it, --newton_budget) {
      std::vector<MatrixXld> S = slack(x);
      std::vector<MatrixXld> Sinv(static_cast<size_t>(nb));
      bool psd_ok = true;
      for (int b = 0; b < nb && psd_ok; ++b) {
        Eigen::LLT<MatrixXld> llt(S[static_cast<size_t>(b)]);
        if (llt.info() != Eigen::Success) {
          psd_ok = false;  // should not happen
          break;
        }
        Sinv[static_cast<size_t>(b)] =
            llt.solve(MatrixXld::Identity(S[static_cast<size_t>(b)].rows(),
                                          S[static_cast<size_t>(b)].rows()));
      }
      if (!psd_ok) break;
      VectorXld g(p.nvar);
      for (int i = 0; i < p.nvar; ++i) {
        long double acc = 0.0L;
        for (int b = 0; b < nb; ++b)
          acc += sparse_dot(p.blocks[static_cast<size_t>(b)].coeff[static_cast<size_t>(i)],
                            Sinv[static_cast<size_t>(b)]);
        g(i) = cld(i) - mu * acc;
      }
      res.gnorm = g.cwiseAbs().maxCoeff();

      MatrixXld H = MatrixXld::Zero(p.nvar, p.nvar);
      for (int b = 0; b < nb; ++b) {
        const Block& blk = p.blocks[static_cast<size_t>(b)];
        for (int i = 0; i < p.nvar; ++i) {
          if (blk.coeff[static_cast<size_t>(i)].empty()) continue;
          MatrixXld Fi = MatrixXld::Zero(blk.size, blk.size);
          for (const auto& t : blk.coeff[static_cast<size_t>(i)]) {
            Fi(t.i, t.j) = t.v;
            Fi(t.j, t.i) = t.v;
          }
          MatrixXld T = Sinv[static_cast<size_t>(b)] * Fi * Sinv[static_cast<size_t>(b)];
          for (int j = i; j < p.nvar; ++j) {
            long double v = mu * sparse_dot(blk.coeff[static_cast<size_t>(j)], T);
            H(i, j) += v;
            if (i != j) H(j, i) += v;
          }
        }
      }

      // Truncated spectral solve: directions the Hessian does not determine
      // at working precision are frozen instead of amplified.
      Eigen::SelfAdjointEigenSolver<MatrixXld> es(H);
      const VectorXld& ev = es.eigenvalues();
      long double cut = 1e-17L * std::max(ev.cwiseAbs().maxCoeff(), 1e-300L);
      VectorXld z = es.eigenvectors().transpose() * (-g);
      for (Eigen::Index k = 0; k < z.size(); ++k) z(k) = ev(k) > cut ? z(k) / ev(k) : 0.0L;
      VectorXld dx = es.eigenvectors() * z;
      res.dec2 = -g.dot(dx);
      if (res.dec2 <= mu / 16.0L) res.converged = true;
      // The floor detection and best-iterate bookkeeping only make sense in
      // the polish phase; during damping the gradient is not monotone.
      if (res.converged) {
        bool improving = res.dec2 < best_dec2 * 0.5L || res.gnorm < best_gnorm * 0.5L;
        best_dec2 = std::min(best_dec2, res.dec2);
        if (res.gnorm < best_gnorm) {
          best_gnorm = res.gnorm;
          best_x = x;
        }
        if (improving)
          no_improve = 0;
        else if (++no_improve >= 3)
          break;
      }
      if (!(res.dec2 > 0.0L) || res.dec2 <= 1e-16L * mu) break;

      // Self-concordant damped step; no merit comparison needed, and the
      // fraction-to-boundary cap guards against rounding.
      long double lambda_sc = std::sqrt(static_cast<double>(res.dec2 / mu));
      long double alpha = lambda_sc <= 0.25L ? 1.0L : 1.0L / (1.0L + lambda_sc);
      for (int b = 0; b < nb; ++b) {
        const Block& blk = p.blocks[static_cast<size_t>(b)];
        MatrixXld D = MatrixXld::Zero(blk.size, blk.size);
        for (int i = 0; i < p.nvar; ++i)
          for (const auto& t : blk.coeff[static_cast<size_t>(i)]) {
            D(t.i, t.j) += dx(i) * t.v;
            if (t.i != t.j) D(t.j, t.i) += dx(i) * t.v;
          }
        Eigen::LLT<MatrixXld> llt(S[static_cast<size_t>(b)]);
        MatrixXld L = llt.matrixL();
        MatrixXld A = L.template triangularView<Eigen::Lower>().solve(D);
        A = L.template triangularView<Eigen::Lower>().solve(A.transpose()).transpose();
        Eigen::SelfAdjointEigenSolver<MatrixXld> esA(((A + A.transpose()) * 0.5L).eval(),
                                                     Eigen::EigenvaluesOnly);
        long double lmin = esA.eigenvalues().minCoeff();
        if (lmin < -1e-18L) alpha = std::min(alpha, -0.95L / lmin);
      }
      if (!(alpha > 1e-16L)) break;
      x += alpha * dx;
    }
    // Hand back the iterate with the smallest gradient seen in this stage.
    if (best_gnorm < res.gnorm) {
      x = best_x;
      res.gnorm = best_gnorm;
    }
    return res;
  }

  // Runs the mu schedule from a strictly feasible x. stop_below: optional
  // early exit once the objective dips under the given threshold (phase 1).
  Solution run(VectorXld x, long double mu0, const double* stop_below) {
    Solution sol;
    long double mu = mu0;
    long double gnorm = std::numeric_limits<long double>::infinity();
    int iter = 0;
    while (true) {
      ++iter;
      CenterResult cr = center(x, mu, 100);
      gnorm = cr.gnorm;
      long double pobj = cld.dot(x);
      if (opts.verbose)
        std::fprintf(stderr, "stage %2d mu %.3Le pobj %.12Le dec2 %.2Le gnorm %.2Le budget %d\n",
                     iter, mu, pobj, cr.dec2, cr.gnorm, newton_budget);
      if (stop_below && pobj < static_cast<long double>(*stop_below)) break;
      if (pobj < -1e12L * (1.0L + data_norm + c_norm)) {
        sol.status = Status::Unbounded;
        break;
      }
      // Complementarity of the dual estimate is mu*ntot; stop once it is
      // comfortably inside the gap tolerance.
      long double target = 0.1L * static_cast<long double>(opts.gap_tol) *
                           (1.0L + std::abs(static_cast<double>(pobj))) / std::max(1, ntot);
      if (mu <= target || newton_budget <= 0) break;
      // Only descend after centering; otherwise grind at the same mu.
      if (cr.converged) mu = std::max(mu * 0.2L, 0.9L * target);
    }

    sol.iterations = iter;
    sol.x = x.cast<double>();
    std::vector<MatrixXld> S = slack(x);
    std::vector<MatrixXld> Y(static_cast<size_t>(nb));
    long double min_eig = 0.0L;
    long double trY = 0.0L;
    for (int b = 0; b < nb; ++b) {
      MatrixXld Sinv = S[static_cast<size_t>(b)].llt().solve(
          MatrixXld::Identity(S[static_cast<size_t>(b)].rows(), S[static_cast<size_t>(b)].rows()));
      MatrixXld Yb = mu * Sinv;
      Y[static_cast<size_t>(b)] = 0.5L * (Yb + Yb.transpose());
      trY += Yb.trace();
    }

    // Constrained dual refinement: shift Y into exact dual feasibility
    // without touching the complementarity <X, Y> (the residual that the
    // stage polish cannot always clear lies along stiff directions the
    // Frobenius projection handles directly).
    if (p.nvar > 0) {
      VectorXld g(p.nvar), a(p.nvar);
      for (int i = 0; i < p.nvar; ++i) {
        long double acc = 0.0L, accx = 0.0L;
        for (int b = 0; b < nb; ++b) {
          acc += sparse_dot(p.blocks[static_cast<size_t>(b)].coeff[static_cast<size_t>(i)],
                            Y[static_cast<size_t>(b)]);
          accx += sparse_dot(p.blocks[static_cast<size_t>(b)].coeff[static_cast<size_t>(i)],
                             S[static_cast<size_t>(b)]);
        }
        g(i) = cld(i) - acc;
        a(i) = accx;
      }
      MatrixXld M = MatrixXld::Zero(p.nvar + 1, p.nvar + 1);
      long double xx = 0.0L;
      for (int b = 0; b < nb; ++b) {
        const Block& blk = p.blocks[static_cast<size_t>(b)];
        for (int i = 0; i < p.nvar; ++i) {
          if (blk.coeff[static_cast<size_t>(i)].empty()) continue;
          MatrixXld Fi = MatrixXld::Zero(blk.size, blk.size);
          for (const auto& t : blk.coeff[static_cast<size_t>(i)]) {
            Fi(t.i, t.j) = t.v;
            Fi(t.j, t.i) = t.v;
          }
          for (int j = i; j < p.nvar; ++j) {
            long double v = sparse_dot(blk.coeff[static_cast<size_t>(j)], Fi);
            M(i, j) += v;
            if (i != j) M(j, i) += v;
          }
        }
        xx += (S[static_cast<size_t>(b)].cwiseProduct(S[static_cast<size_t>(b)])).sum();
      }
      M.col(p.nvar).head(p.nvar) = a;
      M.row(p.nvar).head(p.nvar) = a.transpose();
      M(p.nvar, p.nvar) = xx;
      Eigen::SelfAdjointEigenSolver<MatrixXld> esM(M);
      const VectorXld& evM = esM.eigenvalues();
      long double cutM = 1e-15L * std::max(evM.cwiseAbs().maxCoeff(), 1e-300L);
      auto msolve = [&](const VectorXld& r) {
        VectorXld z = esM.eigenvectors().transpose() * r;
        for (Eigen::Index k = 0; k < z.size(); ++k) z(k) = evM(k) > cutM ? z(k) / evM(k) : 0.0L;
        return VectorXld(esM.eigenvectors() * z);
      };
      for (int pass = 0; pass < 3; ++pass) {
        VectorXld rhs2 = VectorXld::Zero(p.nvar + 1);
        rhs2.head(p.nvar) = g;
        VectorXld zeta = msolve(rhs2);
        if (!zeta.allFinite()) break;
        for (int b = 0; b < nb; ++b) {
          MatrixXld D = zeta(p.nvar) * S[static_cast<size_t>(b)];
          for (int i = 0; i < p.nvar; ++i)
            for (const auto& t : p.blocks[static_cast<size_t>(b)].coeff[static_cast<size_t>(i)]) {
              D(t.i, t.j) += zeta(i) * t.v;
              if (t.i != t.j) D(t.j, t.i) += zeta(i) * t.v;
            }
          Y[static_cast<size_t>(b)] += D;
        }
        for (int i = 0; i < p.nvar; ++i) {
          long double acc = 0.0L;
          for (int b = 0; b < nb; ++b)
            acc += sparse_dot(p.blocks[static_cast<size_t>(b)].coeff[static_cast<size_t>(i)],
                              Y[static_cast<size_t>(b)]);
          g(i) = cld(i) - acc;
        }
        if (g.cwiseAbs().maxCoeff() < 1e-13L * (1.0L + c_norm)) break;
      }
    }

    long double dobj = 0.0L;
    long double gnorm_ref = 0.0L;
    for (int i = 0; i < p.nvar; ++i) {
      long double acc = 0.0L;
      for (int b = 0; b < nb; ++b)
        acc += sparse_dot(p.blocks[static_cast<size_t>(b)].coeff[static_cast<size_t>(i)],
                          Y[static_cast<size_t>(b)]);
      gnorm_ref = std::max(gnorm_ref, std::abs(cld(i) - acc));
    }
    gnorm = std::min(gnorm, gnorm_ref);
    for (int b = 0; b < nb; ++b) {
      dobj += (F0ld[static_cast<size_t>(b)].cwiseProduct(Y[static_cast<size_t>(b)])).sum();
      MatrixXld Xb = S[static_cast<size_t>(b)];
      Xb.diagonal().array() -= shift;  // report the unshifted slack
      sol.X.push_back(Xb.cast<double>());
      sol.Y.push_back(Y[static_cast<size_t>(b)].cast<double>());
      if (Xb.size() > 0) {
        Eigen::SelfAdjointEigenSolver<MatrixXld> esX(Xb, Eigen::EigenvaluesOnly);
        min_eig = std::min(min_eig, esX.eigenvalues().minCoeff());
      }
    }
    // First-order correction of the cone opening: the shifted optimum sits
    // shift*tr(Y*) below the true one.
    sol.primal_obj = static_cast<double>(cld.dot(x) + shift * trY) + p.offset;
    sol.dual_obj = static_cast<double>(dobj) + p.offset;
    // Normalized complementarity of the returned pair (mu * ntot on the
    // shifted cone).
    sol.gap = static_cast<double>(mu) * ntot /
              (1.0 + std::abs(sol.primal_obj) + std::abs(sol.dual_obj));
    // Feasibility is certified relative to the declared cone opening.
    sol.best_pinf = static_cast<double>(std::max(0.0L, -min_eig - shift)) / (1.0 + data_norm);
    sol.best_dinf = static_cast<double>(gnorm) / (1.0 + c_norm);
    if (sol.status != Status::Unbounded)
      sol.status = (sol.gap <= opts.gap_tol && sol.best_pinf <= opts.feas_tol &&
                    sol.best_dinf <= opts.feas_tol)
                       ? Status::Optimal
                       : Status::SlowProgress;
    return sol;
  }
};

Solution solve_no_equalities(const Problem& p, const Options& opts) {
  Solution sol;
  if (p.nvar == 0) {
    // Nothing to optimize; report feasibility of the fixed point.
    sol.x = VectorXd();
    sol.primal_obj = p.offset;
    sol.dual_obj = p.offset;
    sol.gap = 0.0;
    sol.status = Status::Optimal;
    for (size_t b = 0; b < p.blocks.size(); ++b) {
      MatrixXd S = -p.blocks[b].F0;
      sol.X.push_back(S);
      sol.Y.push_back(MatrixXd::Zero(S.rows(), S.cols()));
      if (S.size() > 0) {
        Eigen::SelfAdjointEigenSolver<MatrixXd> es(S, Eigen::EigenvaluesOnly);
        if (es.eigenvalues().minCoeff() < -opts.feas_tol) sol.status = Status::Infeasible;
      }
    }
    return sol;
  }

  const double eps = std::max(opts.shift, 1e-12);

  // Shortcut for a strictly feasible start: when the identity (per block) is
  // in the span of the F_i, a feasible direction is available algebraically
  // and phase 1 can be skipped. This also covers the phase-1 pathology where
  // its objective is unbounded along matrix-null directions.
  {
    int symdim = 0;
    for (const auto& b : p.blocks) symdim += b.size * (b.size + 1) / 2;
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(symdim, p.nvar);
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(symdim);
    int row = 0;
    for (const Block& b : p.blocks) {
      std::vector<std::vector<int>> rowidx(static_cast<size_t>(b.size),
                                           std::vector<int>(static_cast<size_t>(b.size), -1));
      for (int r = 0; r < b.size; ++r)
        for (int c2 = r; c2 < b.size; ++c2) {
          rowidx[static_cast<size_t>(r)][static_cast<size_t>(c2)] = row;
          rhs(row) = (r == c2) ? 1.0 : 0.0;
          ++row;
        }
      for (int i = 0; i < p.nvar; ++i)
        for (const auto& t : b.coeff[static_cast<size_t>(i)])
          A(rowidx[static_cast<size_t>(t.i)][static_cast<size_t>(t.j)], i) = t.v;
    }
    Eigen::VectorXd w = A.colPivHouseholderQr().solve(rhs);
    if ((A * w - rhs).cwiseAbs().maxCoeff() < 1e-10) {
      double need = 1.0;
      for (size_t b = 0; b < p.blocks.size(); ++b) {
        if (p.blocks[b].F0.size() == 0) continue;
        Eigen::SelfAdjointEigenSolver<MatrixXd> es(-p.blocks[b].F0, Eigen::EigenvaluesOnly);
        need = std::max(need, -es.eigenvalues().minCoeff() + 1.0);
      }
      Barrier solver(p, opts, eps);
      VectorXld x = (need * w).cast<long double>();
      long double mu0 = std::max({1.0, solver.data_norm, solver.c_norm});
      return solver.run(x, mu0, nullptr);
    }
  }

  // Phase 1: minimize s subject to S(x) + s*I >= 0. An early exit at a
  // comfortably interior point is preferred; thin problems keep descending
  // until s clears the shift.
  Problem ph1;
  ph1.nvar = p.nvar + 1;
  ph1.c = VectorXd::Zero(ph1.nvar);
  ph1.c(p.nvar) = 1.0;
  ph1.blocks = p.blocks;
  for (auto& blk : ph1.blocks) {
    blk.coeff.resize(static_cast<size_t>(ph1.nvar));
    for (int d = 0; d < blk.size; ++d) blk.coeff[static_cast<size_t>(p.nvar)].push_back({d, d, 1.0});
  }
  ph1.eqA = Eigen::MatrixXd::Zero(0, ph1.nvar);
  ph1.eqb = VectorXd::Zero(0);

  double s0 = 1.0;
  double f0norm = 1.0;
  for (size_t b = 0; b < p.blocks.size(); ++b) {
    const MatrixXd& F0 = p.blocks[b].F0;
    if (F0.size() == 0) continue;
    f0norm = std::max(f0norm, F0.cwiseAbs().maxCoeff());
    Eigen::SelfAdjointEigenSolver<MatrixXd> es(-F0, Eigen::EigenvaluesOnly);
    s0 = std::max(s0, -es.eigenvalues().minCoeff() + 1.0);
  }
  VectorXld x1 = VectorXld::Zero(ph1.nvar);
  x1(p.nvar) = s0;

  Options ph1_opts = opts;
  ph1_opts.verbose = opts.verbose >= 2 ? 1 : 0;
  Barrier ph1_solver(ph1, ph1_opts, 0.0);
  double stop_below = -0.01 * f0norm;  // a solidly interior point is enough
  Solution ph1_sol = ph1_solver.run(x1, std::max(1.0L, static_cast<long double>(s0)), &stop_below);
  double s_reached = ph1_sol.x(p.nvar);
  if (s_reached >= 0.9 * eps) {
    sol = ph1_sol;
    sol.status = Status::Infeasible;
    sol.x = ph1_sol.x.head(p.nvar);
    return sol;
  }

  // Phase 2 on the eps-shifted cone from the interior point found.
  Barrier solver(p, opts, eps);
  VectorXld x = ph1_sol.x.head(p.nvar).cast<long double>();
  long double mu0 = std::max({1.0, solver.data_norm, solver.c_norm});
  return solver.run(x, mu0, nullptr);
}

}  // namespace

Eigen::MatrixXd Problem::slack(const Eigen::VectorXd& x, size_t b) const {
  MatrixXd M = -blocks[b].F0;
  for (int i = 0; i < nvar; ++i)
    for (const auto& t : blocks[b].coeff[static_cast<size_t>(i)]) {
      M(t.i, t.j) += x(i) * t.v;
      if (t.i != t.j) M(t.j, t.i) += x(i) * t.v;
    }
  return M;
}

std::string status_name(Status s) {
  switch (s) {
    case Status::Optimal: return "optimal";
    case Status::Infeasible: return "infeasible";
    case Status::Unbounded: return "unbounded";
    case Status::SlowProgress: return "slow-progress";
  }
  return "?";
}

Solution solve(const Problem& p, const Options& opts) {
  if (p.eqA.rows() == 0) return solve_no_equalities(p, opts);

  // Null-space substitution x = x0 + N u.
  Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(p.eqA);
  Eigen::VectorXd x0 = cod.solve(-p.eqb);
  double resid = (p.eqA * x0 + p.eqb).cwiseAbs().maxCoeff();
  double scale = std::max(1.0, p.eqb.cwiseAbs().maxCoeff());
  Solution sol;
  if (resid > 1e-9 * scale) {
    sol.status = Status::Infeasible;
    sol.x = x0;
    return sol;
  }
  Eigen::FullPivLU<Eigen::MatrixXd> lu(p.eqA);
  lu.setThreshold(1e-10);
  Eigen::MatrixXd N = lu.kernel();
  if (N.cols() == 1 && N.norm() == 0.0) N = Eigen::MatrixXd::Zero(p.nvar, 0);

  Problem red;
  red.nvar = static_cast<int>(N.cols());
  red.c = N.transpose() * p.c;
  red.offset = p.offset + p.c.dot(x0);
  for (const auto& b : p.blocks) {
    Block nb;
    nb.size = b.size;
    nb.F0 = b.F0;
    for (int i = 0; i < p.nvar; ++i)
      for (const auto& t : b.coeff[static_cast<size_t>(i)]) {
        nb.F0(t.i, t.j) -= x0(i) * t.v;
        if (t.i != t.j) nb.F0(t.j, t.i) -= x0(i) * t.v;
      }
    nb.coeff.resize(static_cast<size_t>(red.nvar));
    for (int j = 0; j < red.nvar; ++j) {
      Eigen::MatrixXd A = Eigen::MatrixXd::Zero(b.size, b.size);
      for (int i = 0; i < p.nvar; ++i) {
        double w = N(i, j);
        if (w == 0.0) continue;
        for (const auto& t : b.coeff[static_cast<size_t>(i)]) {
          A(t.i, t.j) += w * t.v;
          if (t.i != t.j) A(t.j, t.i) += w * t.v;
        }
      }
      for (int r = 0; r < b.size; ++r)
        for (int cidx = r; cidx < b.size; ++cidx)
          if (A(r, cidx) != 0.0) nb.coeff[static_cast<size_t>(j)].push_back({r, cidx, A(r, cidx)});
    }
    red.blocks.push_back(std::move(nb));
  }
  red.eqA = Eigen::MatrixXd::Zero(0, red.nvar);
  red.eqb = Eigen::VectorXd::Zero(0);

  if (red.nvar == 0) {
    sol.x = x0;
    sol.primal_obj = p.offset + p.c.dot(x0);
    sol.dual_obj = sol.primal_obj;
    sol.gap = 0.0;
    sol.status = Status::Optimal;
    for (size_t b = 0; b < p.blocks.size(); ++b) {
      Eigen::MatrixXd S = p.slack(x0, b);
      sol.X.push_back(S);
      sol.Y.push_back(Eigen::MatrixXd::Zero(S.rows(), S.cols()));
      if (S.size() > 0) {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(S, Eigen::EigenvaluesOnly);
        if (es.eigenvalues().minCoeff() < -opts.feas_tol) sol.status = Status::Infeasible;
      }
    }
    return sol;
  }

  Solution rsol = solve_no_equalities(red, opts);
  sol = rsol;
  sol.x = x0 + N * rsol.x;
  return sol;
}

}  // namespace polyopt::sdp
