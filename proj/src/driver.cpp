#include "polyopt/driver.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>

namespace polyopt {

namespace {

int half_up(int d) { return (d + 1) / 2; }

bool points_admissible(const MinimizerSet& ms, const Polynomial& f,
                       const std::vector<Polynomial>& eqs, const std::vector<Polynomial>& ineqs,
                       double f_mu, const DriverOptions& opts, std::string& why) {
  for (const auto& pt : ms.points) {
    for (const auto& g : eqs)
      if (std::abs(g.evaluate(pt)) > opts.point_feas_tol * std::max(1.0, g.max_abs_coeff())) {
        why = "equality residual at a recovered point";
        return false;
      }
    for (const auto& g : ineqs)
      if (g.evaluate(pt) < -opts.point_feas_tol * std::max(1.0, g.max_abs_coeff())) {
        why = "inequality violated at a recovered point";
        return false;
      }
    if (std::abs(f.evaluate(pt) - f_mu) > opts.value_tol * std::max(1.0, std::abs(f_mu))) {
      why = "objective value mismatch at a recovered point";
      return false;
    }
  }
  return true;
}

}  // namespace

MinimizationOutcome minimize(const Polynomial& f, const ConstraintSet& cs,
                             const DriverOptions& opts) {
  const int n = f.nvars();
  std::vector<Polynomial> eqs;
  for (const auto& g : cs.equalities)
    if (!g.is_zero()) eqs.push_back(g);
  std::vector<Polynomial> ineqs;
  for (const auto& g : cs.inequalities)
    if (!g.is_zero()) ineqs.push_back(g);

  const bool want_gradient = opts.gradient_ideal == DriverOptions::Tri::On ||
                             (opts.gradient_ideal == DriverOptions::Tri::Auto && cs.empty());
  if (want_gradient)
    for (auto& g : gradient_ideal_constraints(f))
      if (!g.is_zero()) eqs.push_back(g);
  if (opts.regular_case)
    for (auto& g : regular_case_constraints(f, ConstraintSet{eqs, ineqs}))
      if (!g.is_zero()) eqs.push_back(g);
  if (opts.preordering) ineqs = preordering_inequalities(ineqs);

  int t0 = std::max(1, half_up(f.degree()));
  for (const auto& g : eqs) t0 = std::max(t0, half_up(g.degree()));
  for (const auto& g : ineqs) t0 = std::max(t0, half_up(g.degree()));
  const int tmax = opts.max_order >= 0 ? opts.max_order : t0 + 8;

  MinimizationOutcome out;
  sdp::Options sdp_opts = opts.sdp;
  bool tightened = false;

  for (int t = t0; t <= tmax; ++t) {
    auto bb = std::make_shared<BorderBasis>(compute_border_basis(n, eqs, 2 * t));
    MomentRelaxation rel = build_relaxation(f, bb, ineqs, t);

    SdpSolution sol;
    if (opts.backend == DriverOptions::Backend::SdpaFile) {
      namespace fs = std::filesystem;
      fs::path dir = opts.sdpa_dir.empty() ? fs::path(".") : fs::path(opts.sdpa_dir);
      fs::create_directories(dir);
      fs::path dat = dir / ("problem_t" + std::to_string(t) + ".dat-s");
      fs::path res = dir / ("problem_t" + std::to_string(t) + ".out");
      export_relaxation_sdpa(rel, dat.string());
      if (!fs::exists(res))
        throw SolverFailure("external solver output not found: " + res.string(), out.trace,
                            sdp::Status::SlowProgress);
      sol = import_relaxation_solution(rel, res.string());
    } else {
      sol = solve_relaxation(rel, sdp_opts);
    }

    TraceRow row;
    row.order = t;
    row.f_mu = sol.f_mu;
    row.s = rel.s();
    row.p = rel.p();
    row.solver_status = sdp::status_name(sol.status);
    row.decompose_status = "-";

    if (sol.status == sdp::Status::Unbounded) {
      // The order is too low for the relaxation to be bounded; raising t
      // tightens it.
      row.decompose_status = "skipped";
      out.trace.push_back(row);
      continue;
    }
    if (sol.status != sdp::Status::Optimal) {
      out.trace.push_back(row);
      throw SolverFailure("SDP solver returned " + sdp::status_name(sol.status) + " at order " +
                              std::to_string(t),
                          out.trace, sol.status);
    }

    MomentSequence L = MomentSequence::from_solution(rel, sol);
    DecompositionResult dec;
    try {
      dec = decompose(L, DecomposeOptions{.rank_tol = opts.rank_tol});
    } catch (const NumericalBreakdown&) {
      if (!tightened) {
        // One shot at a cleaner linear form before raising the order.
        tightened = true;
        sdp_opts.gap_tol = std::max(sdp_opts.gap_tol * 1e-2, 1e-12);
        sdp_opts.feas_tol = std::max(sdp_opts.feas_tol * 1e-2, 1e-12);
        --t;
        continue;
      }
      row.decompose_status = "breakdown";
      out.trace.push_back(row);
      continue;
    }

    if (dec.status != DecomposeStatus::Success) {
      row.decompose_status = "failed";
      out.trace.push_back(row);
      continue;
    }
    row.decompose_status = "success";

    MinimizerSet ms;
    try {
      auto M = multiplication_matrices(dec, L);
      ms = extract_points(M, L, dec, f, ExtractOptions{.seed = opts.seed});
    } catch (const Error&) {
      row.decompose_status = "extraction-failed";
      out.trace.push_back(row);
      continue;
    }

    std::string why;
    if (!points_admissible(ms, f, eqs, ineqs, sol.f_mu, opts, why)) {
      row.decompose_status = "points-rejected: " + why;
      out.trace.push_back(row);
      continue;
    }

    out.trace.push_back(row);
    out.f_star = sol.f_mu;
    out.minimizers = ms;
    out.minimizer_basis = dec.basis;
    out.minimizer_ideal_generators = dec.relations;
    out.order_reached = t;
    return out;
  }
  throw MaxOrderReachedError(out.trace);
}

}  // namespace polyopt
