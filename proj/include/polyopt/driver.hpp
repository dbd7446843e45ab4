#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "polyopt/minimizers.hpp"
#include "polyopt/relaxation.hpp"

namespace polyopt {

struct DriverOptions {
  enum class Tri { Auto, On, Off };
  // Augment with the partial derivatives of f; Auto turns it on exactly when
  // there are no constraints.
  Tri gradient_ideal = Tri::Auto;
  bool regular_case = false;
  bool preordering = false;
  int max_order = -1;  // absolute cap on t; -1 means t0 + 8
  sdp::Options sdp;
  // A slightly wider cone opening keeps the analytic center of the optimal
  // face sharp for moment solves.
  DriverOptions() { sdp.shift = 1e-7; }
  double rank_tol = 1e-6;
  std::uint64_t seed = 12345;
  double point_feas_tol = 1e-6;  // constraint satisfaction at recovered points
  double value_tol = 1e-5;       // |f(xi) - f_mu| agreement

  enum class Backend { Internal, SdpaFile };
  Backend backend = Backend::Internal;
  std::string sdpa_dir;
};

struct TraceRow {
  int order = 0;
  double f_mu = 0.0;
  int s = 0;
  int p = 0;
  std::string solver_status;
  std::string decompose_status;
};

struct MinimizationOutcome {
  double f_star = 0.0;
  MinimizerSet minimizers;
  std::vector<Polynomial> minimizer_basis;             // B'
  std::vector<Polynomial> minimizer_ideal_generators;  // K, border basis of I_min over B'
  int order_reached = 0;
  std::vector<TraceRow> trace;
};

struct MaxOrderReachedError : Error {
  std::vector<TraceRow> trace;
  explicit MaxOrderReachedError(std::vector<TraceRow> tr)
      : Error("relaxation hierarchy reached the order cap without certifying the minimum"),
        trace(std::move(tr)) {}
};

struct SolverFailure : Error {
  std::vector<TraceRow> trace;
  sdp::Status status;
  SolverFailure(const std::string& msg, std::vector<TraceRow> tr, sdp::Status st)
      : Error(msg), trace(std::move(tr)), status(st) {}
};

// Outer loop: starting from t0 = max(ceil(deg f / 2), d0, d+), build the
// border basis and moment relaxation, solve, attempt the decomposition, and
// extract minimizer points on success; otherwise raise the order.
MinimizationOutcome minimize(const Polynomial& f, const ConstraintSet& cs,
                             const DriverOptions& opts = {});

}  // namespace polyopt
