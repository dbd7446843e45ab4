#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

namespace polyopt::sdp {

// Block-affine SDP in the parameter vector x:
//
//   minimize  c'x + offset
//   s.t.      S_b(x) = sum_i x_i F_{b,i} - F_{b,0}  >= 0   for each block b
//             eqA x + eqb = 0
//
// This matches the SDPA primal form, so export is direct. Equality rows are
// eliminated by null-space substitution before the interior-point iteration.
struct Triplet {
  int i, j;   // i <= j
  double v;
};

struct Block {
  int size = 0;
  Eigen::MatrixXd F0;                       // constant part (dense, symmetric)
  std::vector<std::vector<Triplet>> coeff;  // per variable, upper triangle
};

struct Problem {
  int nvar = 0;
  Eigen::VectorXd c;
  double offset = 0.0;
  std::vector<Block> blocks;
  Eigen::MatrixXd eqA;  // #rows x nvar (0 rows when no equalities)
  Eigen::VectorXd eqb;

  Eigen::MatrixXd slack(const Eigen::VectorXd& x, size_t b) const;
};

enum class Status { Optimal, Infeasible, Unbounded, SlowProgress };

std::string status_name(Status s);

struct Options {
  double gap_tol = 1e-8;
  double feas_tol = 1e-8;
  int max_iter = 200;
  int verbose = 0;
  // Opening of the cone: blocks are required to satisfy S(x) + shift*I >= 0.
  // Moment relaxations usually have no strictly feasible point, so the
  // interior-point method runs on this slightly opened cone; the reported
  // objective is corrected by shift*tr(Y). Larger shifts keep the analytic
  // center of a flat optimal face numerically visible, at the price of a
  // larger feasibility slack in the returned X.
  double shift = 1e-8;
};

struct Solution {
  Status status = Status::SlowProgress;
  Eigen::VectorXd x;
  double primal_obj = 0.0;
  double dual_obj = 0.0;
  double gap = 0.0;
  int iterations = 0;
  std::vector<Eigen::MatrixXd> X;  // primal slack blocks
  std::vector<Eigen::MatrixXd> Y;  // dual blocks
  double best_pinf = 0.0;          // feasibility residuals of the reported iterate
  double best_dinf = 0.0;
};

// Primal-dual path-following with Nesterov-Todd scaling and a Mehrotra
// predictor-corrector step; dense Cholesky of the Schur complement.
Solution solve(const Problem& p, const Options& opts = {});

// SDPA sparse format (.dat-s). Equality rows are written as paired
// nonnegative diagonal entries.
void export_sdpa(const Problem& p, const std::string& path);

// Reads a solver output file and extracts the primal vector from an
// "xVec = {...}" or "yVec = {...}" section. Throws ParseError.
Eigen::VectorXd import_sdpa_solution_vector(const std::string& path, int expected_size);
Solution import_sdpa_solution(const Problem& p, const std::string& path, double feas_tol = 1e-6);

// Reads a .dat-s problem file back (equality pairs are kept as the written
// diagonal block). Throws ParseError with the offending line.
Problem import_sdpa_problem(const std::string& path);

}  // namespace polyopt::sdp
