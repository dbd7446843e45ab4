#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <vector>

#include "polyopt/errors.hpp"
#include "polyopt/sdp.hpp"

namespace polyopt::sdp {

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

// SDPA headers allow comment lines and {},() decorations.
bool is_comment(const std::string& line) {
  for (char ch : line) {
    if (std::isspace(static_cast<unsigned char>(ch))) continue;
    return ch == '*' || ch == '"';
  }
  return true;  // blank
}

std::vector<double> numbers_on_line(const std::string& line) {
  std::string clean = line;
  for (char& ch : clean)
    if (ch == '{' || ch == '}' || ch == '(' || ch == ')' || ch == ',') ch = ' ';
  std::istringstream is(clean);
  std::vector<double> out;
  double v;
  while (is >> v) out.push_back(v);
  return out;
}

}  // namespace

void export_sdpa(const Problem& p, const std::string& path) {
  std::ofstream os(path);
  if (!os) throw Error("cannot open " + path + " for writing");

  const int ne = static_cast<int>(p.eqA.rows());
  const int nblock = static_cast<int>(p.blocks.size()) + (ne > 0 ? 1 : 0);

  os << p.nvar << "\n";
  os << nblock << "\n";
  for (size_t b = 0; b < p.blocks.size(); ++b) os << (b ? " " : "") << p.blocks[b].size;
  if (ne > 0) os << (p.blocks.empty() ? "" : " ") << -(2 * ne);
  os << "\n";
  for (int i = 0; i < p.nvar; ++i) os << (i ? " " : "") << fmt(p.c(i));
  os << "\n";

  // matno 0 carries F0; matno i carries F_i. Entries use 1-based indices.
  auto emit = [&](int matno, int blkno, int i, int j, double v) {
    if (v == 0.0) return;
    os << matno << " " << blkno << " " << (i + 1) << " " << (j + 1) << " " << fmt(v) << "\n";
  };
  for (size_t b = 0; b < p.blocks.size(); ++b) {
    const Block& blk = p.blocks[b];
    for (int i = 0; i < blk.size; ++i)
      for (int j = i; j < blk.size; ++j) emit(0, static_cast<int>(b) + 1, i, j, blk.F0(i, j));
    for (int v = 0; v < p.nvar; ++v)
      for (const auto& t : blk.coeff[static_cast<size_t>(v)])
        emit(v + 1, static_cast<int>(b) + 1, t.i, t.j, t.v);
  }
  if (ne > 0) {
    // Row a'x + b = 0 becomes the diagonal pair a'x >= -b and -a'x >= b.
    const int blkno = static_cast<int>(p.blocks.size()) + 1;
    for (int r = 0; r < ne; ++r) {
      emit(0, blkno, 2 * r, 2 * r, -p.eqb(r));
      emit(0, blkno, 2 * r + 1, 2 * r + 1, p.eqb(r));
      for (int v = 0; v < p.nvar; ++v) {
        emit(v + 1, blkno, 2 * r, 2 * r, p.eqA(r, v));
        emit(v + 1, blkno, 2 * r + 1, 2 * r + 1, -p.eqA(r, v));
      }
    }
  }
}

Eigen::VectorXd import_sdpa_solution_vector(const std::string& path, int expected_size) {
  std::ifstream is(path);
  if (!is) throw ParseError("cannot open " + path, 0, 0);
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    auto pos = line.find("xVec");
    if (pos == std::string::npos) pos = line.find("yVec");
    if (pos == std::string::npos) continue;
    auto eq = line.find('=', pos);
    if (eq == std::string::npos) throw ParseError("malformed solution vector header", lineno, 1);
    std::string rest = line.substr(eq + 1);
    // The vector may span several lines; read until the closing brace.
    while (rest.find('}') == std::string::npos && std::getline(is, line)) {
      ++lineno;
      rest += " " + line;
    }
    std::vector<double> vals = numbers_on_line(rest);
    if (static_cast<int>(vals.size()) != expected_size)
      throw ParseError("solution vector has " + std::to_string(vals.size()) + " entries, expected " +
                           std::to_string(expected_size),
                       lineno, 1);
    Eigen::VectorXd x(expected_size);
    for (int i = 0; i < expected_size; ++i) x(i) = vals[static_cast<size_t>(i)];
    return x;
  }
  throw ParseError("no xVec/yVec section found", lineno, 1);
}

Solution import_sdpa_solution(const Problem& p, const std::string& path, double feas_tol) {
  Solution sol;
  sol.x = import_sdpa_solution_vector(path, p.nvar);
  sol.primal_obj = p.c.dot(sol.x) + p.offset;
  sol.dual_obj = std::nan("");
  sol.gap = std::nan("");
  sol.status = Status::Optimal;
  for (size_t b = 0; b < p.blocks.size(); ++b) {
    Eigen::MatrixXd S = p.slack(sol.x, b);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(S, Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() < -feas_tol) sol.status = Status::SlowProgress;
    sol.X.push_back(std::move(S));
    sol.Y.push_back(Eigen::MatrixXd::Zero(p.blocks[b].size, p.blocks[b].size));
  }
  if (p.eqA.rows() > 0) {
    double r = (p.eqA * sol.x + p.eqb).cwiseAbs().maxCoeff();
    if (r > feas_tol) sol.status = Status::SlowProgress;
  }
  return sol;
}

Problem import_sdpa_problem(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw ParseError("cannot open " + path, 0, 0);
  std::string line;
  int lineno = 0;
  auto next_data_line = [&]() -> std::string {
    while (std::getline(is, line)) {
      ++lineno;
      if (!is_comment(line)) return line;
    }
    throw ParseError("unexpected end of file", lineno, 1);
  };

  Problem p;
  {
    auto v = numbers_on_line(next_data_line());
    if (v.size() != 1 || v[0] < 0 || v[0] != std::floor(v[0]))
      throw ParseError("malformed mDIM line", lineno, 1);
    p.nvar = static_cast<int>(v[0]);
  }
  int nblock;
  {
    auto v = numbers_on_line(next_data_line());
    if (v.size() != 1 || v[0] <= 0 || v[0] != std::floor(v[0]))
      throw ParseError("malformed nBLOCK line", lineno, 1);
    nblock = static_cast<int>(v[0]);
  }
  std::vector<int> bstruct;
  {
    auto v = numbers_on_line(next_data_line());
    if (static_cast<int>(v.size()) != nblock) throw ParseError("malformed block structure", lineno, 1);
    for (double d : v) bstruct.push_back(static_cast<int>(d));
  }
  {
    auto v = numbers_on_line(next_data_line());
    if (static_cast<int>(v.size()) != p.nvar) throw ParseError("malformed objective line", lineno, 1);
    p.c = Eigen::VectorXd::Zero(p.nvar);
    for (int i = 0; i < p.nvar; ++i) p.c(i) = v[static_cast<size_t>(i)];
  }
  for (int b : bstruct) {
    Block blk;
    blk.size = std::abs(b);
    blk.F0 = Eigen::MatrixXd::Zero(blk.size, blk.size);
    blk.coeff.resize(static_cast<size_t>(p.nvar));
    p.blocks.push_back(std::move(blk));
  }
  while (std::getline(is, line)) {
    ++lineno;
    if (is_comment(line)) continue;
    auto v = numbers_on_line(line);
    if (v.empty()) continue;
    if (v.size() != 5) throw ParseError("entry line must have 5 fields", lineno, 1);
    int matno = static_cast<int>(v[0]);
    int blkno = static_cast<int>(v[1]) - 1;
    int i = static_cast<int>(v[2]) - 1;
    int j = static_cast<int>(v[3]) - 1;
    double val = v[4];
    if (blkno < 0 || blkno >= nblock || matno < 0 || matno > p.nvar)
      throw ParseError("entry indices out of range", lineno, 1);
    Block& blk = p.blocks[static_cast<size_t>(blkno)];
    if (i < 0 || j < i || j >= blk.size) throw ParseError("entry position out of range", lineno, 1);
    if (matno == 0) {
      blk.F0(i, j) = val;
      blk.F0(j, i) = val;
    } else {
      blk.coeff[static_cast<size_t>(matno - 1)].push_back({i, j, val});
    }
  }
  p.eqA = Eigen::MatrixXd::Zero(0, p.nvar);
  p.eqb = Eigen::VectorXd::Zero(0);
  return p;
}

}  // namespace polyopt::sdp
