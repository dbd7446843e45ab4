#include "polyopt/border_basis.hpp"

#include <Eigen/Dense>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

namespace polyopt {

namespace {

// Substitutes known rewrite rules into p. Rule tails are supported on basis
// monomials, so one pass suffices.
Polynomial substitute(const Polynomial& p, const std::map<Monomial, Polynomial, GradedLess>& rules) {
  Polynomial out(p.nvars());
  for (const auto& [m, c] : p.terms()) {
    auto it = rules.find(m);
    if (it == rules.end())
      out.add_term(m, c);
    else
      out += it->second * c;
  }
  return out;
}

}  // namespace

std::vector<Monomial> BorderBasis::basis_up_to(int d) const {
  std::vector<Monomial> out;
  for (const auto& m : basis_) {
    if (m.degree() > d) break;
    out.push_back(m);
  }
  return out;
}

int BorderBasis::family_index_of(const Monomial& m) const {
  auto it = leading_index_.find(m);
  return it == leading_index_.end() ? -1 : it->second;
}

std::vector<Monomial> BorderBasis::border() const {
  std::set<Monomial, GradedLess> bd;
  for (const auto& b : basis_) {
    for (int v = 0; v < nvars_; ++v) {
      Monomial m = mono_mul(b, mono_var(nvars_, v));
      if (m.degree() <= degree_ && !in_basis(m)) bd.insert(m);
    }
  }
  return {bd.begin(), bd.end()};
}

Polynomial BorderBasis::reduce(const Monomial& m) const {
  if (m.degree() > degree_)
    throw DegreeTooSmall("normal form: monomial degree " + std::to_string(m.degree()) +
                         " exceeds truncation degree " + std::to_string(degree_));
  if (in_basis(m)) return Polynomial::monomial(m);
  auto it = rules_.find(m);
  if (it == rules_.end()) throw Error("border basis: no rule for non-basis monomial");
  return it->second;
}

Polynomial BorderBasis::reduce(const Polynomial& p) const {
  if (p.nvars() != nvars_) throw DimensionMismatch("normal form: nvars mismatch");
  Polynomial out(nvars_);
  for (const auto& [m, c] : p.terms()) out += reduce(m) * c;
  return out;
}

BorderBasis compute_border_basis(int nvars, const std::vector<Polynomial>& equalities, int degree,
                                 const BorderBasisOptions& opts) {
  BorderBasis bb;
  bb.nvars_ = nvars;
  bb.degree_ = degree;

  std::vector<Polynomial> gens;
  for (const auto& g : equalities) {
    if (g.is_zero()) continue;
    if (g.nvars() != nvars) throw DimensionMismatch("compute_border_basis: nvars mismatch");
    if (g.degree() > degree)
      throw DegreeTooSmall("equality of degree " + std::to_string(g.degree()) +
                           " exceeds border basis degree " + std::to_string(degree));
    gens.push_back(g);
  }

  // Status of each monomial of degree <= degree: basis member or pivot (rule).
  std::map<Monomial, Polynomial, GradedLess>& rules = bb.rules_;
  std::set<Monomial, GradedLess> in_b;
  std::vector<std::vector<Monomial>> pivots_by_degree(static_cast<size_t>(degree) + 1);

  for (int d = 0; d <= degree; ++d) {
    // Candidate rows: original generators of this degree plus prolongations of
    // the rules established at degree d-1.
    std::vector<Polynomial> rows;
    for (const auto& g : gens)
      if (g.degree() == d) rows.push_back(substitute(g, rules));
    if (d >= 1) {
      for (const auto& piv : pivots_by_degree[static_cast<size_t>(d - 1)]) {
        Polynomial rule_poly = Polynomial::monomial(piv) - rules.at(piv);
        for (int v = 0; v < nvars; ++v) {
          Polynomial row = rule_poly * Polynomial::variable(nvars, v);
          rows.push_back(substitute(row, rules));
        }
      }
    }

    // Gaussian elimination over the degree-d monomials with the tolerant
    // choice function.
    std::vector<std::pair<Monomial, Polynomial>> chosen;  // monic pivot rows
    for (Polynomial row : rows) {
      double scale = row.max_abs_coeff();
      if (scale == 0.0) continue;
      row = row * (1.0 / scale);
      for (const auto& [pm, pr] : chosen) {
        double c = row.coeff(pm);
        if (c != 0.0) row -= pr * c;
      }
      double rowmax = row.max_abs_coeff();
      if (rowmax < opts.pivot_tol) continue;  // syzygy

      if (row.degree() < d)
        throw NumericalBreakdown(
            "border basis: reduced row dropped below its degree; the ideal is not graded-reducible "
            "at degree " + std::to_string(d));

      // Pick the pivot among top-degree monomials. Monomials with a pivot
      // divisor must leave B anyway, so they are taken first; otherwise any
      // choosable monomial (all divisors in B) keeps B connected to 1.
      Monomial best;
      double best_abs = -1.0;
      bool best_must = false;
      for (const auto& [m, c] : row.terms()) {
        if (m.degree() != d) continue;
        double a = std::abs(c);
        if (a < opts.pivot_tol * rowmax) continue;
        bool must = false;
        for (int v = 0; v < nvars && !must; ++v)
          if (m.exp[static_cast<size_t>(v)] > 0 && rules.count(mono_div_var(m, v))) must = true;
        if (must != best_must ? must : a >= best_abs) {
          best = m;
          best_abs = a;
          best_must = must;
        }
      }
      if (best_abs < 0.0)
        throw NumericalBreakdown("border basis: no admissible pivot above tolerance at degree " +
                                 std::to_string(d));

      row = row * (1.0 / row.coeff(best));
      // Eliminate the new pivot from previously chosen rows.
      for (auto& [pm, pr] : chosen) {
        double c = pr.coeff(best);
        if (c != 0.0) pr -= row * c;
      }
      chosen.emplace_back(best, row);
    }

    // Finalize degree d: record rules (tail = pivot - row), mark remaining
    // monomials as basis members.
    for (auto& [pm, pr] : chosen) {
      Polynomial tail = Polynomial::monomial(pm) - pr;
      rules[pm] = tail;
      pivots_by_degree[static_cast<size_t>(d)].push_back(pm);
    }
    for (const auto& m : monomials_of_degree(nvars, d))
      if (!rules.count(m)) in_b.insert(m);
  }

  bb.basis_.assign(in_b.begin(), in_b.end());
  int idx = 0;
  for (const auto& m : bb.basis_) bb.basis_index_[m] = idx++;

  // Rewrite family: one element per border monomial.
  for (const auto& m : bb.border()) {
    auto it = rules.find(m);
    if (it == rules.end()) throw NumericalBreakdown("border basis: border monomial without rule");
    bb.leading_index_[m] = static_cast<int>(bb.family_.size());
    bb.leading_.push_back(m);
    bb.family_.push_back(Polynomial::monomial(m) - it->second);
  }

  if (opts.run_check) {
    BorderBasisCheck chk = check_border_basis(bb, opts.check_tol);
    if (!chk.ok) {
      std::ostringstream os;
      os << "border basis check failed:";
      for (const auto& v : chk.violations) os << " [" << v << "]";
      throw NumericalBreakdown(os.str());
    }
  }
  return bb;
}

BorderBasisCheck check_border_basis(const BorderBasis& bb, double tol) {
  BorderBasisCheck out;
  auto fail = [&](const std::string& msg) {
    out.ok = false;
    out.violations.push_back(msg);
  };

  const int n = bb.nvars();
  const int deg = bb.degree();
  std::set<Monomial, GradedLess> bset(bb.basis().begin(), bb.basis().end());

  // Connected to 1.
  if (!bset.count(Monomial(n))) fail("connected to 1: basis does not contain 1");
  for (const auto& m : bb.basis()) {
    if (m.is_one()) continue;
    bool ok = false;
    for (int v = 0; v < n && !ok; ++v)
      if (m.exp[static_cast<size_t>(v)] > 0 && bset.count(mono_div_var(m, v))) ok = true;
    if (!ok) fail("connected to 1: " + mono_to_string(m) + " has no divisor in B");
  }

  // Border structure of F.
  auto border = bb.border();
  std::set<Monomial, GradedLess> border_set(border.begin(), border.end());
  std::set<Monomial, GradedLess> seen_leading;
  for (size_t k = 0; k < bb.family().size(); ++k) {
    const Polynomial& f = bb.family()[k];
    const Monomial& gamma = bb.leading(static_cast<int>(k));
    if (std::abs(f.coeff(gamma) - 1.0) > 1e-12) fail("family element not monic on its leading monomial");
    int border_count = 0;
    for (const auto& [m, c] : f.terms()) {
      if (border_set.count(m)) {
        ++border_count;
      } else if (!bset.count(m)) {
        fail("family support outside B+ for leading " + mono_to_string(gamma));
      }
      if (m.degree() > deg) fail("family support exceeds truncation degree");
    }
    if (border_count != 1) fail("family element must have exactly one border monomial");
    if (f.degree() != gamma.degree()) fail("family element not graded (deg f != deg gamma)");
    if (!seen_leading.insert(gamma).second) fail("gamma injectivity: duplicate leading monomial");
  }
  for (const auto& m : border)
    if (bb.family_index_of(m) < 0)
      fail("border monomial " + mono_to_string(m) + " has no family element");

  if (!out.ok) return out;

  // Direct sum degree by degree: rank(<F|d>) = #non-basis monomials of degree
  // <= d, and stacking B unit rows reaches full dimension.
  for (int d = 0; d <= deg; ++d) {
    auto all = monomials_up_to(n, d);
    std::map<Monomial, int, GradedLess> col;
    int c = 0;
    for (const auto& m : all) col[m] = c++;

    std::vector<Polynomial> mults;
    for (const auto& f : bb.family()) {
      int fd = f.degree();
      if (fd > d) continue;
      for (const auto& a : monomials_up_to(n, d - fd)) mults.push_back(f * Polynomial::monomial(a));
    }
    int nb_in = 0;
    for (const auto& m : bb.basis())
      if (m.degree() <= d) ++nb_in;
    const int expected_rank = static_cast<int>(all.size()) - nb_in;

    Eigen::MatrixXd M(static_cast<Eigen::Index>(mults.size()), static_cast<Eigen::Index>(all.size()));
    M.setZero();
    for (size_t r = 0; r < mults.size(); ++r) {
      double s = mults[r].max_abs_coeff();
      if (s == 0.0) continue;
      for (const auto& [m, cf] : mults[r].terms())
        M(static_cast<Eigen::Index>(r), col.at(m)) = cf / s;
    }
    auto numeric_rank = [&](const Eigen::MatrixXd& A) {
      if (A.rows() == 0 || A.cols() == 0) return 0;
      Eigen::JacobiSVD<Eigen::MatrixXd> svd(A);
      const auto& sv = svd.singularValues();
      if (sv.size() == 0 || sv(0) == 0.0) return 0;
      int r = 0;
      for (Eigen::Index i = 0; i < sv.size(); ++i)
        if (sv(i) > tol * sv(0)) ++r;
      return r;
    };
    int rank_f = numeric_rank(M);
    if (rank_f != expected_rank) {
      fail("direct sum: dim<F|" + std::to_string(d) + "> = " + std::to_string(rank_f) +
           ", expected " + std::to_string(expected_rank));
      continue;
    }
    Eigen::MatrixXd S(M.rows() + nb_in, M.cols());
    S.topRows(M.rows()) = M;
    S.bottomRows(nb_in).setZero();
    int r = static_cast<int>(M.rows());
    for (const auto& m : bb.basis()) {
      if (m.degree() > d) continue;
      S(r++, col.at(m)) = 1.0;
    }
    if (numeric_rank(S) != static_cast<int>(all.size()))
      fail("direct sum: <B>_" + std::to_string(d) + " intersects <F|" + std::to_string(d) + ">");
  }
  return out;
}

}  // namespace polyopt
