#include "polyopt/decompose.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <set>

#include "polyopt/errors.hpp"

namespace polyopt {

MomentSequence::MomentSequence(std::shared_ptr<const BorderBasis> bb, int t,
                               std::map<Monomial, double, GradedLess> values)
    : bb_(std::move(bb)), t_(t), values_(std::move(values)) {}

MomentSequence MomentSequence::from_solution(const MomentRelaxation& rel, const SdpSolution& sol) {
  return MomentSequence(rel.bb, rel.t, sol.moments);
}

MomentSequence MomentSequence::from_measure(int nvars, int t,
                                            const std::vector<std::vector<double>>& points,
                                            const std::vector<double>& weights) {
  auto bb = std::make_shared<BorderBasis>(
      compute_border_basis(nvars, {}, 2 * t, BorderBasisOptions{.run_check = false}));
  std::map<Monomial, double, GradedLess> vals;
  for (const auto& m : monomials_up_to(nvars, 2 * t)) {
    double acc = 0.0;
    for (size_t i = 0; i < points.size(); ++i)
      acc += weights[i] * Polynomial::monomial(m).evaluate(points[i]);
    vals[m] = acc;
  }
  return MomentSequence(bb, t, std::move(vals));
}

double MomentSequence::value(const Monomial& m) const {
  if (m.degree() > 2 * t_)
    throw DegreeTooSmall("moment of degree " + std::to_string(m.degree()) + " beyond 2t");
  auto it = values_.find(m);
  if (it != values_.end()) return it->second;
  Polynomial r = bb_->reduce(m);
  double acc = 0.0;
  for (const auto& [mm, c] : r.terms()) {
    auto jt = values_.find(mm);
    if (jt == values_.end()) throw Error("moment sequence: missing value for basis monomial");
    acc += c * jt->second;
  }
  return acc;
}

double MomentSequence::eval(const Polynomial& p) const {
  double acc = 0.0;
  for (const auto& [m, c] : p.terms()) acc += c * value(m);
  return acc;
}

double MomentSequence::inner(const Polynomial& p, const Polynomial& q) const {
  if (p.degree() + q.degree() > 2 * t_)
    throw DegreeTooSmall("inner product degree " + std::to_string(p.degree() + q.degree()) +
                         " beyond 2t");
  return eval(p * q);
}

DecompositionResult decompose(const MomentSequence& L, const DecomposeOptions& opts) {
  const int n = L.nvars();
  const int t = L.t();
  DecompositionResult out;
  out.basis.push_back(Polynomial::constant(n, 1.0));
  out.norms.push_back(L.eval(out.basis[0]));

  if (out.norms[0] <= 0.0)
    throw NumericalBreakdown("decompose: L(1) is not positive");

  auto make_candidates = [&](bool& degree_ok) {
    std::vector<Polynomial> cands;
    degree_ok = true;
    for (const auto& b : out.basis) {
      if (b.degree() + 1 > t) {
        degree_ok = false;
        return cands;
      }
      for (int k = 0; k < n; ++k) {
        Polynomial c = b * Polynomial::variable(n, k);
        for (size_t i = 0; i < out.basis.size(); ++i) {
          double num = L.inner(c, out.basis[i]);
          c -= out.basis[i] * (num / out.norms[i]);
        }
        cands.push_back(std::move(c));
      }
    }
    return cands;
  };

  while (true) {
    bool degree_ok = true;
    std::vector<Polynomial> cands = make_candidates(degree_ok);
    if (!degree_ok) {
      out.status = DecomposeStatus::Failed;
      return out;
    }

    // Pivoted extraction of a maximal orthogonal family: largest residual
    // squared norm first, accepted while the pivot stays above
    // rank_tol * max(first pivot, 1).
    std::vector<double> self(cands.size());
    std::vector<bool> used(cands.size(), false);
    for (size_t i = 0; i < cands.size(); ++i) self[i] = L.inner(cands[i], cands[i]);

    std::vector<Polynomial> added;
    std::vector<double> added_norms;
    double first_pivot = 0.0;
    while (true) {
      int best = -1;
      for (size_t i = 0; i < cands.size(); ++i)
        if (!used[i] && (best < 0 || self[i] > self[static_cast<size_t>(best)]))
          best = static_cast<int>(i);
      if (best < 0) break;
      double piv = self[static_cast<size_t>(best)];
      if (piv < -opts.rank_tol)
        throw NumericalBreakdown("decompose: negative squared norm " + std::to_string(piv));
      double ref = added.empty() ? 1.0 : std::max(first_pivot, 1.0);
      if (piv < opts.rank_tol * ref) break;
      if (added.empty()) first_pivot = piv;
      used[static_cast<size_t>(best)] = true;
      Polynomial bnew = cands[static_cast<size_t>(best)];
      added.push_back(bnew);
      added_norms.push_back(piv);
      for (size_t i = 0; i < cands.size(); ++i) {
        if (used[i]) continue;
        double num = L.inner(cands[i], bnew);
        cands[i] -= bnew * (num / piv);
        self[i] = L.inner(cands[i], cands[i]);
        if (self[i] < -opts.rank_tol)
          throw NumericalBreakdown("decompose: negative squared norm after orthogonalization");
      }
    }

    if (added.empty()) {
      out.status = DecomposeStatus::Success;
      // Final relations over the complete basis.
      for (const auto& b : out.basis)
        for (int k = 0; k < n; ++k) {
          Polynomial rel = b * Polynomial::variable(n, k);
          for (size_t i = 0; i < out.basis.size(); ++i) {
            double num = L.inner(rel, out.basis[i]);
            rel -= out.basis[i] * (num / out.norms[i]);
          }
          if (rel.max_abs_coeff() < 1e-10) continue;  // x_k b_j already in <B'>
          rel = rel * (1.0 / rel.coeff(rel.leading_monomial()));
          out.relations.push_back(std::move(rel));
        }
      return out;
    }
    for (size_t i = 0; i < added.size(); ++i) {
      out.basis.push_back(added[i]);
      out.norms.push_back(added_norms[i]);
    }
  }
}

DecompositionCheck check_decomposition(const DecompositionResult& d, const MomentSequence& L,
                                       double tol) {
  DecompositionCheck out;
  auto fail = [&](const std::string& m) {
    out.ok = false;
    out.violations.push_back(m);
  };
  const size_t r = d.basis.size();
  if (r == 0 || !(d.basis[0] == Polynomial::constant(L.nvars(), 1.0))) fail("basis must start with 1");
  for (size_t i = 0; i < r; ++i)
    for (size_t j = i + 1; j < r; ++j) {
      double ip = L.inner(d.basis[i], d.basis[j]);
      double sc = std::sqrt(std::max(d.norms[i] * d.norms[j], 1e-30));
      if (std::abs(ip) > tol * std::max(1.0, sc))
        fail("basis not orthogonal at (" + std::to_string(i) + "," + std::to_string(j) + ")");
    }
  if (d.status == DecomposeStatus::Success) {
    for (const auto& rel : d.relations) {
      if (std::sqrt(std::abs(L.inner(rel, rel))) > tol * std::max(1.0, rel.max_abs_coeff()))
        fail("relation has nonzero norm");
      for (size_t i = 0; i < r; ++i)
        if (std::abs(L.inner(rel, d.basis[i])) > tol * std::max(1.0, std::sqrt(d.norms[i])))
          fail("relation not orthogonal to basis");
    }
    // Span identity: <B'> + <relations> covers <B'+> with the right dimension.
    std::set<Monomial, GradedLess> supp;
    std::vector<Polynomial> gens;
    for (const auto& b : d.basis) {
      gens.push_back(b);
      for (int k = 0; k < L.nvars(); ++k) gens.push_back(b * Polynomial::variable(L.nvars(), k));
    }
    for (const auto& g : gens)
      for (const auto& [m, c] : g.terms()) supp.insert(m);
    std::map<Monomial, int, GradedLess> col;
    int c = 0;
    for (const auto& m : supp) col[m] = c++;
    auto to_mat = [&](const std::vector<Polynomial>& polys) {
      Eigen::MatrixXd M = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(polys.size()),
                                                static_cast<Eigen::Index>(supp.size()));
      for (size_t i = 0; i < polys.size(); ++i) {
        double s = std::max(polys[i].max_abs_coeff(), 1e-30);
        for (const auto& [m, cf] : polys[i].terms())
          M(static_cast<Eigen::Index>(i), col.at(m)) = cf / s;
      }
      return M;
    };
    auto rank_of = [&](const Eigen::MatrixXd& M) {
      if (M.rows() == 0) return 0;
      Eigen::JacobiSVD<Eigen::MatrixXd> svd(M);
      int rr = 0;
      for (Eigen::Index i = 0; i < svd.singularValues().size(); ++i)
        if (svd.singularValues()(i) > 1e-9 * std::max(1.0, svd.singularValues()(0))) ++rr;
      return rr;
    };
    int dim_bplus = rank_of(to_mat(gens));
    std::vector<Polynomial> both = d.basis;
    both.insert(both.end(), d.relations.begin(), d.relations.end());
    int dim_both = rank_of(to_mat(both));
    if (dim_both != dim_bplus)
      fail("span identity: dim(<B'> + <K>) = " + std::to_string(dim_both) + " vs dim<B'+> = " +
           std::to_string(dim_bplus));
  }
  return out;
}

}  // namespace polyopt
