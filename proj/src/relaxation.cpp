#include "polyopt/relaxation.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "polyopt/errors.hpp"

namespace polyopt {

namespace {

// Collects the distinct monomials of a set of reduced polynomials.
void collect_support(const Polynomial& p, std::set<Monomial, GradedLess>& into) {
  for (const auto& [m, c] : p.terms()) into.insert(m);
}

MomentCombo combo_from(const Polynomial& reduced, const std::map<Monomial, int, GradedLess>& ids) {
  MomentCombo out;
  for (const auto& [m, c] : reduced.terms()) {
    if (m.is_one()) {
      out.c0 += c;
    } else {
      out.terms.emplace_back(ids.at(m), c);
    }
  }
  std::sort(out.terms.begin(), out.terms.end());
  return out;
}

MomentRelaxation build_impl(const Polynomial& f, std::shared_ptr<const BorderBasis> bb,
                            const std::vector<Polynomial>& inequalities,
                            const std::vector<Polynomial>& explicit_equalities, int t) {
  if (!bb) throw Error("build_relaxation: missing border basis");
  if (bb->degree() != 2 * t)
    throw DegreeTooSmall("build_relaxation: border basis degree " + std::to_string(bb->degree()) +
                         " does not match 2t = " + std::to_string(2 * t));
  if (f.degree() > 2 * t)
    throw DegreeTooSmall("objective degree exceeds 2t");

  MomentRelaxation rel;
  rel.bb = bb;
  rel.t = t;
  rel.nvars = bb->nvars();
  rel.basis = bb->basis_up_to(t);
  const int s = static_cast<int>(rel.basis.size());

  // Reduce everything first, then assign moment ids in graded order.
  std::vector<Polynomial> prod(static_cast<size_t>(s) * static_cast<size_t>(s), Polynomial(rel.nvars));
  std::set<Monomial, GradedLess> support;
  for (int i = 0; i < s; ++i)
    for (int j = i; j < s; ++j) {
      Polynomial r = bb->reduce(mono_mul(rel.basis[static_cast<size_t>(i)],
                                         rel.basis[static_cast<size_t>(j)]));
      collect_support(r, support);
      prod[static_cast<size_t>(i) * s + j] = r;
      prod[static_cast<size_t>(j) * s + i] = r;
    }

  Polynomial fred = bb->reduce(f);
  collect_support(fred, support);

  struct LocWork {
    Polynomial g;
    std::vector<Monomial> basis;
    std::vector<Polynomial> entries;
  };
  std::vector<LocWork> locs;
  for (const auto& graw : inequalities) {
    if (graw.is_zero()) continue;
    Polynomial g = bb->reduce(graw);
    if (g.is_zero()) continue;
    int w = (g.degree() + 1) / 2;
    if (w > t)
      throw DegreeTooSmall("inequality of degree " + std::to_string(g.degree()) +
                           " needs order > " + std::to_string(t));
    LocWork lw;
    lw.g = g;
    lw.basis = bb->basis_up_to(t - w);
    const int ls = static_cast<int>(lw.basis.size());
    lw.entries.resize(static_cast<size_t>(ls) * static_cast<size_t>(ls), Polynomial(rel.nvars));
    for (int i = 0; i < ls; ++i)
      for (int j = i; j < ls; ++j) {
        Polynomial pb = g * Polynomial::monomial(mono_mul(lw.basis[static_cast<size_t>(i)],
                                                          lw.basis[static_cast<size_t>(j)]));
        Polynomial r = bb->reduce(pb);
        collect_support(r, support);
        lw.entries[static_cast<size_t>(i) * ls + j] = r;
        lw.entries[static_cast<size_t>(j) * ls + i] = r;
      }
    locs.push_back(std::move(lw));
  }

  std::vector<Polynomial> eqrows;
  for (const auto& e : explicit_equalities) {
    Polynomial r = bb->reduce(e);
    if (r.is_zero()) continue;
    collect_support(r, support);
    eqrows.push_back(r);
  }

  support.erase(Monomial(rel.nvars));  // the unit moment is the affine constant
  for (const auto& m : support) {
    rel.moment_id[m] = static_cast<int>(rel.moments.size());
    rel.moments.push_back(m);
  }

  rel.moment_block.reserve(prod.size());
  for (const auto& r : prod) rel.moment_block.push_back(combo_from(r, rel.moment_id));
  for (auto& lw : locs) {
    MomentRelaxation::Localizer loc;
    loc.g = lw.g;
    loc.basis = lw.basis;
    for (const auto& r : lw.entries) loc.entries.push_back(combo_from(r, rel.moment_id));
    rel.localizers.push_back(std::move(loc));
  }
  for (const auto& r : eqrows) rel.equality_rows.push_back(combo_from(r, rel.moment_id));
  rel.objective = combo_from(fred, rel.moment_id);
  return rel;
}

}  // namespace

MomentRelaxation build_relaxation(const Polynomial& f, std::shared_ptr<const BorderBasis> bb,
                                  const std::vector<Polynomial>& inequalities, int t) {
  return build_impl(f, std::move(bb), inequalities, {}, t);
}

MomentRelaxation build_full_relaxation(const Polynomial& f,
                                       const std::vector<Polynomial>& equalities,
                                       const std::vector<Polynomial>& inequalities, int t) {
  const int n = f.nvars();
  auto trivial = std::make_shared<BorderBasis>(
      compute_border_basis(n, {}, 2 * t, BorderBasisOptions{.run_check = false}));
  std::vector<Polynomial> rows;
  for (const auto& g : equalities) {
    if (g.is_zero()) continue;
    if (g.degree() > 2 * t) throw DegreeTooSmall("equality degree exceeds 2t");
    for (const auto& a : monomials_up_to(n, 2 * t - g.degree()))
      rows.push_back(g * Polynomial::monomial(a));
  }
  return build_impl(f, trivial, inequalities, rows, t);
}

std::vector<Polynomial> gradient_ideal_constraints(const Polynomial& f) {
  std::vector<Polynomial> out;
  for (int v = 0; v < f.nvars(); ++v) out.push_back(f.differentiate(v));
  return out;
}

Polynomial regular_case_constraint_for_subset(const Polynomial& f, const ConstraintSet& cs,
                                              const std::vector<int>& nu) {
  const int n = f.nvars();
  const int n1 = static_cast<int>(cs.equalities.size());
  if (static_cast<int>(nu.size()) > n - n1)
    throw SubsetTooLarge("regular case: |nu| exceeds n - n1");

  std::vector<std::vector<Polynomial>> grads;  // rows of A_nu
  auto grad_of = [&](const Polynomial& p) {
    std::vector<Polynomial> g;
    for (int v = 0; v < n; ++v) g.push_back(p.differentiate(v));
    return g;
  };
  grads.push_back(grad_of(f));
  for (const auto& g0 : cs.equalities) grads.push_back(grad_of(g0));
  for (int j : nu) grads.push_back(grad_of(cs.inequalities[static_cast<size_t>(j)]));

  const int k = static_cast<int>(grads.size());
  // Gram matrix A_nu A_nu^T of polynomial rows.
  std::vector<Polynomial> gram(static_cast<size_t>(k) * static_cast<size_t>(k), Polynomial(n));
  for (int i = 0; i < k; ++i)
    for (int j = i; j < k; ++j) {
      Polynomial dotp(n);
      for (int v = 0; v < n; ++v)
        dotp += grads[static_cast<size_t>(i)][static_cast<size_t>(v)] *
                grads[static_cast<size_t>(j)][static_cast<size_t>(v)];
      gram[static_cast<size_t>(i) * k + j] = dotp;
      gram[static_cast<size_t>(j) * k + i] = dotp;
    }

  // Symbolic determinant by cofactor expansion; k is at most n+1.
  auto det = [&](auto&& self, const std::vector<Polynomial>& M, int dim) -> Polynomial {
    if (dim == 1) return M[0];
    Polynomial acc(n);
    for (int r = 0; r < dim; ++r) {
      if (M[static_cast<size_t>(r) * dim].is_zero()) continue;
      std::vector<Polynomial> minor;
      minor.reserve(static_cast<size_t>(dim - 1) * static_cast<size_t>(dim - 1));
      for (int i = 0; i < dim; ++i) {
        if (i == r) continue;
        for (int j = 1; j < dim; ++j) minor.push_back(M[static_cast<size_t>(i) * dim + j]);
      }
      Polynomial term = M[static_cast<size_t>(r) * dim] * self(self, minor, dim - 1);
      acc = (r % 2 == 0) ? acc + term : acc - term;
    }
    return acc;
  };
  Polynomial delta = det(det, gram, k);

  std::set<int> in_nu(nu.begin(), nu.end());
  Polynomial result = delta;
  for (int j = 0; j < static_cast<int>(cs.inequalities.size()); ++j)
    if (!in_nu.count(j)) result = result * cs.inequalities[static_cast<size_t>(j)];
  return result;
}

std::vector<Polynomial> regular_case_constraints(const Polynomial& f, const ConstraintSet& cs) {
  const int n = f.nvars();
  const int n1 = static_cast<int>(cs.equalities.size());
  const int n2 = static_cast<int>(cs.inequalities.size());
  std::vector<Polynomial> out;
  if (n - n1 < 0) return out;
  const int kmax = std::min(n2, n - n1);
  // Enumerate subsets by size, lexicographically within a size.
  std::vector<int> nu;
  auto rec = [&](auto&& self, int start, int remaining) -> void {
    if (remaining == 0) {
      out.push_back(regular_case_constraint_for_subset(f, cs, nu));
      return;
    }
    for (int j = start; j <= n2 - remaining; ++j) {
      nu.push_back(j);
      self(self, j + 1, remaining - 1);
      nu.pop_back();
    }
  };
  for (int size = 0; size <= kmax; ++size) rec(rec, 0, size);
  return out;
}

std::vector<Polynomial> preordering_inequalities(const std::vector<Polynomial>& inequalities) {
  const int n2 = static_cast<int>(inequalities.size());
  if (n2 > 12) throw TooManyProducts("preordering: more than 12 inequalities");
  std::vector<Polynomial> out;
  if (n2 == 0) return out;
  for (unsigned mask = 1; mask < (1u << n2); ++mask) {
    Polynomial prod = Polynomial::constant(inequalities[0].nvars(), 1.0);
    for (int j = 0; j < n2; ++j)
      if (mask & (1u << j)) prod = prod * inequalities[static_cast<size_t>(j)];
    out.push_back(prod);
  }
  return out;
}

sdp::Problem to_sdp(const MomentRelaxation& rel) {
  sdp::Problem p;
  p.nvar = rel.p();
  p.c = Eigen::VectorXd::Zero(p.nvar);
  for (const auto& [id, c] : rel.objective.terms) p.c(id) += c;
  p.offset = rel.objective.c0;

  auto add_block = [&](const std::vector<MomentCombo>& entries, int size) {
    sdp::Block b;
    b.size = size;
    b.F0 = Eigen::MatrixXd::Zero(size, size);
    b.coeff.resize(static_cast<size_t>(p.nvar));
    for (int i = 0; i < size; ++i)
      for (int j = i; j < size; ++j) {
        const MomentCombo& e = entries[static_cast<size_t>(i) * size + j];
        if (e.c0 != 0.0) {
          b.F0(i, j) = -e.c0;
          b.F0(j, i) = -e.c0;
        }
        for (const auto& [id, c] : e.terms)
          b.coeff[static_cast<size_t>(id)].push_back({i, j, c});
      }
    p.blocks.push_back(std::move(b));
  };
  add_block(rel.moment_block, rel.s());
  for (const auto& loc : rel.localizers)
    add_block(loc.entries, static_cast<int>(loc.basis.size()));

  const int ne = static_cast<int>(rel.equality_rows.size());
  p.eqA = Eigen::MatrixXd::Zero(ne, p.nvar);
  p.eqb = Eigen::VectorXd::Zero(ne);
  for (int r = 0; r < ne; ++r) {
    p.eqb(r) = rel.equality_rows[static_cast<size_t>(r)].c0;
    for (const auto& [id, c] : rel.equality_rows[static_cast<size_t>(r)].terms)
      p.eqA(r, id) += c;
  }
  return p;
}

SdpSolution make_relaxation_solution(const MomentRelaxation& rel, const sdp::Solution& sol) {
  SdpSolution out;
  out.status = sol.status;
  out.f_mu = sol.primal_obj;
  out.dual_obj = sol.dual_obj;
  out.gap = sol.gap;
  out.iterations = sol.iterations;
  out.moments[Monomial(rel.nvars)] = 1.0;
  for (int i = 0; i < rel.p(); ++i)
    out.moments[rel.moments[static_cast<size_t>(i)]] = sol.x.size() > i ? sol.x(i) : 0.0;
  const int s = rel.s();
  out.moment_matrix = Eigen::MatrixXd::Zero(s, s);
  for (int i = 0; i < s; ++i)
    for (int j = 0; j < s; ++j) {
      const MomentCombo& e = rel.moment_entry(i, j);
      double v = e.c0;
      for (const auto& [id, c] : e.terms) v += c * (sol.x.size() > id ? sol.x(id) : 0.0);
      out.moment_matrix(i, j) = v;
    }
  out.block_values = sol.X;
  return out;
}

SdpSolution solve_relaxation(const MomentRelaxation& rel, const sdp::Options& opts) {
  sdp::Problem p = to_sdp(rel);
  sdp::Solution sol = sdp::solve(p, opts);
  return make_relaxation_solution(rel, sol);
}

void export_relaxation_sdpa(const MomentRelaxation& rel, const std::string& path) {
  sdp::export_sdpa(to_sdp(rel), path);
}

SdpSolution import_relaxation_solution(const MomentRelaxation& rel, const std::string& path) {
  sdp::Problem p = to_sdp(rel);
  sdp::Solution sol = sdp::import_sdpa_solution(p, path);
  return make_relaxation_solution(rel, sol);
}

}  // namespace polyopt
