#include "polyopt/polynomial.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace polyopt {

std::vector<Monomial> monomials_of_degree(int nvars, int d) {
  std::vector<Monomial> out;
  if (nvars == 0) {
    if (d == 0) out.emplace_back(0);
    return out;
  }
  std::vector<int> e(static_cast<size_t>(nvars), 0);
  // Lex-descending enumeration matches the graded tie-break.
  auto rec = [&](auto&& self, int var, int rem) -> void {
    if (var == nvars - 1) {
      e[static_cast<size_t>(var)] = rem;
      out.emplace_back(e);
      return;
    }
    for (int k = rem; k >= 0; --k) {
      e[static_cast<size_t>(var)] = k;
      self(self, var + 1, rem - k);
    }
    e[static_cast<size_t>(var)] = 0;
  };
  rec(rec, 0, d);
  return out;
}

std::vector<Monomial> monomials_up_to(int nvars, int d) {
  std::vector<Monomial> out;
  for (int k = 0; k <= d; ++k) {
    auto part = monomials_of_degree(nvars, k);
    out.insert(out.end(), part.begin(), part.end());
  }
  return out;
}

std::string mono_to_string(const Monomial& m, const std::vector<std::string>& names) {
  if (m.is_one()) return "1";
  std::ostringstream os;
  bool first = true;
  for (int i = 0; i < m.nvars(); ++i) {
    int e = m.exp[static_cast<size_t>(i)];
    if (e == 0) continue;
    if (!first) os << "*";
    first = false;
    if (i < static_cast<int>(names.size()))
      os << names[static_cast<size_t>(i)];
    else
      os << "x" << (i + 1);
    if (e > 1) os << "^" << e;
  }
  return os.str();
}

Polynomial Polynomial::constant(int nvars, double c) {
  Polynomial p(nvars);
  if (c != 0.0) p.terms_[Monomial(nvars)] = c;
  return p;
}

Polynomial Polynomial::variable(int nvars, int var) {
  Polynomial p(nvars);
  p.terms_[mono_var(nvars, var)] = 1.0;
  return p;
}

Polynomial Polynomial::monomial(const Monomial& m, double c) {
  Polynomial p(m.nvars());
  if (c != 0.0) p.terms_[m] = c;
  return p;
}

int Polynomial::degree() const {
  if (terms_.empty()) return 0;
  return terms_.rbegin()->first.degree();
}

double Polynomial::coeff(const Monomial& m) const {
  auto it = terms_.find(m);
  return it == terms_.end() ? 0.0 : it->second;
}

double Polynomial::max_abs_coeff() const {
  double m = 0.0;
  for (const auto& [mono, c] : terms_) m = std::max(m, std::abs(c));
  return m;
}

const Monomial& Polynomial::leading_monomial() const {
  if (terms_.empty()) throw Error("leading_monomial of zero polynomial");
  return terms_.rbegin()->first;
}

void Polynomial::add_term(const Monomial& m, double c) {
  if (m.nvars() != nvars_) throw DimensionMismatch("add_term: nvars mismatch");
  double& slot = terms_[m];
  slot += c;
  if (slot == 0.0) terms_.erase(m);
}

void Polynomial::prune(double scale) {
  const double thr = kDropRel * scale;
  for (auto it = terms_.begin(); it != terms_.end();) {
    if (std::abs(it->second) < thr || it->second == 0.0)
      it = terms_.erase(it);
    else
      ++it;
  }
}

Polynomial Polynomial::operator-() const {
  Polynomial r(nvars_);
  for (const auto& [m, c] : terms_) r.terms_[m] = -c;
  return r;
}

Polynomial Polynomial::operator+(const Polynomial& q) const {
  if (nvars_ != q.nvars_) throw DimensionMismatch("poly add: nvars mismatch");
  Polynomial r = *this;
  for (const auto& [m, c] : q.terms_) {
    double& slot = r.terms_[m];
    slot += c;
  }
  r.prune(std::max(max_abs_coeff(), q.max_abs_coeff()));
  return r;
}

Polynomial Polynomial::operator-(const Polynomial& q) const {
  if (nvars_ != q.nvars_) throw DimensionMismatch("poly sub: nvars mismatch");
  Polynomial r = *this;
  for (const auto& [m, c] : q.terms_) {
    double& slot = r.terms_[m];
    slot -= c;
  }
  r.prune(std::max(max_abs_coeff(), q.max_abs_coeff()));
  return r;
}

Polynomial Polynomial::operator*(const Polynomial& q) const {
  if (nvars_ != q.nvars_) throw DimensionMismatch("poly mul: nvars mismatch");
  Polynomial r(nvars_);
  for (const auto& [ma, ca] : terms_)
    for (const auto& [mb, cb] : q.terms_) {
      double& slot = r.terms_[mono_mul(ma, mb)];
      slot += ca * cb;
    }
  r.prune(std::max(max_abs_coeff(), q.max_abs_coeff()));
  return r;
}

Polynomial Polynomial::operator*(double s) const {
  Polynomial r(nvars_);
  if (s == 0.0) return r;
  for (const auto& [m, c] : terms_) r.terms_[m] = c * s;
  return r;
}

Polynomial Polynomial::differentiate(int var) const {
  if (var < 0 || var >= nvars_) throw DimensionMismatch("differentiate: bad variable index");
  Polynomial r(nvars_);
  for (const auto& [m, c] : terms_) {
    int e = m.exp[static_cast<size_t>(var)];
    if (e == 0) continue;
    Monomial d = m;
    d.exp[static_cast<size_t>(var)] = e - 1;
    r.terms_[d] = c * e;
  }
  return r;
}

double Polynomial::evaluate(const std::vector<double>& point) const {
  if (static_cast<int>(point.size()) != nvars_)
    throw DimensionMismatch("evaluate: point dimension mismatch");
  // Deterministic: terms iterated in graded order.
  double acc = 0.0;
  for (const auto& [m, c] : terms_) {
    double v = c;
    for (int i = 0; i < nvars_; ++i)
      for (int k = 0; k < m.exp[static_cast<size_t>(i)]; ++k) v *= point[static_cast<size_t>(i)];
    acc += v;
  }
  return acc;
}

std::string Polynomial::to_string(const std::vector<std::string>& names) const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  // Largest monomial first.
  for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
    double c = it->second;
    if (first) {
      if (c < 0) os << "-";
    } else {
      os << (c < 0 ? " - " : " + ");
    }
    double a = std::abs(c);
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", a);
    if (it->first.is_one()) {
      os << buf;
    } else {
      if (a != 1.0) os << buf << "*";
      os << mono_to_string(it->first, names);
    }
    first = false;
  }
  return os.str();
}

}  // namespace polyopt
