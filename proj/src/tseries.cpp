#include "bk/tseries.hpp"

#include <algorithm>

namespace bk {

TPoly::TPoly(const Field* f, std::vector<Elem> c) : f_(f), c_(std::move(c)) { trim(); }

TPoly TPoly::t_power(const Field& f, Elem c, int deg) {
  std::vector<Elem> v(static_cast<std::size_t>(deg) + 1, Elem{0});
  v[static_cast<std::size_t>(deg)] = c;
  return TPoly(&f, std::move(v));
}

void TPoly::trim() {
  while (!c_.empty() && c_.back().code == 0) c_.pop_back();
}

Elem TPoly::eval(Elem t) const {
  Elem acc{0};
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = f_->add(f_->mul(acc, t), *it);
  return acc;
}

Elem TPoly::eval(Elem t, const Embedding& emb) const {
  const Field& g = *emb.target();
  Elem acc{0};
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = g.add(g.mul(acc, t), emb(*it));
  return acc;
}

TPoly TPoly::operator-() const {
  TPoly r = *this;
  for (auto& x : r.c_) x = f_->neg(x);
  return r;
}

TPoly operator+(const TPoly& a, const TPoly& b) {
  const Field* f = a.f_ ? a.f_ : b.f_;
  std::vector<Elem> c(std::max(a.c_.size(), b.c_.size()), Elem{0});
  for (std::size_t i = 0; i < a.c_.size(); ++i) c[i] = a.c_[i];
  for (std::size_t i = 0; i < b.c_.size(); ++i) c[i] = f->add(c[i], b.c_[i]);
  return TPoly(f, std::move(c));
}

TPoly operator*(const TPoly& a, const TPoly& b) {
  const Field* f = a.f_ ? a.f_ : b.f_;
  if (a.c_.empty() || b.c_.empty()) return TPoly(f, {});
  std::vector<Elem> c(a.c_.size() + b.c_.size() - 1, Elem{0});
  for (std::size_t i = 0; i < a.c_.size(); ++i)
    for (std::size_t j = 0; j < b.c_.size(); ++j) c[i + j] = f->add(c[i + j], f->mul(a.c_[i], b.c_[j]));
  return TPoly(f, std::move(c));
}

TSeries TSeries::monomial(const Field& f, const TPoly& c, long long e) {
  TSeries s(&f);
  if (!c.is_zero()) s.terms_.emplace(e, c);
  return s;
}

TSeries TSeries::from_useries(const USeries& s) {
  if (!s.is_exact()) throw FamilyError("family entries must be exact Laurent polynomials");
  TSeries out(s.field());
  for (auto [e, c] : s.terms()) out.terms_.emplace(e, TPoly::constant(*s.field(), c));
  return out;
}

std::optional<long long> TSeries::valuation() const {
  if (terms_.empty()) return std::nullopt;
  return terms_.begin()->first;
}

TPoly TSeries::coeff(long long e) const {
  auto it = terms_.find(e);
  return it == terms_.end() ? TPoly(f_, {}) : it->second;
}

TSeries TSeries::phi(int p) const {
  TSeries out(f_);
  for (const auto& [e, c] : terms_) out.terms_.emplace(e * p, c);
  return out;
}

TSeries TSeries::shifted(long long k) const {
  TSeries out(f_);
  for (const auto& [e, c] : terms_) out.terms_.emplace(e + k, c);
  return out;
}

USeries TSeries::eval(Elem t) const {
  USeries out(f_);
  for (const auto& [e, c] : terms_) out += USeries::monomial(*f_, c.eval(t), e);
  return out;
}

USeries TSeries::eval(Elem t, const Embedding& emb) const {
  const Field& g = *emb.target();
  USeries out(&g);
  for (const auto& [e, c] : terms_) out += USeries::monomial(g, c.eval(t, emb), e);
  return out;
}

TSeries TSeries::operator-() const {
  TSeries out(f_);
  for (const auto& [e, c] : terms_) out.terms_.emplace(e, -c);
  return out;
}

TSeries operator+(const TSeries& a, const TSeries& b) {
  TSeries out(a.f_ ? a.f_ : b.f_);
  out.terms_ = a.terms_;
  for (const auto& [e, c] : b.terms_) {
    auto it = out.terms_.find(e);
    if (it == out.terms_.end()) {
      out.terms_.emplace(e, c);
    } else {
      it->second = it->second + c;
      if (it->second.is_zero()) out.terms_.erase(it);
    }
  }
  return out;
}

TSeries operator*(const TSeries& a, const TSeries& b) {
  TSeries out(a.f_ ? a.f_ : b.f_);
  for (const auto& [ea, ca] : a.terms_)
    for (const auto& [eb, cb] : b.terms_) out += TSeries::monomial(*out.f_, ca * cb, ea + eb);
  return out;
}

TMatrix operator*(const TMatrix& a, const TMatrix& b) {
  TMatrix out(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < b.cols(); ++j) {
      TSeries acc;
      for (std::size_t k = 0; k < a.cols(); ++k) {
        if (a(i, k).is_zero() || b(k, j).is_zero()) continue;
        acc += a(i, k) * b(k, j);
      }
      out(i, j) = acc;
    }
  return out;
}

TVec operator*(const TMatrix& a, const TVec& v) {
  TVec out(a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    TSeries acc;
    for (std::size_t k = 0; k < a.cols(); ++k) {
      if (a(i, k).is_zero() || v[k].is_zero()) continue;
      acc += a(i, k) * v[k];
    }
    out[i] = acc;
  }
  return out;
}

TMatrix tphi(const TMatrix& a, int p) {
  return a.map([p](const TSeries& s) { return s.phi(p); });
}

TMatrix to_tmatrix(const UMatrix& m) {
  return m.map([](const USeries& s) { return TSeries::from_useries(s); });
}

namespace {

struct Elimination {
  TMatrix inverse;
  Elem det_coeff;
  long long det_exp = 0;
};

Elimination eliminate(const TMatrix& m) {
  const std::size_t n = m.rows();
  if (m.cols() != n) throw FamilyError("family basis must be square");
  const Field* f = nullptr;
  for (std::size_t i = 0; i < n && !f; ++i)
    for (std::size_t j = 0; j < n && !f; ++j) f = m(i, j).field();
  if (!f) throw FamilyError("family basis is zero");
  TMatrix a = m;
  TMatrix inv(n, n, TSeries(f));
  for (std::size_t i = 0; i < n; ++i) inv(i, i) = TSeries::monomial(*f, TPoly::constant(*f, f->one()), 0);
  Elem det = f->one();
  long long det_exp = 0;
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t pi = n;
    long long best = 0;
    for (std::size_t i = k; i < n; ++i) {
      const TSeries& s = a(i, k);
      if (s.is_monomial() && s.terms().begin()->second.is_unit()) {
        const long long e = s.terms().begin()->first;
        if (pi == n || e < best) {
          pi = i;
          best = e;
        }
      }
    }
    if (pi == n) throw FamilyError("no pivot of the form c*u^e in column " + std::to_string(k));
    if (pi != k) {
      for (std::size_t j = 0; j < n; ++j) {
        std::swap(a(k, j), a(pi, j));
        std::swap(inv(k, j), inv(pi, j));
      }
      det = f->neg(det);
    }
    const Elem c = a(k, k).terms().begin()->second.coeffs()[0];
    det = f->mul(det, c);
    det_exp += best;
    const TSeries pinv = TSeries::monomial(*f, TPoly::constant(*f, f->inv(c)), -best);
    for (std::size_t j = 0; j < n; ++j) {
      a(k, j) = a(k, j) * pinv;
      inv(k, j) = inv(k, j) * pinv;
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (i == k || a(i, k).is_zero()) continue;
      const TSeries factor = a(i, k);
      for (std::size_t j = 0; j < n; ++j) {
        a(i, j) -= factor * a(k, j);
        inv(i, j) -= factor * inv(k, j);
      }
    }
  }
  return Elimination{std::move(inv), det, det_exp};
}

}  // namespace

TMatrix tinverse(const TMatrix& a) { return eliminate(a).inverse; }

std::optional<std::pair<Elem, long long>> monomial_determinant(const TMatrix& a) {
  try {
    auto e = eliminate(a);
    return std::make_pair(e.det_coeff, e.det_exp);
  } catch (const FamilyError&) {
    return std::nullopt;
  }
}

}  // namespace bk
