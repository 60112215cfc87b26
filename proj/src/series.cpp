#include "bk/series.hpp"

#include <algorithm>
#include <cstdlib>
#include <sstream>

namespace bk {

namespace {

const Field* pick_field(const USeries& a, const USeries& b) { return a.field() ? a.field() : b.field(); }

long long add_caps(long long low, long long cap) {
  if (cap >= USeries::kExact || low >= USeries::kExact) return USeries::kExact;
  return low + cap;
}

}  // namespace

USeries USeries::monomial(const Field& f, Elem c, long long e) {
  USeries s(&f);
  if (!f.is_zero(c)) {
    s.start_ = e;
    s.c_ = {c};
  }
  return s;
}

USeries USeries::zero_mod(const Field& f, long long cap) {
  USeries s(&f);
  s.cap_ = std::min(cap, kExact);
  return s;
}

USeries USeries::from_coeffs(const Field& f, long long start, std::vector<Elem> c, long long cap) {
  USeries s(&f);
  s.start_ = start;
  s.c_ = std::move(c);
  s.cap_ = std::min(cap, kExact);
  s.normalize();
  return s;
}

void USeries::normalize() {
  if (cap_ < kExact) {
    const long long keep = cap_ - start_;
    if (keep <= 0) {
      c_.clear();
    } else if (static_cast<long long>(c_.size()) > keep) {
      c_.resize(static_cast<std::size_t>(keep));
    }
  }
  while (!c_.empty() && c_.back().code == 0) c_.pop_back();
  std::size_t lead = 0;
  while (lead < c_.size() && c_[lead].code == 0) ++lead;
  if (lead > 0) {
    c_.erase(c_.begin(), c_.begin() + static_cast<std::ptrdiff_t>(lead));
    start_ += static_cast<long long>(lead);
  }
  if (c_.empty()) start_ = 0;
}

Valuation USeries::valuation() const {
  if (!c_.empty()) return Valuation::of(start_);
  if (is_exact()) return Valuation::infinity();
  throw PrecisionError("valuation unknown: series vanishes to O(u^" + std::to_string(cap_) + ")");
}

Elem USeries::coeff(long long e) const {
  if (e >= cap_) throw PrecisionError("coefficient of u^" + std::to_string(e) + " beyond precision");
  if (c_.empty() || e < start_ || e > top()) return Elem{0};
  return c_[static_cast<std::size_t>(e - start_)];
}

std::vector<std::pair<long long, Elem>> USeries::terms() const {
  std::vector<std::pair<long long, Elem>> out;
  for (std::size_t i = 0; i < c_.size(); ++i)
    if (c_[i].code != 0) out.emplace_back(start_ + static_cast<long long>(i), c_[i]);
  return out;
}

USeries USeries::truncated(long long cap) const {
  USeries s = *this;
  s.cap_ = std::min(cap_, cap);
  s.normalize();
  return s;
}

USeries USeries::shifted(long long k) const {
  USeries s = *this;
  if (!s.c_.empty()) s.start_ += k;
  if (!is_exact()) s.cap_ += k;
  return s;
}

USeries USeries::scaled(Elem c) const {
  USeries s = *this;
  for (auto& x : s.c_) x = f_->mul(x, c);
  s.normalize();
  return s;
}

USeries USeries::phi(int p) const {
  USeries s(f_);
  if (!c_.empty()) {
    s.start_ = start_ * p;
    s.c_.assign((c_.size() - 1) * static_cast<std::size_t>(p) + 1, Elem{0});
    for (std::size_t i = 0; i < c_.size(); ++i) s.c_[i * static_cast<std::size_t>(p)] = c_[i];
  }
  s.cap_ = is_exact() ? kExact : cap_ * p;
  s.normalize();
  return s;
}

USeries USeries::polar_part() const {
  if (cap_ < 0) throw PrecisionError("polar part beyond precision");
  USeries s = *this;
  s.cap_ = kExact;
  if (!s.c_.empty()) {
    const long long keep = -start_;
    if (keep <= 0) s.c_.clear();
    else if (static_cast<long long>(s.c_.size()) > keep) s.c_.resize(static_cast<std::size_t>(keep));
  }
  s.normalize();
  return s;
}

USeries USeries::integral_part() const {
  USeries s = *this;
  if (!s.c_.empty() && s.start_ < 0) {
    const long long drop = std::min<long long>(-s.start_, static_cast<long long>(s.c_.size()));
    s.c_.erase(s.c_.begin(), s.c_.begin() + drop);
    s.start_ = 0;
  }
  s.normalize();
  return s;
}

USeries USeries::inverse(long long precision) const {
  if (c_.empty()) {
    if (is_exact()) throw std::domain_error("inverse of zero series");
    throw PrecisionError("inverse of a series known only as O(u^" + std::to_string(cap_) + ")");
  }
  const long long v = start_;
  if (c_.size() == 1 && is_exact()) return monomial(*f_, f_->inv(c_[0]), -v);
  long long rel = is_exact() ? precision : std::min(precision, cap_ - v);
  if (rel < 1) rel = 1;
  const Elem inv0 = f_->inv(c_[0]);
  std::vector<Elem> b(static_cast<std::size_t>(rel), Elem{0});
  b[0] = inv0;
  for (long long k = 1; k < rel; ++k) {
    Elem acc{0};
    const long long lim = std::min<long long>(k, static_cast<long long>(c_.size()) - 1);
    for (long long i = 1; i <= lim; ++i) {
      acc = f_->add(acc, f_->mul(c_[static_cast<std::size_t>(i)], b[static_cast<std::size_t>(k - i)]));
    }
    b[static_cast<std::size_t>(k)] = f_->neg(f_->mul(acc, inv0));
  }
  return from_coeffs(*f_, -v, std::move(b), -v + rel);
}

USeries USeries::operator-() const {
  USeries s = *this;
  for (auto& x : s.c_) x = f_->neg(x);
  return s;
}

USeries operator+(const USeries& a, const USeries& b) {
  const Field* f = pick_field(a, b);
  USeries s(f);
  s.cap_ = std::min(a.cap_, b.cap_);
  if (a.c_.empty() && b.c_.empty()) return s;
  if (a.c_.empty()) {
    s.start_ = b.start_;
    s.c_ = b.c_;
  } else if (b.c_.empty()) {
    s.start_ = a.start_;
    s.c_ = a.c_;
  } else {
    const long long lo = std::min(a.start_, b.start_);
    const long long hi = std::max(a.top(), b.top());
    s.start_ = lo;
    s.c_.assign(static_cast<std::size_t>(hi - lo + 1), Elem{0});
    for (std::size_t i = 0; i < a.c_.size(); ++i) s.c_[static_cast<std::size_t>(a.start_ - lo) + i] = a.c_[i];
    for (std::size_t i = 0; i < b.c_.size(); ++i) {
      auto& x = s.c_[static_cast<std::size_t>(b.start_ - lo) + i];
      x = f->add(x, b.c_[i]);
    }
  }
  s.normalize();
  return s;
}

USeries operator-(const USeries& a, const USeries& b) { return a + (-b); }

USeries operator*(const USeries& a, const USeries& b) {
  const Field* f = pick_field(a, b);
  USeries s(f);
  s.cap_ = std::min(add_caps(a.low(), b.cap_), add_caps(b.low(), a.cap_));
  if (a.c_.empty() || b.c_.empty()) {
    s.normalize();
    return s;
  }
  s.start_ = a.start_ + b.start_;
  // Only compute terms below the cap.
  long long len = static_cast<long long>(a.c_.size() + b.c_.size() - 1);
  if (s.cap_ < USeries::kExact) len = std::min(len, s.cap_ - s.start_);
  if (len <= 0) {
    s.c_.clear();
    s.normalize();
    return s;
  }
  s.c_.assign(static_cast<std::size_t>(len), Elem{0});
  for (std::size_t i = 0; i < a.c_.size() && static_cast<long long>(i) < len; ++i) {
    if (a.c_[i].code == 0) continue;
    for (std::size_t j = 0; j < b.c_.size() && static_cast<long long>(i + j) < len; ++j) {
      if (b.c_[j].code == 0) continue;
      s.c_[i + j] = f->add(s.c_[i + j], f->mul(a.c_[i], b.c_[j]));
    }
  }
  s.normalize();
  return s;
}

std::string USeries::to_string() const {
  std::ostringstream os;
  bool first = true;
  for (auto [e, c] : terms()) {
    if (!first) os << " + ";
    first = false;
    os << f_->to_string(c);
    if (e != 0) os << "*u^" << e;
  }
  if (!is_exact()) {
    if (!first) os << " + ";
    os << "O(u^" << cap_ << ")";
    first = false;
  }
  if (first) os << "0";
  return os.str();
}

UMatrix identity(const Field& f, std::size_t n) {
  UMatrix m(n, n, USeries(&f));
  for (std::size_t i = 0; i < n; ++i) m(i, i) = USeries::constant(f, f.one());
  return m;
}

UMatrix operator*(const UMatrix& a, const UMatrix& b) {
  if (a.cols() != b.rows()) throw std::invalid_argument("matrix shape mismatch");
  UMatrix out(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < b.cols(); ++j) {
      USeries acc;
      for (std::size_t k = 0; k < a.cols(); ++k) {
        if (a(i, k).is_exact_zero() || b(k, j).is_exact_zero()) continue;
        acc += a(i, k) * b(k, j);
      }
      out(i, j) = acc;
    }
  return out;
}

UMatrix operator+(const UMatrix& a, const UMatrix& b) {
  UMatrix out(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) out(i, j) = a(i, j) + b(i, j);
  return out;
}

UMatrix operator-(const UMatrix& a, const UMatrix& b) {
  UMatrix out(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) out(i, j) = a(i, j) - b(i, j);
  return out;
}

UVec operator*(const UMatrix& a, const UVec& v) {
  UVec out(a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    USeries acc;
    for (std::size_t k = 0; k < a.cols(); ++k) {
      if (a(i, k).is_exact_zero() || v[k].is_exact_zero()) continue;
      acc += a(i, k) * v[k];
    }
    out[i] = acc;
  }
  return out;
}

UMatrix phi(const UMatrix& a, int p) {
  return a.map([p](const USeries& s) { return s.phi(p); });
}

UVec phi(const UVec& v, int p) {
  UVec out;
  out.reserve(v.size());
  for (const auto& s : v) out.push_back(s.phi(p));
  return out;
}

UMatrix truncated(const UMatrix& a, long long cap) {
  return a.map([cap](const USeries& s) { return s.truncated(cap); });
}

UMatrix diagonal_monomials(const Field& f, const std::vector<long long>& exps) {
  UMatrix m(exps.size(), exps.size(), USeries(&f));
  for (std::size_t i = 0; i < exps.size(); ++i) m(i, i) = USeries::monomial(f, f.one(), exps[i]);
  return m;
}

namespace {

template <class Range>
Valuation min_valuation_of(const Range& entries) {
  Valuation best = Valuation::infinity();
  long long unknown_floor = USeries::kExact;
  for (const auto& s : entries) {
    if (!s.known_zero()) best = std::min(best, Valuation::of(s.start()));
    else if (!s.is_exact()) unknown_floor = std::min(unknown_floor, s.cap());
  }
  if (unknown_floor < USeries::kExact && (best.is_infinite() || unknown_floor <= best.value()))
    throw PrecisionError("minimum valuation hidden below O(u^" + std::to_string(unknown_floor) + ")");
  return best;
}

}  // namespace

Valuation min_valuation(const UMatrix& a) {
  std::vector<USeries> all;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) all.push_back(a(i, j));
  return min_valuation_of(all);
}

Valuation min_valuation(const UVec& v) { return min_valuation_of(v); }

bool is_integral(const UMatrix& a) {
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      if (!a(i, j).known_zero() && a(i, j).start() < 0) return false;
      else if (a(i, j).known_zero() && a(i, j).cap() <= 0) throw PrecisionError("integrality hidden by precision");
  return true;
}

bool is_integral(const UVec& v) {
  for (const auto& s : v)
    if (!s.known_zero() && s.start() < 0) return false;
    else if (s.known_zero() && s.cap() <= 0) throw PrecisionError("integrality hidden by precision");
  return true;
}

long long precision_hard_cap() {
  if (const char* env = std::getenv("BK_PRECISION_CAP")) {
    char* end = nullptr;
    long long v = std::strtoll(env, &end, 10);
    if (end != env && v > 0) return v;
  }
  return 4096;
}

long long default_precision(int p, std::size_t rank) { return 4LL * p * static_cast<long long>(rank); }

namespace {

template <class Attempt>
auto with_rising_precision(long long precision, Attempt attempt) {
  const long long cap = precision_hard_cap();
  long long n = std::max<long long>(precision, 1);
  for (;;) {
    try {
      return attempt(n);
    } catch (const PrecisionError&) {
      if (n >= cap) throw;
      n = std::min(cap, n * 2);
    }
  }
}

// Row k of `rows` swapped etc. Helpers on raw matrices.
void swap_rows(UMatrix& m, std::size_t a, std::size_t b) {
  if (a == b) return;
  for (std::size_t j = 0; j < m.cols(); ++j) std::swap(m(a, j), m(b, j));
}
void swap_cols(UMatrix& m, std::size_t a, std::size_t b) {
  if (a == b) return;
  for (std::size_t i = 0; i < m.rows(); ++i) std::swap(m(i, a), m(i, b));
}

SmithForm smith_attempt(const UMatrix& m, long long prec) {
  const std::size_t n = m.rows();
  const Field& f = *[&]() -> const Field* {
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (m(i, j).field()) return m(i, j).field();
    throw std::invalid_argument("matrix has no field");
  }();
  UMatrix a = m;
  UMatrix u = identity(f, n);
  UMatrix v = identity(f, n);
  std::vector<long long> exps;
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t pi = n, pj = n;
    long long best = USeries::kExact;
    long long hidden = USeries::kExact;
    for (std::size_t i = k; i < n; ++i)
      for (std::size_t j = k; j < n; ++j) {
        const USeries& s = a(i, j);
        if (!s.known_zero()) {
          if (s.start() < best) {
            best = s.start();
            pi = i;
            pj = j;
          }
        } else if (!s.is_exact()) {
          hidden = std::min(hidden, s.cap());
        }
      }
    if (pi == n) {
      if (hidden < USeries::kExact) throw PrecisionError("Smith pivot not visible at this precision");
      throw std::domain_error("matrix is singular");
    }
    if (hidden <= best) throw PrecisionError("Smith pivot not visible at this precision");
    if (best < 0) throw std::domain_error("Smith form over F[[u]] needs integral entries");
    swap_rows(a, k, pi);
    swap_rows(u, k, pi);
    swap_cols(a, k, pj);
    swap_cols(v, k, pj);
    const long long val = best;
    const USeries unit_inv = a(k, k).shifted(-val).inverse(prec);
    for (std::size_t j = 0; j < n; ++j) {
      a(k, j) = a(k, j) * unit_inv;
      u(k, j) = u(k, j) * unit_inv;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      if (a(i, k).is_exact_zero()) continue;
      const USeries c = a(i, k).shifted(-val);
      for (std::size_t j = 0; j < n; ++j) {
        a(i, j) -= c * a(k, j);
        u(i, j) -= c * u(k, j);
      }
    }
    for (std::size_t j = k + 1; j < n; ++j) {
      if (a(k, j).is_exact_zero()) continue;
      const USeries c = a(k, j).shifted(-val);
      for (std::size_t i = 0; i < n; ++i) {
        a(i, j) -= c * a(i, k);
        v(i, j) -= c * v(i, k);
      }
    }
    exps.push_back(val);
  }
  return SmithForm{std::move(u), std::move(v), std::move(exps)};
}

UMatrix inverse_attempt(const UMatrix& m, long long prec) {
  const std::size_t n = m.rows();
  if (m.cols() != n) throw std::invalid_argument("inverse of non-square matrix");
  const Field* fp = nullptr;
  for (std::size_t i = 0; i < n && !fp; ++i)
    for (std::size_t j = 0; j < n && !fp; ++j) fp = m(i, j).field();
  if (!fp) throw std::domain_error("matrix is singular");
  UMatrix a = m;
  UMatrix inv = identity(*fp, n);
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t pi = n;
    long long best = USeries::kExact;
    long long hidden = USeries::kExact;
    for (std::size_t i = k; i < n; ++i) {
      const USeries& s = a(i, k);
      if (!s.known_zero()) {
        if (s.start() < best) {
          best = s.start();
          pi = i;
        }
      } else if (!s.is_exact()) {
        hidden = std::min(hidden, s.cap());
      }
    }
    if (pi == n) {
      if (hidden < USeries::kExact) throw PrecisionError("pivot not visible at this precision");
      throw std::domain_error("matrix is singular");
    }
    if (hidden <= best) throw PrecisionError("pivot not visible at this precision");
    swap_rows(a, k, pi);
    swap_rows(inv, k, pi);
    const USeries pinv = a(k, k).inverse(prec);
    for (std::size_t j = 0; j < n; ++j) {
      a(k, j) = a(k, j) * pinv;
      inv(k, j) = inv(k, j) * pinv;
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (i == k || a(i, k).is_exact_zero()) continue;
      const USeries c = a(i, k);
      for (std::size_t j = 0; j < n; ++j) {
        a(i, j) -= c * a(k, j);
        inv(i, j) -= c * inv(k, j);
      }
    }
  }
  return inv;
}

}  // namespace

SmithForm smith_form_dvr(const UMatrix& m, long long precision) {
  if (m.rows() != m.cols()) throw std::invalid_argument("Smith form needs a square matrix");
  return with_rising_precision(precision, [&](long long n) { return smith_attempt(m, n); });
}

std::vector<long long> elementary_divisors(const UMatrix& m, long long precision) {
  return smith_form_dvr(m, precision).exponents;
}

UMatrix inverse(const UMatrix& a, long long precision) {
  return with_rising_precision(precision, [&](long long n) { return inverse_attempt(a, n); });
}

}  // namespace bk
