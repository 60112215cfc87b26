#include "bk/ramseries.hpp"

#include <sstream>
#include <stdexcept>

namespace bk {

RamSeries RamSeries::one(const Field& f, long long denom, long long cap) {
  RamSeries r(&f, denom, cap);
  r.add_term(0, f.one());
  return r;
}

RamSeries RamSeries::from_useries(const USeries& s, long long denom, long long cap) {
  RamSeries r(s.field(), denom, s.is_exact() ? cap : std::min(cap, s.cap() * denom));
  for (auto [e, c] : s.terms()) r.add_term(e * denom, c);
  return r;
}

void RamSeries::add_term(long long num, Elem c) {
  if (num >= cap_ || c.code == 0) return;
  auto [it, inserted] = terms_.emplace(num, c);
  if (!inserted) {
    it->second = f_->add(it->second, c);
    if (it->second.code == 0) terms_.erase(it);
  }
}

void RamSeries::clip() {
  terms_.erase(terms_.lower_bound(cap_), terms_.end());
}

long long RamSeries::valuation_numerator() const {
  if (terms_.empty()) throw PrecisionError("ramified series vanishes to its cap " + std::to_string(cap_));
  return terms_.begin()->first;
}

RamSeries RamSeries::operator-() const {
  RamSeries r = *this;
  for (auto& [e, c] : r.terms_) c = f_->neg(c);
  return r;
}

RamSeries operator+(const RamSeries& a, const RamSeries& b) {
  RamSeries r(a.f_ ? a.f_ : b.f_, a.denom_, std::min(a.cap_, b.cap_));
  for (auto [e, c] : a.terms_) r.add_term(e, c);
  for (auto [e, c] : b.terms_) r.add_term(e, c);
  return r;
}

RamSeries operator*(const RamSeries& a, const RamSeries& b) {
  const long long alow = a.terms_.empty() ? a.cap_ : a.terms_.begin()->first;
  const long long blow = b.terms_.empty() ? b.cap_ : b.terms_.begin()->first;
  RamSeries r(a.f_ ? a.f_ : b.f_, a.denom_, std::min(alow + b.cap_, blow + a.cap_));
  for (auto [ea, ca] : a.terms_) {
    for (auto [eb, cb] : b.terms_) {
      if (ea + eb >= r.cap_) break;
      r.add_term(ea + eb, r.f_->mul(ca, cb));
    }
  }
  return r;
}

RamSeries RamSeries::shifted(long long num) const {
  RamSeries r(f_, denom_, cap_ + num);
  for (auto [e, c] : terms_) r.terms_.emplace(e + num, c);
  return r;
}

RamSeries RamSeries::pow(long long e) const {
  if (e < 0) throw std::invalid_argument("negative power of a ramified series");
  RamSeries result = one(*f_, denom_, cap_);
  RamSeries base = *this;
  while (e > 0) {
    if (e & 1) result = result * base;
    e >>= 1;
    if (e) base = base * base;
  }
  return result;
}

std::string RamSeries::to_string() const {
  std::ostringstream os;
  for (auto [e, c] : terms_) os << f_->to_string(c) << "*u^(" << e << "/" << denom_ << ") + ";
  os << "O(u^(" << cap_ << "/" << denom_ << "))";
  return os.str();
}

long long p_adic_valuation(long long n, int p) {
  if (n == 0) throw std::invalid_argument("valuation of zero");
  long long v = 0;
  while (n % p == 0) {
    n /= p;
    ++v;
  }
  return v;
}

int binomial_mod_p(long long a_mod, long long k, int p) {
  // Small binomials mod p via Pascal rows.
  long long result = 1;
  while (k > 0) {
    const int ad = static_cast<int>(a_mod % p);
    const int kd = static_cast<int>(k % p);
    if (kd > ad) return 0;
    long long num = 1, den = 1;
    for (int i = 0; i < kd; ++i) {
      num = num * (ad - i) % p;
      den = den * (i + 1) % p;
    }
    long long inv = 1, b = den, e = p - 2;
    while (e > 0) {
      if (e & 1) inv = inv * b % p;
      b = b * b % p;
      e >>= 1;
    }
    result = result * num % p * inv % p;
    a_mod /= p;
    k /= p;
  }
  return static_cast<int>(result);
}

namespace {

long long w_numerator(int p, int m) {
  long long w = p;
  for (int i = 0; i < m; ++i) w *= p;
  return w;
}

// p^K > bound, K as large as fits comfortably.
long long modulus_above(long long bound, int p) {
  long long mod = p;
  while (mod <= bound) mod *= p;
  return mod;
}

long long inverse_mod(long long a, long long mod) {
  // Extended Euclid; a is a unit mod p^K.
  __int128 t = 0, newt = 1, r = mod, newr = ((a % mod) + mod) % mod;
  while (newr != 0) {
    __int128 q = r / newr;
    __int128 tmp = t - q * newt;
    t = newt;
    newt = tmp;
    tmp = r - q * newr;
    r = newr;
    newr = tmp;
  }
  if (r != 1) throw std::invalid_argument("not invertible");
  if (t < 0) t += mod;
  return static_cast<long long>(t);
}

}  // namespace

RamSeries eta_series(const Field& f, int p, int d, int m, long long cap) {
  const long long denom = p - 1;
  const long long wn = w_numerator(p, m);
  const long long kmax = cap / wn + 1;
  const long long mod = modulus_above(kmax, p);
  long long pd = 1;
  for (int i = 0; i < d; ++i) pd *= p;
  const long long a_mod = inverse_mod(pd - 1, mod);
  RamSeries r(&f, denom, cap);
  for (long long k = 0; k * wn < cap; ++k) {
    const int b = binomial_mod_p(a_mod, k, p);
    if (b != 0) r.add_term(k * wn, f.from_int(b));
  }
  return r;
}

RamSeries one_plus_w_power(const Field& f, int p, int m, long long n, long long cap) {
  const long long denom = p - 1;
  const long long wn = w_numerator(p, m);
  RamSeries r(&f, denom, cap);
  for (long long k = 0; k <= n && k * wn < cap; ++k) {
    const int b = binomial_mod_p(n, k, p);
    if (b != 0) r.add_term(k * wn, f.from_int(b));
  }
  return r;
}

}  // namespace bk
