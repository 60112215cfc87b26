#pragma once

#include <climits>
#include <compare>
#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "bk/field.hpp"

namespace bk {

class PrecisionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// u-adic valuation with an explicit infinity.
class Valuation {
 public:
  static Valuation infinity() { return Valuation(0, true); }
  static Valuation of(long long v) { return Valuation(v, false); }

  bool is_infinite() const { return inf_; }
  long long value() const {
    if (inf_) throw std::logic_error("value of infinite valuation");
    return v_;
  }
  friend bool operator==(Valuation a, Valuation b) { return a.inf_ == b.inf_ && (a.inf_ || a.v_ == b.v_); }
  friend std::strong_ordering operator<=>(Valuation a, Valuation b) {
    if (a.inf_ || b.inf_) return a.inf_ <=> b.inf_;
    return a.v_ <=> b.v_;
  }
  std::string to_string() const { return inf_ ? "inf" : std::to_string(v_); }

 private:
  Valuation(long long v, bool inf) : v_(v), inf_(inf) {}
  long long v_;
  bool inf_;
};

// Truncated Laurent series in u over a finite field. Coefficients at
// exponents >= cap() are unknown; cap() == kExact marks a Laurent polynomial.
class USeries {
 public:
  static constexpr long long kExact = LLONG_MAX / 4;

  USeries() = default;
  explicit USeries(const Field* f) : f_(f) {}
  static USeries monomial(const Field& f, Elem c, long long e);
  static USeries constant(const Field& f, Elem c) { return monomial(f, c, 0); }
  static USeries zero_mod(const Field& f, long long cap);
  // Coefficients c[i] at exponent start + i.
  static USeries from_coeffs(const Field& f, long long start, std::vector<Elem> c, long long cap = kExact);

  const Field* field() const { return f_; }
  bool is_exact() const { return cap_ >= kExact; }
  long long cap() const { return cap_; }
  // True when every known coefficient vanishes (the series may still be
  // nonzero beyond the cap).
  bool known_zero() const { return c_.empty(); }
  bool is_exact_zero() const { return c_.empty() && is_exact(); }
  // Lowest exponent that could carry a nonzero coefficient.
  long long low() const { return c_.empty() ? cap_ : start_; }
  Valuation valuation() const;
  // Lowest and highest exponents of known nonzero terms.
  long long start() const { return start_; }
  long long top() const { return start_ + static_cast<long long>(c_.size()) - 1; }
  Elem coeff(long long e) const;
  // Nonzero terms, lowest first.
  std::vector<std::pair<long long, Elem>> terms() const;

  USeries truncated(long long cap) const;
  USeries shifted(long long k) const;  // times u^k
  USeries scaled(Elem c) const;
  USeries phi(int p) const;  // u -> u^p
  USeries polar_part() const;
  USeries integral_part() const;
  // Inverse, computing the unit part to relative precision `precision`.
  USeries inverse(long long precision) const;

  USeries operator-() const;
  friend USeries operator+(const USeries& a, const USeries& b);
  friend USeries operator-(const USeries& a, const USeries& b);
  friend USeries operator*(const USeries& a, const USeries& b);
  USeries& operator+=(const USeries& b) { return *this = *this + b; }
  USeries& operator-=(const USeries& b) { return *this = *this - b; }
  USeries& operator*=(const USeries& b) { return *this = *this * b; }
  friend bool operator==(const USeries& a, const USeries& b) {
    return a.cap_ == b.cap_ && a.c_ == b.c_ && (a.c_.empty() || a.start_ == b.start_);
  }

  std::string to_string() const;

 private:
  void normalize();
  const Field* f_ = nullptr;
  long long start_ = 0;
  std::vector<Elem> c_;
  long long cap_ = kExact;
};

// Dense row-major matrix.
template <class T>
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, const T& fill = T()) : r_(rows), c_(cols), d_(rows * cols, fill) {}
  std::size_t rows() const { return r_; }
  std::size_t cols() const { return c_; }
  T& operator()(std::size_t i, std::size_t j) { return d_[i * c_ + j]; }
  const T& operator()(std::size_t i, std::size_t j) const { return d_[i * c_ + j]; }
  std::vector<T> column(std::size_t j) const {
    std::vector<T> out(r_);
    for (std::size_t i = 0; i < r_; ++i) out[i] = (*this)(i, j);
    return out;
  }
  void set_column(std::size_t j, const std::vector<T>& v) {
    for (std::size_t i = 0; i < r_; ++i) (*this)(i, j) = v[i];
  }
  template <class F>
  auto map(F fn) const {
    Matrix<decltype(fn(std::declval<const T&>()))> out(r_, c_);
    for (std::size_t i = 0; i < r_; ++i)
      for (std::size_t j = 0; j < c_; ++j) out(i, j) = fn((*this)(i, j));
    return out;
  }
  friend bool operator==(const Matrix& a, const Matrix& b) = default;

 private:
  std::size_t r_ = 0;
  std::size_t c_ = 0;
  std::vector<T> d_;
};

using UMatrix = Matrix<USeries>;
using UVec = std::vector<USeries>;

UMatrix identity(const Field& f, std::size_t n);
UMatrix operator*(const UMatrix& a, const UMatrix& b);
UMatrix operator+(const UMatrix& a, const UMatrix& b);
UMatrix operator-(const UMatrix& a, const UMatrix& b);
UVec operator*(const UMatrix& a, const UVec& v);
UMatrix phi(const UMatrix& a, int p);
UVec phi(const UVec& v, int p);
UMatrix truncated(const UMatrix& a, long long cap);
UMatrix diagonal_monomials(const Field& f, const std::vector<long long>& exps);

// Minimum over known-nonzero entries; entries that are known zero with a
// finite cap make the result throw PrecisionError if they could matter.
Valuation min_valuation(const UMatrix& a);
Valuation min_valuation(const UVec& v);
bool is_integral(const UMatrix& a);
bool is_integral(const UVec& v);

// Inverse by Gauss-Jordan with minimum-valuation pivots.
UMatrix inverse(const UMatrix& a, long long precision);

struct SmithForm {
  UMatrix left;   // U
  UMatrix right;  // V
  std::vector<long long> exponents;  // U * m * V = diag(u^e), e increasing
};

// Smith form over F[[u]] for an invertible square matrix with integral
// entries. Unit inverses are computed to `precision` digits; if that is not
// enough to see a pivot, precision is raised up to the hard cap (env var
// BK_PRECISION_CAP, default 4096) before PrecisionError is thrown.
SmithForm smith_form_dvr(const UMatrix& m, long long precision);
std::vector<long long> elementary_divisors(const UMatrix& m, long long precision);

long long precision_hard_cap();
long long default_precision(int p, std::size_t rank);

}  // namespace bk
