#pragma once

#include <map>
#include <string>

#include "bk/field.hpp"
#include "bk/series.hpp"

namespace bk {

// Series in u^{1/N} over F, N = p - 1, truncated below a numerator cap.
// Exponents are stored as numerators over N.
class RamSeries {
 public:
  RamSeries(const Field* f, long long denom, long long cap) : f_(f), denom_(denom), cap_(cap) {}
  static RamSeries one(const Field& f, long long denom, long long cap);
  // Embeds a Laurent polynomial in u (exponent e goes to numerator e*N).
  static RamSeries from_useries(const USeries& s, long long denom, long long cap);

  long long denominator() const { return denom_; }
  long long cap() const { return cap_; }
  const std::map<long long, Elem>& terms() const { return terms_; }
  bool known_zero() const { return terms_.empty(); }
  // Numerator of the valuation; PrecisionError if nothing is known.
  long long valuation_numerator() const;
  void add_term(long long num, Elem c);

  RamSeries operator-() const;
  friend RamSeries operator+(const RamSeries& a, const RamSeries& b);
  friend RamSeries operator-(const RamSeries& a, const RamSeries& b) { return a + (-b); }
  friend RamSeries operator*(const RamSeries& a, const RamSeries& b);
  RamSeries shifted(long long num) const;  // times u^{num/N}
  RamSeries pow(long long e) const;

  std::string to_string() const;

 private:
  void clip();
  const Field* f_;
  long long denom_;
  long long cap_;
  std::map<long long, Elem> terms_;
};

// Lucas' theorem: binom(a, k) mod p from the base-p digits of a and k,
// where a is given modulo a power of p that exceeds k.
int binomial_mod_p(long long a_mod, long long k, int p);

// eta = (1 + w)^{1/(p^d - 1)}, w = u^{p^{1+m}/(p-1)}, truncated below the
// numerator cap.
RamSeries eta_series(const Field& f, int p, int d, int m, long long cap);

// (1 + w)^n for an integer n >= 0.
RamSeries one_plus_w_power(const Field& f, int p, int m, long long n, long long cap);

long long p_adic_valuation(long long n, int p);

}  // namespace bk
