#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "bk/field.hpp"
#include "bk/series.hpp"

namespace bk {

// Polynomial in T over F, low degree first, no trailing zeros.
class TPoly {
 public:
  TPoly() = default;
  TPoly(const Field* f, std::vector<Elem> c);
  static TPoly constant(const Field& f, Elem c) { return TPoly(&f, {c}); }
  static TPoly t_power(const Field& f, Elem c, int deg);

  bool is_zero() const { return c_.empty(); }
  int degree() const { return static_cast<int>(c_.size()) - 1; }
  // Nonzero element of F, i.e. a unit of F[T].
  bool is_unit() const { return c_.size() == 1; }
  const std::vector<Elem>& coeffs() const { return c_; }
  const Field* field() const { return f_; }
  Elem eval(Elem t) const;  // t in F
  Elem eval(Elem t, const Embedding& emb) const;  // t in an extension

  TPoly operator-() const;
  friend TPoly operator+(const TPoly& a, const TPoly& b);
  friend TPoly operator-(const TPoly& a, const TPoly& b) { return a + (-b); }
  friend TPoly operator*(const TPoly& a, const TPoly& b);
  friend bool operator==(const TPoly& a, const TPoly& b) { return a.c_ == b.c_; }

 private:
  void trim();
  const Field* f_ = nullptr;
  std::vector<Elem> c_;
};

// Laurent polynomial in u with coefficients in F[T]. Families of lattices
// are polynomial in T and u, so no truncation is needed here.
class TSeries {
 public:
  TSeries() = default;
  explicit TSeries(const Field* f) : f_(f) {}
  static TSeries monomial(const Field& f, const TPoly& c, long long e);
  static TSeries from_useries(const USeries& s);

  bool is_zero() const { return terms_.empty(); }
  const Field* field() const { return f_; }
  const std::map<long long, TPoly>& terms() const { return terms_; }
  // Lowest exponent, or nullopt for zero.
  std::optional<long long> valuation() const;
  TPoly coeff(long long e) const;
  bool is_monomial() const { return terms_.size() == 1; }

  TSeries phi(int p) const;
  TSeries shifted(long long k) const;
  USeries eval(Elem t) const;
  USeries eval(Elem t, const Embedding& emb) const;

  TSeries operator-() const;
  friend TSeries operator+(const TSeries& a, const TSeries& b);
  friend TSeries operator-(const TSeries& a, const TSeries& b) { return a + (-b); }
  friend TSeries operator*(const TSeries& a, const TSeries& b);
  TSeries& operator+=(const TSeries& b) { return *this = *this + b; }
  TSeries& operator-=(const TSeries& b) { return *this = *this - b; }
  friend bool operator==(const TSeries& a, const TSeries& b) { return a.terms_ == b.terms_; }

 private:
  const Field* f_ = nullptr;
  std::map<long long, TPoly> terms_;
};

using TMatrix = Matrix<TSeries>;
using TVec = std::vector<TSeries>;

TMatrix operator*(const TMatrix& a, const TMatrix& b);
TVec operator*(const TMatrix& a, const TVec& v);
TMatrix tphi(const TMatrix& a, int p);
TMatrix to_tmatrix(const UMatrix& m);

class FamilyError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Inverse over F[T][u, 1/u] by Gauss-Jordan, using only pivots of the form
// c u^e with c in F^x. Throws FamilyError if no such pivot is available.
TMatrix tinverse(const TMatrix& a);
// Determinant, when elimination with such pivots succeeds; it is then a
// monomial c u^e with c in F^x.
std::optional<std::pair<Elem, long long>> monomial_determinant(const TMatrix& a);

}  // namespace bk
