#include "doctest.h"

#include "bk/lattice.hpp"
#include "bk/series.hpp"
#include "support.hpp"

using namespace bk;
using bk::testing::mono;
using bk::testing::random_int;
using bk::testing::random_poly;

namespace {

// Naive product of two exact Laurent polynomials from their term lists.
USeries naive_product(const Field& f, const USeries& a, const USeries& b) {
  USeries out(&f);
  for (auto [ea, ca] : a.terms())
    for (auto [eb, cb] : b.terms()) out += USeries::monomial(f, f.mul(ca, cb), ea + eb);
  return out;
}

// Valuation of det for 2x2 and 3x3 by cofactor expansion.
USeries det(const UMatrix& m) {
  if (m.rows() == 1) return m(0, 0);
  if (m.rows() == 2) return m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
  return m(0, 0) * (m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1)) - m(0, 1) * (m(1, 0) * m(2, 2) - m(1, 2) * m(2, 0)) +
         m(0, 2) * (m(1, 0) * m(2, 1) - m(1, 1) * m(2, 0));
}

UMatrix random_integral_matrix(const Field& f, std::size_t n, int maxdeg) {
  UMatrix m(n, n, USeries(&f));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) m(i, j) = random_poly(f, 0, maxdeg, 0.4);
  return m;
}

}  // namespace

TEST_CASE("valuation has an explicit infinity") {
  CHECK(Valuation::infinity() > Valuation::of(1000000));
  CHECK(Valuation::of(2) < Valuation::of(3));
  const Field& f = *get_field(3, 1);
  CHECK(USeries(&f).valuation().is_infinite());
  CHECK_THROWS_AS(USeries::zero_mod(f, 5).valuation(), PrecisionError);
  CHECK(mono(f, 2, -3).valuation() == Valuation::of(-3));
}

TEST_CASE("series products and inverses") {
  const Field& f = *get_field(5, 2);
  for (int trial = 0; trial < 100; ++trial) {
    const USeries a = random_poly(f, -3, 6), b = random_poly(f, -2, 4);
    CHECK(a * b == naive_product(f, a, b));
    CHECK((a + b) - b == a);
    if (!a.known_zero()) {
      const USeries inv = a.inverse(20);
      const USeries prod = a * inv;
      CHECK(prod.cap() == 20);
      CHECK(prod == USeries::constant(f, f.one()).truncated(20));
    }
  }
  // Monomials invert exactly.
  CHECK(mono(f, 3, 4).inverse(5).is_exact());
}

TEST_CASE("phi raises exponents and precision") {
  const Field& f = *get_field(3, 1);
  const USeries s = (mono(f, 1, -1) + mono(f, 2, 2)).truncated(4);
  const USeries t = s.phi(3);
  CHECK(t.cap() == 12);
  CHECK(t.coeff(-3) == f.one());
  CHECK(t.coeff(6) == f.from_int(2));
  CHECK(t.coeff(0) == f.zero());
  CHECK_THROWS_AS(t.coeff(12), PrecisionError);
}

TEST_CASE("Smith form recomposes and matches determinant valuations") {
  const Field& f = *get_field(3, 1);
  int tested = 0;
  for (int trial = 0; trial < 200 && tested < 60; ++trial) {
    const std::size_t n = static_cast<std::size_t>(random_int(1, 3));
    const UMatrix m = random_integral_matrix(f, n, 4);
    const USeries d = det(m);
    if (d.known_zero()) continue;
    ++tested;
    const SmithForm s = smith_form_dvr(m, 24);
    long long total = 0;
    for (auto e : s.exponents) total += e;
    CHECK(total == d.valuation().value());
    CHECK(s.exponents.front() == min_valuation(m).value());
    for (std::size_t i = 1; i < n; ++i) CHECK(s.exponents[i - 1] <= s.exponents[i]);
    const UMatrix diag = s.left * m * s.right;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        const USeries expect = i == j ? USeries::monomial(f, f.one(), s.exponents[i]) : USeries(&f);
        CHECK((diag(i, j) - expect).known_zero());
        CHECK(diag(i, j).cap() >= 12);
      }
  }
  CHECK(tested >= 30);
}

TEST_CASE("Smith form raises precision on demand") {
  const Field& f = *get_field(2, 1);
  // Unit with a long tail forces more digits than requested.
  UMatrix m(2, 2, USeries(&f));
  m(0, 0) = mono(f, 1, 0) + mono(f, 1, 1);
  m(0, 1) = mono(f, 1, 0) + mono(f, 1, 1);
  m(1, 0) = mono(f, 1, 0);
  m(1, 1) = mono(f, 1, 0) + mono(f, 1, 40);
  CHECK(elementary_divisors(m, 2) == std::vector<long long>{0, 40});
}

TEST_CASE("singular matrices are reported") {
  const Field& f = *get_field(3, 1);
  UMatrix m(2, 2, USeries(&f));
  m(0, 0) = mono(f, 1, 0);
  m(0, 1) = mono(f, 1, 0);
  m(1, 0) = mono(f, 1, 0);
  m(1, 1) = mono(f, 1, 0);
  CHECK_THROWS_AS(smith_form_dvr(m, 8), std::domain_error);
}

TEST_CASE("matrix inverse") {
  const Field& f = *get_field(5, 1);
  for (int trial = 0; trial < 40; ++trial) {
    UMatrix m(2, 2, USeries(&f));
    for (std::size_t i = 0; i < 2; ++i)
      for (std::size_t j = 0; j < 2; ++j) m(i, j) = random_poly(f, -2, 3, 0.5);
    if (det(m).known_zero()) continue;
    const UMatrix prod = m * inverse(m, 30);
    for (std::size_t i = 0; i < 2; ++i)
      for (std::size_t j = 0; j < 2; ++j) {
        const USeries expect = i == j ? mono(f, 1, 0) : USeries(&f);
        CHECK((prod(i, j) - expect).known_zero());
        CHECK(prod(i, j).cap() >= 20);
      }
  }
}

TEST_CASE("lattice Hermite basis is canonical") {
  const Field& f = *get_field(3, 1);
  for (int trial = 0; trial < 60; ++trial) {
    const std::size_t n = static_cast<std::size_t>(random_int(1, 3));
    std::vector<UVec> gens;
    const int count = random_int(static_cast<int>(n), static_cast<int>(n) + 2);
    for (int g = 0; g < count; ++g) {
      UVec v(n, USeries(&f));
      for (auto& s : v) s = random_poly(f, -1, 3, 0.5);
      gens.push_back(v);
    }
    // Make sure the generators have full rank by adding u^4 e_i.
    for (std::size_t i = 0; i < n; ++i) {
      UVec v(n, USeries(&f));
      v[i] = mono(f, 1, 4);
      gens.push_back(v);
    }
    const Lattice a = Lattice::from_generators(f, n, gens);
    // Shuffle and recombine the generators: same lattice.
    std::vector<UVec> mixed = gens;
    std::shuffle(mixed.begin(), mixed.end(), bk::testing::rng());
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t k = 0; k < n; ++k) mixed[0][k] += mixed[1 + (i % (mixed.size() - 1))][k] * mono(f, 1, 1);
    const Lattice b = Lattice::from_generators(f, n, mixed);
    CHECK(a == b);
    for (const auto& g : gens) CHECK(a.contains(g));
    // Hermite shape.
    for (std::size_t j = 0; j < n; ++j) {
      CHECK(a.basis()(j, j) == USeries::monomial(f, f.one(), a.diagonal()[j]));
      for (std::size_t i = 0; i < j; ++i) CHECK(a.basis()(i, j).is_exact_zero());
    }
    // u^{low-1} e_0 is never inside.
    UVec outside(n, USeries(&f));
    outside[0] = mono(f, 1, a.low() - 1);
    CHECK_FALSE(a.contains(outside));
  }
}

TEST_CASE("lattice membership against the window oracle") {
  const Field& f = *get_field(2, 1);
  // L = <e0 + e1, u e0> in F[[u]]^2.
  std::vector<UVec> gens = {{mono(f, 1, 0), mono(f, 1, 0)}, {mono(f, 1, 1), USeries(&f)}};
  const Lattice l = Lattice::from_generators(f, 2, gens);
  CHECK(l.diagonal() == std::vector<long long>{0, 1});
  CHECK(l.contains(UVec{mono(f, 1, 1), USeries(&f)}));
  CHECK(l.contains(UVec{USeries(&f), mono(f, 1, 1)}));
  CHECK_FALSE(l.contains(UVec{mono(f, 1, 0), USeries(&f)}));
  CHECK(l.contains(UVec{mono(f, 1, 0) + mono(f, 1, 3), mono(f, 1, 0)}));
  CHECK(Lattice::standard(f, 2).contains(l));
  CHECK_FALSE(l.contains(Lattice::standard(f, 2)));
}
