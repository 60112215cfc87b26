#pragma once

#include <random>
#include <vector>

#include "bk/field.hpp"
#include "bk/series.hpp"

namespace bk::testing {

inline std::mt19937_64& rng() {
  static std::mt19937_64 gen(20260415);
  return gen;
}

inline Elem random_elem(const Field& f, bool nonzero = false) {
  std::uniform_int_distribution<std::uint32_t> d(nonzero ? 1 : 0, f.size() - 1);
  return Elem{d(rng())};
}

inline int random_int(int lo, int hi) {
  std::uniform_int_distribution<int> d(lo, hi);
  return d(rng());
}

// Random exact Laurent polynomial with exponents in [lo, hi].
inline USeries random_poly(const Field& f, long long lo, long long hi, double density = 0.6) {
  std::bernoulli_distribution keep(density);
  USeries s(&f);
  for (long long e = lo; e <= hi; ++e)
    if (keep(rng())) s += USeries::monomial(f, random_elem(f, true), e);
  return s;
}

inline USeries mono(const Field& f, long long c, long long e) { return USeries::monomial(f, f.from_int(c), e); }

}  // namespace bk::testing
