#include "bk/tangent.hpp"

#include <stdexcept>

#include "bk/linalg.hpp"

namespace bk {

namespace {

struct Layout {
  std::size_t n;
  int degrees;  // D + 1 coefficients per entry, degrees -D..0
  int pole_bound;
  std::size_t index(int tau, std::size_t i, std::size_t j, int d) const {
    return ((static_cast<std::size_t>(tau) * n + i) * n + j) * static_cast<std::size_t>(degrees) +
           static_cast<std::size_t>(d + pole_bound);
  }
};

TangentReport solve_at(const BKModule& m, int pole_bound, long long prec) {
  const Field& f = m.field();
  const int p = m.tower.p;
  const int h = m.blocks();
  const std::size_t n = m.rank;
  const Layout lay{n, pole_bound + 1, pole_bound};
  const std::size_t unknowns = static_cast<std::size_t>(h) * n * n * static_cast<std::size_t>(lay.degrees);
  const long long lowest = -static_cast<long long>(p) * (pole_bound + 1);

  std::vector<FVec> eqs;
  for (int tau = 0; tau < h; ++tau) {
    const int src = (tau + 1) % h;
    const UMatrix& a = m.frobenius[tau];
    const UMatrix ainv = inverse(a, prec);
    // prod(i,k,l,j) = A(i,k) A^{-1}(l,j)
    std::vector<USeries> prod(n * n * n * n, USeries(&f));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t k = 0; k < n; ++k)
        for (std::size_t l = 0; l < n; ++l)
          for (std::size_t j = 0; j < n; ++j) prod[((i * n + k) * n + l) * n + j] = a(i, k) * ainv(l, j);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        for (long long e = lowest; e < 0; ++e) {
          FVec row(unknowns, f.zero());
          for (std::size_t k = 0; k < n; ++k)
            for (std::size_t l = 0; l < n; ++l) {
              const USeries& s = prod[((i * n + k) * n + l) * n + j];
              for (int d = -pole_bound; d <= 0; ++d)
                row[lay.index(src, k, l, d)] = f.add(row[lay.index(src, k, l, d)], s.coeff(e - static_cast<long long>(p) * d));
            }
          if (e >= -pole_bound) {
            auto& x = row[lay.index(tau, i, j, static_cast<int>(e))];
            x = f.sub(x, f.one());
          }
          eqs.push_back(std::move(row));
        }
  }
  const std::vector<FVec> sols = nullspace(f, eqs, unknowns);

  // Project onto polar coordinates.
  RowSpace polar(f, unknowns);
  for (FVec v : sols) {
    for (int tau = 0; tau < h; ++tau)
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) v[lay.index(tau, i, j, 0)] = f.zero();
    polar.insert(std::move(v));
  }
  TangentReport out;
  out.pole_bound = pole_bound;
  out.non_integral_dim = polar.dim();
  out.fiber_point_reduced = polar.dim() == 0;
  for (const auto& v : polar.rows()) {
    std::vector<UMatrix> x;
    for (int tau = 0; tau < h; ++tau) {
      UMatrix xt(n, n, USeries(&f));
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
          for (int d = -pole_bound; d < 0; ++d)
            if (!f.is_zero(v[lay.index(tau, i, j, d)])) xt(i, j) += USeries::monomial(f, v[lay.index(tau, i, j, d)], d);
      x.push_back(std::move(xt));
    }
    out.polar_basis.push_back(std::move(x));
  }
  return out;
}

}  // namespace

TangentReport solve_tangent(const BKModule& m, int pole_bound, long long precision) {
  validate(m);
  const int p = m.tower.p;
  if (pole_bound == 0) pole_bound = p;
  if (pole_bound < 1) throw std::invalid_argument("pole bound must be at least 1");
  if (!check_height(m, p, precision)) throw std::domain_error("solve_tangent needs height <= p");
  long long prec = std::max(precision, static_cast<long long>(p) * (pole_bound + 3));
  for (;;) {
    try {
      return solve_at(m, pole_bound, prec);
    } catch (const PrecisionError&) {
      if (prec >= precision_hard_cap()) throw;
      prec = std::min(2 * prec, precision_hard_cap());
    }
  }
}

bool verify_tangent_solution(const BKModule& m, const std::vector<UMatrix>& x, long long precision) {
  validate(m);
  const int p = m.tower.p;
  const int h = m.blocks();
  const long long prec = std::max(precision, 4LL * p * (p + 2));
  for (int tau = 0; tau < h; ++tau) {
    const UMatrix& a = m.frobenius[tau];
    // Only the polar part is tested; the integral part of X never produces
    // poles, so truncating the conjugate at degree 0 is enough.
    const UMatrix diff = truncated(a * phi(x[(tau + 1) % h], p) * inverse(a, prec), 0) - x[tau];
    for (std::size_t i = 0; i < m.rank; ++i)
      for (std::size_t j = 0; j < m.rank; ++j)
        if (!diff(i, j).polar_part().is_exact_zero()) return false;
  }
  return true;
}

FiberReport fiber_report(const std::vector<FiberPoint>& points, bool enumeration_complete) {
  if (!enumeration_complete) throw std::invalid_argument("fiber report needs the complete enumeration of the fiber");
  FiberReport out;
  out.enumeration_complete = true;
  out.points = points.size();
  bool reduced = true;
  for (const auto& pt : points) reduced = reduced && pt.tangent.fiber_point_reduced;
  out.hypothesis_holds = reduced;
  out.interpretation = reduced ? "fiber finite and reduced: R^v_crys ~ product of local rings (formally smooth factors), "
                                 "conditional on the good-case proposition"
                               : "some fiber point is non-reduced: good-case hypothesis not met";
  return out;
}

}  // namespace bk
