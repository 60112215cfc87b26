#include "bk/lattice.hpp"

#include <algorithm>
#include <stdexcept>

namespace bk {

std::vector<UVec> columns(const UMatrix& m) {
  std::vector<UVec> out;
  out.reserve(m.cols());
  for (std::size_t j = 0; j < m.cols(); ++j) out.push_back(m.column(j));
  return out;
}

UMatrix from_columns(const std::vector<UVec>& cols) {
  if (cols.empty()) return UMatrix();
  UMatrix m(cols[0].size(), cols.size());
  for (std::size_t j = 0; j < cols.size(); ++j) m.set_column(j, cols[j]);
  return m;
}

namespace {

// F-subspace of the window [lo, top) spanned by u^k g, k >= 0.
RowSpace window_span(const Field& f, std::size_t n, const std::vector<UVec>& gens, long long lo, long long top) {
  const auto width = static_cast<std::size_t>(top - lo);
  RowSpace rs(f, n * width);
  for (const auto& g : gens) {
    long long glow = USeries::kExact;
    for (const auto& s : g) glow = std::min(glow, s.low());
    if (glow >= top) continue;
    for (long long k = 0; glow + k < top; ++k) {
      FVec v(n * width, Elem{0});
      bool nonzero = false;
      for (std::size_t i = 0; i < n; ++i) {
        const USeries& s = g[i];
        if (s.cap() < top - k) throw PrecisionError("lattice generator known only to O(u^" + std::to_string(s.cap()) + ")");
        for (auto [e, c] : s.terms()) {
          const long long at = e + k;
          if (at >= top) break;
          v[i * width + static_cast<std::size_t>(at - lo)] = c;
          nonzero = true;
        }
      }
      if (nonzero) rs.insert(std::move(v));
    }
  }
  return rs;
}

}  // namespace

Lattice Lattice::from_generators(const Field& f, std::size_t n, const std::vector<UVec>& gens) {
  long long lo = USeries::kExact;
  for (const auto& g : gens) {
    if (g.size() != n) throw std::invalid_argument("generator length does not match lattice rank");
    for (const auto& s : g) {
      if (!s.known_zero()) lo = std::min(lo, s.start());
    }
  }
  if (lo >= USeries::kExact) throw std::invalid_argument("generators span the zero module");
  const long long cap = precision_hard_cap();
  for (long long hi = lo; hi <= lo + cap; ++hi) {
    // u^hi F[[u]]^n lies in L iff it does modulo u^{hi+1} (Nakayama).
    RowSpace rs = window_span(f, n, gens, lo, hi + 1);
    const auto width = static_cast<std::size_t>(hi + 1 - lo);
    bool bottom = true;
    for (std::size_t i = 0; i < n && bottom; ++i) {
      FVec e(n * width, Elem{0});
      e[i * width + static_cast<std::size_t>(hi - lo)] = f.one();
      bottom = rs.contains(std::move(e));
    }
    if (!bottom) continue;

    RowSpace win = window_span(f, n, gens, lo, hi);
    const auto w = static_cast<std::size_t>(hi - lo);
    Lattice out;
    out.f_ = &f;
    out.n_ = n;
    out.lo_ = lo;
    out.hi_ = hi;
    out.basis_ = UMatrix(n, n, USeries(&f));
    out.diag_.assign(n, hi);
    std::vector<bool> seen(n, false);
    for (std::size_t r = 0; r < win.dim(); ++r) {
      const std::size_t pc = win.pivots()[r];
      const std::size_t coord = pc / w;
      if (seen[coord]) continue;
      seen[coord] = true;
      out.diag_[coord] = lo + static_cast<long long>(pc % w);
      for (std::size_t i = 0; i < n; ++i) {
        std::vector<Elem> c(win.rows()[r].begin() + static_cast<std::ptrdiff_t>(i * w),
                            win.rows()[r].begin() + static_cast<std::ptrdiff_t>((i + 1) * w));
        out.basis_(i, coord) = USeries::from_coeffs(f, lo, std::move(c));
      }
    }
    // Coordinates with no pivot below hi have pivot exactly at hi.
    for (std::size_t i = 0; i < n; ++i) {
      if (!seen[i]) out.basis_(i, i) = USeries::monomial(f, f.one(), hi);
    }
    return out;
  }
  throw std::invalid_argument("generators do not span a full-rank lattice within the precision cap");
}

Lattice Lattice::standard(const Field& f, std::size_t n) {
  std::vector<UVec> gens;
  for (std::size_t i = 0; i < n; ++i) {
    UVec v(n, USeries(&f));
    v[i] = USeries::constant(f, f.one());
    gens.push_back(std::move(v));
  }
  return from_generators(f, n, gens);
}

UVec Lattice::solve(const UVec& v) const {
  if (v.size() != n_) throw std::invalid_argument("vector length does not match lattice rank");
  UVec rest = v;
  UVec c(n_, USeries(f_));
  for (std::size_t j = 0; j < n_; ++j) {
    c[j] = rest[j].shifted(-diag_[j]);
    if (c[j].is_exact_zero()) continue;
    for (std::size_t i = j; i < n_; ++i) {
      if (!basis_(i, j).is_exact_zero()) rest[i] -= c[j] * basis_(i, j);
    }
  }
  return c;
}

bool Lattice::contains(const UVec& v) const { return is_integral(solve(v)); }

bool Lattice::contains(const Lattice& other) const {
  for (std::size_t j = 0; j < other.n_; ++j)
    if (!contains(other.basis_.column(j))) return false;
  return true;
}

Lattice Lattice::sum(const Lattice& other) const {
  auto gens = columns(basis_);
  for (auto& c : columns(other.basis_)) gens.push_back(std::move(c));
  return from_generators(*f_, n_, gens);
}

}  // namespace bk
