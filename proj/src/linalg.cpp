#include "bk/linalg.hpp"

#include <algorithm>
#include <stdexcept>

namespace bk {

FVec RowSpace::reduce(FVec v) const {
  if (v.size() != n_) throw std::invalid_argument("vector length does not match subspace");
  for (std::size_t i = 0; i < rows_.size(); ++i) {
    const std::size_t pc = pivots_[i];
    const Elem c = v[pc];
    if (f_->is_zero(c)) continue;
    const FVec& r = rows_[i];
    for (std::size_t j = pc; j < n_; ++j) {
      if (!f_->is_zero(r[j])) v[j] = f_->sub(v[j], f_->mul(c, r[j]));
    }
  }
  return v;
}

bool RowSpace::contains(FVec v) const {
  v = reduce(std::move(v));
  return std::all_of(v.begin(), v.end(), [&](Elem e) { return f_->is_zero(e); });
}

bool RowSpace::coordinates(const FVec& v, FVec& out) const {
  if (!contains(v)) return false;
  out.assign(rows_.size(), f_->zero());
  // In RREF the coefficient of row i is the entry of v at pivot i.
  for (std::size_t i = 0; i < rows_.size(); ++i) out[i] = v[pivots_[i]];
  return true;
}

bool RowSpace::insert(FVec v) {
  v = reduce(std::move(v));
  std::size_t pc = n_;
  for (std::size_t j = 0; j < n_; ++j) {
    if (!f_->is_zero(v[j])) {
      pc = j;
      break;
    }
  }
  if (pc == n_) return false;
  const Elem inv = f_->inv(v[pc]);
  for (std::size_t j = pc; j < n_; ++j) v[j] = f_->mul(v[j], inv);
  // Clear the new pivot column from existing rows.
  for (auto& r : rows_) {
    const Elem c = r[pc];
    if (f_->is_zero(c)) continue;
    for (std::size_t j = pc; j < n_; ++j) {
      if (!f_->is_zero(v[j])) r[j] = f_->sub(r[j], f_->mul(c, v[j]));
    }
  }
  auto pos = std::lower_bound(pivots_.begin(), pivots_.end(), pc);
  const auto idx = pos - pivots_.begin();
  pivots_.insert(pos, pc);
  rows_.insert(rows_.begin() + idx, std::move(v));
  return true;
}

std::vector<FVec> nullspace(const Field& f, const std::vector<FVec>& equations, std::size_t n) {
  RowSpace rs(f, n);
  for (const auto& e : equations) rs.insert(e);
  std::vector<bool> is_pivot(n, false);
  for (auto pc : rs.pivots()) is_pivot[pc] = true;
  std::vector<FVec> basis;
  for (std::size_t free = 0; free < n; ++free) {
    if (is_pivot[free]) continue;
    FVec x(n, f.zero());
    x[free] = f.one();
    for (std::size_t i = 0; i < rs.dim(); ++i) x[rs.pivots()[i]] = f.neg(rs.rows()[i][free]);
    basis.push_back(std::move(x));
  }
  return basis;
}

std::size_t rank_of(const Field& f, const std::vector<FVec>& rows, std::size_t n) {
  RowSpace rs(f, n);
  for (const auto& r : rows) rs.insert(r);
  return rs.dim();
}

RowSpace intersect(const RowSpace& a, const RowSpace& b) {
  // x = sum s_i a_i lies in b iff it reduces to zero against b; solve for s.
  const Field& f = a.field();
  const std::size_t n = a.ambient_dim();
  std::vector<FVec> images;
  images.reserve(a.dim());
  for (const auto& r : a.rows()) images.push_back(b.reduce(r));
  std::vector<FVec> eqs(n, FVec(a.dim()));
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t i = 0; i < a.dim(); ++i) eqs[j][i] = images[i][j];
  RowSpace out(f, n);
  for (const auto& s : nullspace(f, eqs, a.dim())) {
    FVec x(n, f.zero());
    for (std::size_t i = 0; i < a.dim(); ++i) {
      if (f.is_zero(s[i])) continue;
      for (std::size_t j = 0; j < n; ++j) x[j] = f.add(x[j], f.mul(s[i], a.rows()[i][j]));
    }
    out.insert(std::move(x));
  }
  return out;
}

}  // namespace bk
