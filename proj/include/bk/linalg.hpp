#pragma once

#include <cstddef>
#include <vector>

#include "bk/field.hpp"

namespace bk {

using FVec = std::vector<Elem>;

// A subspace of F^n kept in reduced row echelon form. Insertion order does
// not affect the stored basis, so two equal subspaces compare equal.
class RowSpace {
 public:
  RowSpace(const Field& f, std::size_t ambient_dim) : f_(&f), n_(ambient_dim) {}

  // Returns true if v was independent of the current rows.
  bool insert(FVec v);
  bool contains(FVec v) const;
  // Reduces v against the basis; the result is zero iff v lies in the span.
  FVec reduce(FVec v) const;
  // Coefficients c with v = sum c_i rows()[i], if v is in the span.
  bool coordinates(const FVec& v, FVec& out) const;

  std::size_t dim() const { return rows_.size(); }
  std::size_t ambient_dim() const { return n_; }
  const Field& field() const { return *f_; }
  // Rows sorted by pivot column.
  const std::vector<FVec>& rows() const { return rows_; }
  const std::vector<std::size_t>& pivots() const { return pivots_; }

  friend bool operator==(const RowSpace& a, const RowSpace& b) {
    return a.n_ == b.n_ && a.rows_ == b.rows_;
  }

 private:
  const Field* f_;
  std::size_t n_;
  std::vector<FVec> rows_;
  std::vector<std::size_t> pivots_;
};

// Basis of {x : sum_j eq[i][j] x_j = 0 for all i} in F^n.
std::vector<FVec> nullspace(const Field& f, const std::vector<FVec>& equations, std::size_t n);

std::size_t rank_of(const Field& f, const std::vector<FVec>& rows, std::size_t n);

RowSpace intersect(const RowSpace& a, const RowSpace& b);

}  // namespace bk
