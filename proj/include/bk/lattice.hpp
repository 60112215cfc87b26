#pragma once

#include <vector>

#include "bk/linalg.hpp"
#include "bk/series.hpp"

namespace bk {

// Full-rank F[[u]]-lattice in F((u))^n, stored by its reduced Hermite basis:
// column j vanishes above row j, has entry exactly u^{a_j} in row j, and its
// lower entries are reduced. Equal lattices have equal bases.
class Lattice {
 public:
  // Generators must be known to enough precision to pin down the lattice;
  // PrecisionError otherwise. Throws std::invalid_argument if they do not
  // span a full-rank lattice within the precision hard cap.
  static Lattice from_generators(const Field& f, std::size_t n, const std::vector<UVec>& gens);
  static Lattice standard(const Field& f, std::size_t n);

  const Field& field() const { return *f_; }
  std::size_t rank() const { return n_; }
  const UMatrix& basis() const { return basis_; }
  const std::vector<long long>& diagonal() const { return diag_; }
  // Smallest exponent a with u^a F[[u]]^n containing the lattice, and the
  // smallest b with u^b F[[u]]^n inside it.
  long long low() const { return lo_; }
  long long high() const { return hi_; }

  // Coordinates of v over F((u)) in the Hermite basis; exact when v is.
  UVec solve(const UVec& v) const;
  bool contains(const UVec& v) const;
  bool contains(const Lattice& other) const;
  Lattice sum(const Lattice& other) const;

  friend bool operator==(const Lattice& a, const Lattice& b) { return a.n_ == b.n_ && a.basis_ == b.basis_; }

 private:
  const Field* f_ = nullptr;
  std::size_t n_ = 0;
  UMatrix basis_;
  std::vector<long long> diag_;
  long long lo_ = 0;
  long long hi_ = 0;
};

// Basis matrix (columns) as a list of vectors.
std::vector<UVec> columns(const UMatrix& m);
UMatrix from_columns(const std::vector<UVec>& cols);

}  // namespace bk
