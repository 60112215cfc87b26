#pragma once

#include <optional>
#include <stdexcept>
#include <vector>

#include "bk/lattice.hpp"
#include "bk/module.hpp"

namespace bk {

class PreconditionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A lattice M inside f_* N, stored blockwise in the coordinates e_j of the
// ambient (block tau holds e_tau, e_{tau+h}, ... in that order).
struct InducedLattice {
  RankOneData ambient;
  std::vector<Lattice> blocks;

  // Generators are vectors in e_0, ..., e_{[l:Q_p]-1}; each is split into
  // its block components.
  static InducedLattice from_generators(const RankOneData& ambient, const std::vector<UVec>& gens);
  static InducedLattice ambient_lattice(const RankOneData& ambient);

  // Frobenius matrices in the Hermite bases of the blocks.
  BKModule module() const;
  bool inside_ambient() const;
  // Hermite basis vectors, written in the full e-coordinates.
  std::vector<UVec> basis_vectors() const;
  UVec to_full(int block, const UVec& v) const;

  friend bool operator==(const InducedLattice& a, const InducedLattice& b) { return a.blocks == b.blocks; }
};

// sum_{i < [l:Q_p]} p^i r_{j+i}
long long theta_exponent(const RankOneData& n, int j);

struct SliceReport {
  int block = 0;
  std::size_t slice_dim = 0;
  bool stable = true;
  // Slice vector whose image under diag(r mod p) leaves the slice.
  std::optional<FVec> offending;
};

struct CrysCriterionReport {
  bool crystalline = true;
  std::vector<SliceReport> slices;
};

// Needs trivial twist and height <= p; throws PreconditionError otherwise.
CrysCriterionReport check_crys_induced(const InducedLattice& m, long long precision = 0);

struct DefectEntry {
  int block = 0;
  std::size_t generator = 0;
  std::size_t coordinate = 0;
  long long valuation_num = 0;  // over p - 1
  bool exact = true;            // false when only a lower bound is known
};

struct GaloisDefect {
  bool crystalline = true;
  long long denominator = 1;  // p - 1
  long long threshold_num = 0;  // p
  long long min_margin_num = 0;  // min valuation minus threshold, numerators
  std::vector<DefectEntry> entries;
};

// Direct computation of (sigma - 1) on the generators through the explicit
// Galois action sigma(e_j) = eta^{Theta_j} e_j, sigma(u) = u (1 + w), with
// w = u^{p^{1+level}/(p-1)}.
GaloisDefect galois_defect_oracle(const InducedLattice& m, int level = 0);

}  // namespace bk
