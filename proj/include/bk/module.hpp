#pragma once

#include <optional>
#include <vector>

#include "bk/field.hpp"
#include "bk/lattice.hpp"
#include "bk/series.hpp"

namespace bk {

// Free module of rank n over each block S_tau = F[[u]] (one block per
// embedding of k). Column convention: phi(basis_{tau+1}) = basis_tau * A_tau,
// so column j of A_tau holds the coordinates of phi of basis vector j.
struct BKModule {
  Tower tower;
  std::size_t rank = 0;
  std::vector<UMatrix> frobenius;  // one per block

  int blocks() const { return tower.deg_k; }
  const Field& field() const { return *tower.field; }
};

// Rank-one data over l: phi(e_{j+1}) = twist_j u^{weight_j} e_j, indices mod [l:Q_p].
struct RankOneData {
  Tower tower;
  std::vector<int> weights;
  std::vector<Elem> twist;

  static RankOneData untwisted(const Tower& t, std::vector<int> weights);
  bool untwisted() const;
};

// Position of e_j inside its block and the block index.
struct BlockSlot {
  int block;
  std::size_t pos;
};
BlockSlot block_slot(const Tower& t, int j);
int embedding_index(const Tower& t, int block, std::size_t pos);

void validate(const BKModule& m);
void validate(const RankOneData& n);

// True iff A_tau is integral and u^h A_tau^{-1} is integral for every block.
bool check_height(const BKModule& m, int h, long long precision = 0);
// Elementary divisor exponents of each A_tau, increasing.
std::vector<std::vector<long long>> hodge_exponents(const BKModule& m, long long precision = 0);

// phi applied to an element given blockwise (coordinates per block).
std::vector<UVec> phi_image(const BKModule& m, const std::vector<UVec>& element);

// f_* of a rank-one module over l, seen as a module over k.
BKModule induce(const RankOneData& n);
// Restriction of scalars to Q_p: a single block of rank n * [k:Q_p].
BKModule restrict_to_qp(const BKModule& m);
BKModule extend_coeffs(const BKModule& m, const FieldPtr& larger);
RankOneData extend_coeffs(const RankOneData& n, const FieldPtr& larger);
UMatrix extend_matrix(const UMatrix& a, const Embedding& emb);

// Rescaling to trivial twist. y_0 solves y^{p^d - 1} = c^{-1}, c the
// Frobenius-weighted product of the twists; the coefficient field is
// enlarged by `extension_degree` when no solution exists in F.
struct NormalizedTwist {
  RankOneData normalized;
  int extension_degree = 1;
  std::vector<Elem> scaling;  // e'_j = scaling_j e_j, in the enlarged field
};
NormalizedTwist normalize_twist(const RankOneData& n);

// Submodule and quotient for a phi-stable F((u))-subspace, given per block by
// spanning vectors in the module's basis. The saturated submodule W and a
// complement Z give phi_M = [[A_W, f A_Z], [0, A_Z]].
struct Extension {
  BKModule sub;
  BKModule quotient;
  std::vector<UMatrix> cocycle;       // f_tau : Z_tau -> W_tau
  std::vector<UMatrix> change_of_basis;  // new basis of M in old coordinates
  std::vector<UMatrix> change_inverse;
};
Extension sub_quotient(const BKModule& m, const std::vector<std::vector<UVec>>& subspace,
                       long long precision = 0);

}  // namespace bk
