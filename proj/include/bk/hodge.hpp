#pragma once

#include <compare>
#include <string>
#include <vector>

#include "bk/module.hpp"

namespace bk {

// Per block (embedding of k), the multiset of i in [0, p] counted with
// multiplicity dim G^i, kept sorted.
struct HodgeType {
  std::vector<std::vector<int>> weights;

  std::vector<int> flattened() const;
  std::string to_string() const;
  friend auto operator<=>(const HodgeType&, const HodgeType&) = default;
};

// Read off the elementary divisors of each A_tau (E(u) = u mod p).
// Requires height <= p.
HodgeType graded_dims(const BKModule& m, long long precision = 0);

// dim_F of K^i = M / (M^phi + u^i M) on one block, by F-linear algebra on
// the first i coefficients.
long long cokernel_dim(const BKModule& m, int block, int i);
// dim_F G^i on one block from the cokernel dimensions alone:
// dim gr^i = n - k_{i+1} + k_i and G^i = gr^i / u gr^{i-1}.
long long brute_force_graded(const BKModule& m, int block, int i, long long precision);

// d^2 + #{(i, j) in W x W : i > j}, with multiplicity.
long long tangent_count(long long d, const std::vector<int>& w);

struct TypeClass {
  HodgeType type;
  std::vector<std::size_t> members;  // indices into the input
};
// Classes ordered by type; members in input order. All modules must share
// the tower and rank (std::invalid_argument otherwise).
std::vector<TypeClass> group_by_type(const std::vector<BKModule>& modules, long long precision = 0);

}  // namespace bk
