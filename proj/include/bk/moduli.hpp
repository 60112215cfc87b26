#pragma once

#include <optional>
#include <string>
#include <vector>

#include "bk/batch.hpp"
#include "bk/induced.hpp"
#include "bk/tseries.hpp"

namespace bk {

// Shape of one block (e_tau, e_{tau+h}) of a lattice u f_*N <= M <= f_*N,
// h = [k:Q_p], in an ambient with [l:k] = 2.
//   mixed:  spanned by e_tau + alpha e_{tau+h} and u e_tau, alpha != 0
//   split:  spanned by u^{x_low} e_tau and u^{x_high} e_{tau+h}
struct BlockShape {
  bool mixed = false;
  Elem alpha{};
  int x_low = 0;
  int x_high = 0;

  friend bool operator==(const BlockShape&, const BlockShape&) = default;
};
using ShapeAssignment = std::vector<BlockShape>;

// Number of mixed blocks.
int d_invariant(const ShapeAssignment& s);
std::string shape_string(const Field& f, const ShapeAssignment& s);
std::vector<UVec> shape_generators(const RankOneData& n, const ShapeAssignment& s);
// nullopt unless u f_*N <= M <= f_*N with rank-two blocks.
std::optional<ShapeAssignment> classify_shape(const InducedLattice& m);

// The induction of a character of G_l is irreducible iff Theta_0 is not
// divisible by p^h + 1.
bool induced_irreducible(const RankOneData& n);

struct ShapeLattice {
  InducedLattice lattice;
  ShapeAssignment shape;
  int d = 0;
};

// Every shape lattice of height <= p, crystalline or not. alpha runs over
// the first alpha_limit nonzero elements of F (all of them when 0).
std::vector<ShapeLattice> shape_corpus(const RankOneData& n, std::size_t alpha_limit = 0,
                                       Execution exec = Execution::Parallel);

// Crystalline lattices of height <= p inside f_*N, all-mixed assignments
// excluded. Adjacent mixed blocks must carry the same alpha (after moving
// the anchor across the wrap), which prunes before any linear algebra.
std::vector<ShapeLattice> enumerate_2d(const RankOneData& n, Execution exec = Execution::Parallel);

// A lattice over F[T]: per block a square basis over F[T][u, 1/u], inside
// an ambient whose Frobenius is known exactly.
struct Family {
  BKModule ambient;
  std::optional<RankOneData> induced;  // slice conditions apply when set
  std::vector<TMatrix> basis;
};

// Generators in full e-coordinates, each supported in a single block.
Family induced_family(const RankOneData& n, const std::vector<TVec>& generators);

struct FamilyIssue {
  int block = 0;
  std::string what;
  int row = -1;
  int col = -1;
  long long exponent = 0;
};

struct FamilyReport {
  bool ok = true;
  std::vector<FamilyIssue> issues;
  std::vector<TMatrix> frobenius;  // A_tau(T)
};

// All checks are identities over F[T][[u]], so they hold at every value of
// T in every extension of F. Throws FamilyError on a non-monomial basis
// determinant.
FamilyReport verify_family(const Family& fam);

std::vector<UMatrix> family_basis_at(const Family& fam, Elem t);
InducedLattice family_lattice_at(const Family& fam, Elem t);
// Lattice at t in an extension; the ambient is extended along emb.
InducedLattice family_lattice_at(const Family& fam, Elem t, const Embedding& emb);

struct ConnectingFamily {
  Family family;
  int run_start = 0;
  int run_length = 0;
  ShapeAssignment start;  // T = 1
  ShapeAssignment end;    // T = 0
};

// T is inserted on the maximal mixed run that starts right after a split
// block, taking the smallest such start. Throws FamilyError when d = 0 or
// every block is mixed.
ConnectingFamily build_connecting_family(const RankOneData& n, const ShapeAssignment& shape);

// Iterates build_connecting_family until d = 0.
std::vector<ConnectingFamily> connect_to_pushforward(const RankOneData& n, const ShapeAssignment& shape);

struct ComponentClass {
  std::vector<std::size_t> members;
  bool has_pushforward = false;
  // Per member: node path along family edges to a d = 0 node (empty when
  // none is reachable).
  std::vector<std::vector<std::size_t>> chains;
};

struct ComponentGraph {
  std::vector<InducedLattice> nodes;
  std::vector<std::pair<std::size_t, std::size_t>> edges;  // (T = 1, T = 0)
  std::vector<ComponentClass> classes;
};

// Union-find over verified family edges; endpoints not in the input are
// appended as new nodes. Throws FamilyError for an edge that fails
// verification.
ComponentGraph component_graph(std::vector<InducedLattice> lattices, const std::vector<Family>& families);
std::string adjacency_text(const ComponentGraph& g);

// Rank two over Q_p: phi(xi) = xi [[1, beta], [0, 1]] and the lattice
// xi [[u^r, b], [0, u^s]].
BKModule reducible_ambient(const Tower& t, const USeries& beta);
BKModule reducible_rank2_module(const Tower& t, int r, int s, const USeries& b, const USeries& beta);

struct ReducibleEntry {
  int r = 0;
  int s = 0;
  std::size_t count = 0;
  std::vector<USeries> representatives;  // b modulo u^r F[[u]]
};

struct ReducibleCatalog {
  int pole_depth = 0;
  std::vector<ReducibleEntry> entries;  // (0,0), (0,1), (1,0), (1,1)
};

// beta must be an exact Laurent polynomial in degrees (-p, 0]. The
// conditions on b are affine over F and are solved exactly.
ReducibleCatalog enumerate_reducible_rank2(const Tower& t, const USeries& beta);

}  // namespace bk
