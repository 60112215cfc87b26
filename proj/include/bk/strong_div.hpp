#pragma once

#include <string>
#include <vector>

#include "bk/induced.hpp"
#include "bk/module.hpp"

namespace bk {

// Witness on one block: source vectors n_i (constant, in the basis of block
// tau+1) with phi(n_i) = u^{r_i} m_i and (m_i) a basis of block tau.
struct SDBlockWitness {
  int block = 0;
  UMatrix source;  // columns n_i
  std::vector<long long> exponents;
  UMatrix images;  // columns m_i
};

struct ExtensionWitness {
  bool exists = false;
  std::vector<UMatrix> correction;  // g_tau, constant matrices
  std::vector<UMatrix> corrected;   // f + (phi - 1)(g), integral when exists
};

struct SDReport {
  bool sd = false;
  std::string reason;
  std::vector<SDBlockWitness> witness;
  std::vector<ExtensionWitness> extensions;  // filtered route, innermost first
  // Per block: sum_r dim ker(A mod u^r) against v(det A).
  std::vector<long long> kernel_mass;
  std::vector<long long> det_valuation;
};

// Decides strong divisibility from its definition for a module of height
// <= p. A basis with phi(n_i) = u^{r_i} m_i exists iff the filtration
// V_r = {c in F^n : A_tau c = 0 mod u^r} has total dimension v(det A_tau).
SDReport check_sd_direct(const BKModule& m, long long precision = 0);
bool verify_sd_witness(const BKModule& m, const std::vector<SDBlockWitness>& witness, long long precision = 0);

// Induced lattice: verdict from the slice criterion, witness from the direct
// decider; both must agree or std::logic_error is thrown.
SDReport check_sd_induced(const InducedLattice& m, long long precision = 0);

// Looks for g in Hom(Z, W) with f + phi(g) - g integral, where
// phi(g)_tau = A_W,tau phi(g_{tau+1}) A_Z,tau^{-1}. Coefficients of g in
// degrees [0, g_degree) are searched; poles of f must lie within pole_bound
// (default 2p).
ExtensionWitness sd_extension_witness(const BKModule& sub, const BKModule& quotient,
                                      const std::vector<UMatrix>& cocycle, int pole_bound = 0,
                                      int g_degree = 1, long long precision = 0);

// A flag of phi-stable subspaces V_1 < V_2 < ... (proper, increasing), each
// given per block by spanning vectors in the module's basis.
using Subspace = std::vector<std::vector<UVec>>;
SDReport check_sd_filtered(const BKModule& m, const std::vector<Subspace>& flag, long long precision = 0);

// Absolutely irreducible Jordan-Hoelder factor: induced from the unramified
// extension of degree `niveau` of k, tame exponent modulo p^{niveau [k:Q_p]} - 1,
// and an unramified twist tag.
struct JHFactor {
  int niveau = 1;
  long long exponent = 0;
  long long twist = 0;
};

struct CyclofreeReport {
  bool absolutely_irreducible = true;
  bool cyclofree = false;
  bool strongly_cyclofree = false;
  std::vector<std::string> notes;
};

long long cyclotomic_exponent(int p, int deg_k);  // exponent of F(-1)
CyclofreeReport check_cyclotomic_free(int p, int deg_k, const std::vector<JHFactor>& factors);

enum class CrysVerdict { Crystalline, NotCrystalline, CertifiedCrystalline, SDNecessaryFailed, SDNecessityOnly };
const char* to_string(CrysVerdict v);

struct CrysDecision {
  CrysVerdict verdict = CrysVerdict::NotCrystalline;
  bool necessity_only = false;
  SDReport sd;
  std::optional<CyclofreeReport> cyclofree;
};

// Irreducible context: the slice criterion is decisive.
CrysDecision decide_crys(const InducedLattice& m, long long precision = 0);
// Filtered context: SD is necessary; with a cyclotomic-free certificate it
// is also sufficient.
CrysDecision decide_crys(const BKModule& m, const std::vector<Subspace>& flag, const std::vector<JHFactor>& factors,
                         bool strong, long long precision = 0);

}  // namespace bk
