#include "bk/induced.hpp"

#include <algorithm>

#include "bk/linalg.hpp"
#include "bk/ramseries.hpp"

namespace bk {

InducedLattice InducedLattice::from_generators(const RankOneData& ambient, const std::vector<UVec>& gens) {
  validate(ambient);
  const Tower& t = ambient.tower;
  const Field& f = *t.field;
  const auto rank = static_cast<std::size_t>(t.block_rank());
  std::vector<std::vector<UVec>> per_block(static_cast<std::size_t>(t.deg_k));
  for (const auto& g : gens) {
    if (static_cast<int>(g.size()) != t.deg_l)
      throw std::invalid_argument("generator must have one entry per embedding of l");
    for (int b = 0; b < t.deg_k; ++b) {
      UVec part(rank, USeries(&f));
      bool nonzero = false;
      for (std::size_t k = 0; k < rank; ++k) {
        part[k] = g[static_cast<std::size_t>(embedding_index(t, b, k))];
        nonzero = nonzero || !part[k].is_exact_zero();
      }
      if (nonzero) per_block[b].push_back(std::move(part));
    }
  }
  InducedLattice out{ambient, {}};
  for (int b = 0; b < t.deg_k; ++b) {
    if (per_block[b].empty()) throw std::invalid_argument("generators miss block " + std::to_string(b));
    out.blocks.push_back(Lattice::from_generators(f, rank, per_block[b]));
  }
  return out;
}

InducedLattice InducedLattice::ambient_lattice(const RankOneData& ambient) {
  const Field& f = *ambient.tower.field;
  std::vector<UVec> gens;
  for (int j = 0; j < ambient.tower.deg_l; ++j) {
    UVec v(static_cast<std::size_t>(ambient.tower.deg_l), USeries(&f));
    v[j] = USeries::constant(f, f.one());
    gens.push_back(std::move(v));
  }
  return from_generators(ambient, gens);
}

UVec InducedLattice::to_full(int block, const UVec& v) const {
  const Tower& t = ambient.tower;
  UVec out(static_cast<std::size_t>(t.deg_l), USeries(t.field.get()));
  for (std::size_t k = 0; k < v.size(); ++k) out[static_cast<std::size_t>(embedding_index(t, block, k))] = v[k];
  return out;
}

std::vector<UVec> InducedLattice::basis_vectors() const {
  std::vector<UVec> out;
  for (int b = 0; b < static_cast<int>(blocks.size()); ++b)
    for (const auto& c : columns(blocks[b].basis())) out.push_back(to_full(b, c));
  return out;
}

bool InducedLattice::inside_ambient() const {
  for (const auto& l : blocks)
    if (l.low() < 0) return false;
  return true;
}

BKModule InducedLattice::module() const {
  const BKModule amb = induce(ambient);
  const int h = amb.blocks();
  BKModule out{ambient.tower, amb.rank, {}};
  for (int tau = 0; tau < h; ++tau) {
    const Lattice& src = blocks[(tau + 1) % h];
    const UMatrix image = amb.frobenius[tau] * phi(src.basis(), ambient.tower.p);
    UMatrix a(amb.rank, amb.rank);
    for (std::size_t c = 0; c < amb.rank; ++c) a.set_column(c, blocks[tau].solve(image.column(c)));
    out.frobenius.push_back(std::move(a));
  }
  return out;
}

long long theta_exponent(const RankOneData& n, int j) {
  const int d = n.tower.deg_l;
  long long total = 0, pw = 1;
  for (int i = 0; i < d; ++i) {
    total += pw * n.weights[static_cast<std::size_t>(((j + i) % d + d) % d)];
    pw *= n.tower.p;
  }
  return total;
}

namespace {

void require_criterion_hypotheses(const InducedLattice& m, long long precision) {
  if (!m.ambient.untwisted()) throw PreconditionError("twist not normalized: normalize_twist first");
  if (!m.inside_ambient()) throw PreconditionError("lattice is not contained in the ambient module");
  if (!check_height(m.module(), m.ambient.tower.p, precision)) throw PreconditionError("height exceeds p");
}

}  // namespace

CrysCriterionReport check_crys_induced(const InducedLattice& m, long long precision) {
  require_criterion_hypotheses(m, precision);
  const Tower& t = m.ambient.tower;
  const Field& f = *t.field;
  const auto rank = static_cast<std::size_t>(t.block_rank());
  CrysCriterionReport report;
  for (int b = 0; b < t.deg_k; ++b) {
    const Lattice& l = m.blocks[b];
    for (std::size_t k = 0; k < rank; ++k) {
      UVec ue(rank, USeries(&f));
      ue[k] = USeries::monomial(f, f.one(), 1);
      if (!l.contains(ue)) throw std::logic_error("u e_theta missing from a lattice of height <= p");
    }
    RowSpace slice(f, rank);
    for (std::size_t c = 0; c < rank; ++c) {
      FVec v(rank);
      for (std::size_t i = 0; i < rank; ++i) v[i] = l.basis()(i, c).coeff(0);
      slice.insert(std::move(v));
    }
    SliceReport sr{b, slice.dim(), true, std::nullopt};
    for (const auto& row : slice.rows()) {
      FVec image(rank);
      for (std::size_t i = 0; i < rank; ++i) {
        const int w = m.ambient.weights[static_cast<std::size_t>(embedding_index(t, b, i))];
        image[i] = f.mul(f.from_int(w), row[i]);
      }
      if (!slice.contains(image)) {
        sr.stable = false;
        sr.offending = row;
        break;
      }
    }
    report.crystalline = report.crystalline && sr.stable;
    report.slices.push_back(std::move(sr));
  }
  return report;
}

GaloisDefect galois_defect_oracle(const InducedLattice& m, int level) {
  if (!m.ambient.untwisted()) throw PreconditionError("twist not normalized: normalize_twist first");
  if (!m.inside_ambient()) throw PreconditionError("lattice is not contained in the ambient module");
  const Tower& t = m.ambient.tower;
  const Field& f = *t.field;
  const int p = t.p;
  const long long denom = p - 1;
  long long pm = 1;
  for (int i = 0; i < level; ++i) pm *= p;
  long long max_diag = 0;
  for (const auto& l : m.blocks)
    for (long long a : l.diagonal()) max_diag = std::max(max_diag, a);
  const long long cap = pm * p * (p + 1) + (max_diag + 2) * denom;
  const long long reliable = cap - max_diag * denom;

  GaloisDefect out;
  out.denominator = denom;
  out.threshold_num = p;
  out.min_margin_num = reliable - p;
  const auto rank = static_cast<std::size_t>(t.block_rank());
  // eta^{Theta_j} for each embedding.
  const RamSeries eta = eta_series(f, p, t.deg_l, level, cap);
  std::vector<RamSeries> eta_theta;
  for (int j = 0; j < t.deg_l; ++j) eta_theta.push_back(eta.pow(theta_exponent(m.ambient, j)));

  for (int b = 0; b < t.deg_k; ++b) {
    const Lattice& l = m.blocks[b];
    std::vector<std::vector<RamSeries>> basis_ram(rank);
    for (std::size_t i = 0; i < rank; ++i)
      for (std::size_t c = 0; c < rank; ++c)
        basis_ram[i].push_back(RamSeries::from_useries(l.basis()(i, c), denom, cap + max_diag * denom));
    for (std::size_t g = 0; g < rank; ++g) {
      std::vector<RamSeries> rest;
      for (std::size_t k = 0; k < rank; ++k) {
        const USeries& coeff = l.basis()(k, g);
        const int j = embedding_index(t, b, k);
        RamSeries sigma_c(&f, denom, cap);
        for (auto [e, c] : coeff.terms()) {
          RamSeries term = one_plus_w_power(f, p, level, e, cap).shifted(e * denom);
          RamSeries scaled(&f, denom, cap);
          for (auto [num, x] : term.terms()) scaled.add_term(num, f.mul(x, c));
          sigma_c = sigma_c + scaled;
        }
        rest.push_back(sigma_c * eta_theta[static_cast<std::size_t>(j)] - RamSeries::from_useries(coeff, denom, cap));
      }
      // Triangular solve in the Hermite basis.
      for (std::size_t c = 0; c < rank; ++c) {
        const RamSeries coord = rest[c].shifted(-l.diagonal()[c] * denom);
        for (std::size_t i = c; i < rank; ++i) rest[i] = rest[i] - coord * basis_ram[i][c];
        DefectEntry entry{b, g, c, 0, true};
        if (coord.known_zero()) {
          entry.valuation_num = coord.cap();
          entry.exact = false;
        } else {
          entry.valuation_num = coord.valuation_numerator();
          entry.exact = entry.valuation_num < reliable;
          if (!entry.exact) entry.valuation_num = reliable;
        }
        out.min_margin_num = std::min(out.min_margin_num, entry.valuation_num - p);
        out.entries.push_back(entry);
      }
    }
  }
  out.crystalline = out.min_margin_num >= 0;
  return out;
}

}  // namespace bk
