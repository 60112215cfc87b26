#include "bk/moduli.hpp"

#include <algorithm>
#include <deque>
#include <numeric>
#include <stdexcept>

#include "bk/linalg.hpp"
#include "bk/strong_div.hpp"

namespace bk {

namespace {

void require_two_dim(const RankOneData& n) {
  validate(n);
  if (n.tower.deg_l != 2 * n.tower.deg_k) throw std::invalid_argument("shape data needs [l:Q_p] = 2 [k:Q_p]");
}

UVec unit_vector(const Field& f, int d, int j, long long e) {
  UVec v(static_cast<std::size_t>(d), USeries(&f));
  v[static_cast<std::size_t>(j)] = USeries::monomial(f, f.one(), e);
  return v;
}

TVec t_unit(const Field& f, int d, int j, long long e) {
  TVec v(static_cast<std::size_t>(d), TSeries(&f));
  v[static_cast<std::size_t>(j)] = TSeries::monomial(f, TPoly::constant(f, f.one()), e);
  return v;
}

std::vector<Elem> nonzero_elements(const Field& f, std::size_t limit) {
  std::vector<Elem> out;
  for (std::uint32_t c = 1; c < f.size() && (limit == 0 || out.size() < limit); ++c) out.push_back(Elem{c});
  return out;
}

// Mixed-radix decoding: per block, split shapes (x_low, x_high) first, then
// the alphas.
ShapeAssignment decode(std::size_t index, int blocks, const std::vector<Elem>& alphas) {
  const std::size_t radix = 4 + alphas.size();
  ShapeAssignment s(static_cast<std::size_t>(blocks));
  for (auto& b : s) {
    const std::size_t digit = index % radix;
    index /= radix;
    if (digit < 4) {
      b.x_low = static_cast<int>(digit & 1);
      b.x_high = static_cast<int>(digit >> 1);
    } else {
      b.mixed = true;
      b.alpha = alphas[digit - 4];
    }
  }
  return s;
}

std::size_t assignment_count(int blocks, std::size_t radix) {
  std::size_t total = 1;
  for (int i = 0; i < blocks; ++i) total *= radix;
  return total;
}

bool is_integral(const TSeries& s) {
  const auto v = s.valuation();
  return !v || *v >= 0;
}

bool is_integral(const TVec& v) {
  return std::all_of(v.begin(), v.end(), [](const TSeries& s) { return is_integral(s); });
}

}  // namespace

int d_invariant(const ShapeAssignment& s) {
  return static_cast<int>(std::count_if(s.begin(), s.end(), [](const BlockShape& b) { return b.mixed; }));
}

std::string shape_string(const Field& f, const ShapeAssignment& s) {
  std::string out;
  for (std::size_t t = 0; t < s.size(); ++t) {
    if (t) out += " ";
    if (s[t].mixed)
      out += "I(" + f.to_string(s[t].alpha) + ")";
    else
      out += "II(" + std::to_string(s[t].x_low) + "," + std::to_string(s[t].x_high) + ")";
  }
  return out;
}

std::vector<UVec> shape_generators(const RankOneData& n, const ShapeAssignment& s) {
  require_two_dim(n);
  const Tower& t = n.tower;
  const Field& f = *t.field;
  const int h = t.deg_k;
  if (static_cast<int>(s.size()) != h) throw std::invalid_argument("one shape per block expected");
  std::vector<UVec> gens;
  for (int b = 0; b < h; ++b) {
    const BlockShape& bs = s[static_cast<std::size_t>(b)];
    if (bs.mixed) {
      if (f.is_zero(bs.alpha)) throw std::invalid_argument("mixed block needs alpha != 0");
      UVec g = unit_vector(f, t.deg_l, b, 0);
      g[static_cast<std::size_t>(b + h)] = USeries::constant(f, bs.alpha);
      gens.push_back(std::move(g));
      gens.push_back(unit_vector(f, t.deg_l, b, 1));
    } else {
      gens.push_back(unit_vector(f, t.deg_l, b, bs.x_low));
      gens.push_back(unit_vector(f, t.deg_l, b + h, bs.x_high));
    }
  }
  return gens;
}

std::optional<ShapeAssignment> classify_shape(const InducedLattice& m) {
  if (m.ambient.tower.deg_l != 2 * m.ambient.tower.deg_k) return std::nullopt;
  ShapeAssignment out;
  for (const Lattice& l : m.blocks) {
    if (l.rank() != 2 || l.low() < 0 || l.high() > 1) return std::nullopt;
    const auto& a = l.diagonal();
    BlockShape b;
    const USeries& below = l.basis()(1, 0);
    if (a[0] == 0 && a[1] == 1 && !below.is_exact_zero()) {
      b.mixed = true;
      b.alpha = below.coeff(0);
    } else {
      b.x_low = static_cast<int>(a[0]);
      b.x_high = static_cast<int>(a[1]);
    }
    out.push_back(b);
  }
  return out;
}

bool induced_irreducible(const RankOneData& n) {
  require_two_dim(n);
  long long q = 1;
  for (int i = 0; i < n.tower.deg_k; ++i) q *= n.tower.p;
  return theta_exponent(n, 0) % (q + 1) != 0;
}

std::vector<ShapeLattice> shape_corpus(const RankOneData& n, std::size_t alpha_limit, Execution exec) {
  require_two_dim(n);
  const int h = n.tower.deg_k;
  const int p = n.tower.p;
  const auto alphas = nonzero_elements(*n.tower.field, alpha_limit);
  const std::size_t total = assignment_count(h, 4 + alphas.size());
  auto found = batch_map(
      total,
      [&](std::size_t i) -> std::optional<ShapeLattice> {
        ShapeAssignment s = decode(i, h, alphas);
        InducedLattice m = InducedLattice::from_generators(n, shape_generators(n, s));
        if (!check_height(m.module(), p)) return std::nullopt;
        const int d = d_invariant(s);
        return ShapeLattice{std::move(m), std::move(s), d};
      },
      exec);
  std::vector<ShapeLattice> out;
  for (auto& x : found)
    if (x) out.push_back(std::move(*x));
  return out;
}

std::vector<ShapeLattice> enumerate_2d(const RankOneData& n, Execution exec) {
  require_two_dim(n);
  if (!n.untwisted()) throw PreconditionError("enumerate_2d needs a normalized (untwisted) ambient");
  const int p = n.tower.p;
  for (int r : n.weights)
    if (r < 0 || r > p) throw std::invalid_argument("weights must lie in [0, p]");
  const Field& f = *n.tower.field;
  const int h = n.tower.deg_k;
  const auto alphas = nonzero_elements(f, 0);
  const std::size_t total = assignment_count(h, 4 + alphas.size());

  auto moving_consistent = [&](const ShapeAssignment& s) {
    for (int t = 0; t < h; ++t) {
      const int next = (t + 1) % h;
      if (next == t || !s[t].mixed || !s[next].mixed) continue;
      const Elem carried = next == 0 ? f.inv(s[t].alpha) : s[t].alpha;
      if (carried != s[next].alpha) return false;
    }
    return true;
  };

  auto found = batch_map(
      total,
      [&](std::size_t i) -> std::optional<ShapeLattice> {
        ShapeAssignment s = decode(i, h, alphas);
        const int d = d_invariant(s);
        if (d == h || !moving_consistent(s)) return std::nullopt;
        InducedLattice m = InducedLattice::from_generators(n, shape_generators(n, s));
        if (!check_height(m.module(), p)) return std::nullopt;
        if (!check_crys_induced(m).crystalline) return std::nullopt;
        return ShapeLattice{std::move(m), std::move(s), d};
      },
      exec);
  std::vector<ShapeLattice> out;
  for (auto& x : found)
    if (x) out.push_back(std::move(*x));
  return out;
}

Family induced_family(const RankOneData& n, const std::vector<TVec>& generators) {
  validate(n);
  const Tower& t = n.tower;
  const Field& f = *t.field;
  const auto rank = static_cast<std::size_t>(t.block_rank());
  std::vector<std::vector<TVec>> per_block(static_cast<std::size_t>(t.deg_k));
  for (const auto& g : generators) {
    if (static_cast<int>(g.size()) != t.deg_l) throw std::invalid_argument("generator must have one entry per embedding of l");
    int home = -1;
    for (int j = 0; j < t.deg_l; ++j) {
      if (g[static_cast<std::size_t>(j)].is_zero()) continue;
      const int b = t.restrict_index(j);
      if (home >= 0 && home != b) throw std::invalid_argument("family generator spans several blocks");
      home = b;
    }
    if (home < 0) throw std::invalid_argument("zero family generator");
    TVec part(rank, TSeries(&f));
    for (std::size_t k = 0; k < rank; ++k) part[k] = g[static_cast<std::size_t>(embedding_index(t, home, k))];
    per_block[static_cast<std::size_t>(home)].push_back(std::move(part));
  }
  Family fam{induce(n), n, {}};
  for (int b = 0; b < t.deg_k; ++b) {
    const auto& cols = per_block[static_cast<std::size_t>(b)];
    if (cols.size() != rank)
      throw std::invalid_argument("block " + std::to_string(b) + " needs exactly " + std::to_string(rank) + " generators");
    TMatrix m(rank, rank, TSeries(&f));
    for (std::size_t c = 0; c < rank; ++c) m.set_column(c, cols[c]);
    fam.basis.push_back(std::move(m));
  }
  return fam;
}

FamilyReport verify_family(const Family& fam) {
  validate(fam.ambient);
  const Tower& t = fam.ambient.tower;
  const Field& f = *t.field;
  const int p = t.p;
  const int h = fam.ambient.blocks();
  const std::size_t n = fam.ambient.rank;
  if (static_cast<int>(fam.basis.size()) != h) throw std::invalid_argument("family needs one basis per block");
  FamilyReport rep;
  auto issue = [&](int block, std::string what, int row = -1, int col = -1, long long e = 0) {
    rep.ok = false;
    rep.issues.push_back({block, std::move(what), row, col, e});
  };

  std::vector<TMatrix> binv;
  for (int tau = 0; tau < h; ++tau) {
    if (!monomial_determinant(fam.basis[tau]))
      throw FamilyError("family basis of block " + std::to_string(tau) + " has no monomial determinant");
    binv.push_back(tinverse(fam.basis[tau]));
  }
  for (int tau = 0; tau < h; ++tau) {
    const TMatrix a = binv[tau] * to_tmatrix(fam.ambient.frobenius[tau]) * tphi(fam.basis[(tau + 1) % h], p);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (!is_integral(a(i, j)))
          issue(tau, "Frobenius matrix not integral", static_cast<int>(i), static_cast<int>(j), *a(i, j).valuation());
    try {
      const TMatrix ainv = tinverse(a);
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
          if (const auto v = ainv(i, j).valuation(); v && *v + p < 0)
            issue(tau, "u^p A^-1 not integral", static_cast<int>(i), static_cast<int>(j), *v + p);
    } catch (const FamilyError&) {
      issue(tau, "A(T) has no inverse with monomial pivots");
    }
    rep.frobenius.push_back(a);
  }

  if (fam.induced) {
    const RankOneData& amb = *fam.induced;
    for (int tau = 0; tau < h; ++tau) {
      const TMatrix& basis = fam.basis[tau];
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
          if (!is_integral(basis(i, j)))
            issue(tau, "family leaves the ambient lattice", static_cast<int>(i), static_cast<int>(j), *basis(i, j).valuation());
      for (std::size_t k = 0; k < n; ++k)
        if (!is_integral(binv[tau] * t_unit(f, static_cast<int>(n), static_cast<int>(k), 1)))
          issue(tau, "u e not in the family", -1, static_cast<int>(k), 1);
      // Residues of the weights on this block.
      std::vector<int> residue(n);
      for (std::size_t k = 0; k < n; ++k) residue[k] = amb.weights[static_cast<std::size_t>(embedding_index(t, tau, k))] % p;
      for (std::size_t c = 0; c < n; ++c) {
        TVec constant(n, TSeries(&f));
        for (std::size_t k = 0; k < n; ++k) {
          const TPoly c0 = basis(k, c).coeff(0);
          if (!c0.is_zero()) constant[k] = TSeries::monomial(f, c0, 0);
        }
        for (int r = 0; r < p; ++r) {
          TVec piece(n, TSeries(&f));
          bool any = false;
          for (std::size_t k = 0; k < n; ++k)
            if (residue[k] == r && !constant[k].is_zero()) {
              piece[k] = constant[k];
              any = true;
            }
          if (any && !is_integral(binv[tau] * piece))
            issue(tau, "slice of generator " + std::to_string(c) + " not stable for residue " + std::to_string(r), -1,
                  static_cast<int>(c));
        }
      }
    }
  } else {
    // Without the slice criterion, SD is checked on A(T) when it does not
    // depend on T, and at every T in F otherwise.
    bool constant = true;
    for (const auto& a : rep.frobenius)
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
          for (const auto& [e, c] : a(i, j).terms()) constant = constant && c.degree() == 0;
    std::vector<Elem> points{f.zero()};
    if (!constant)
      for (std::uint32_t c = 1; c < f.size(); ++c) points.push_back(Elem{c});
    if (rep.ok) {
      for (Elem lambda : points) {
        BKModule at{t, n, {}};
        for (const auto& a : rep.frobenius) at.frobenius.push_back(a.map([&](const TSeries& s) { return s.eval(lambda); }));
        if (!check_sd_direct(at).sd) {
          issue(-1, "not strongly divisible at T = " + f.to_string(lambda));
          break;
        }
      }
    }
  }
  return rep;
}

std::vector<UMatrix> family_basis_at(const Family& fam, Elem t) {
  std::vector<UMatrix> out;
  for (const auto& b : fam.basis) out.push_back(b.map([&](const TSeries& s) { return s.eval(t); }));
  return out;
}

InducedLattice family_lattice_at(const Family& fam, Elem t) {
  if (!fam.induced) throw std::invalid_argument("family is not inside an induced ambient");
  InducedLattice host = InducedLattice::ambient_lattice(*fam.induced);
  std::vector<UVec> gens;
  const auto bases = family_basis_at(fam, t);
  for (int b = 0; b < static_cast<int>(bases.size()); ++b)
    for (const auto& c : columns(bases[static_cast<std::size_t>(b)])) gens.push_back(host.to_full(b, c));
  return InducedLattice::from_generators(*fam.induced, gens);
}

InducedLattice family_lattice_at(const Family& fam, Elem t, const Embedding& emb) {
  if (!fam.induced) throw std::invalid_argument("family is not inside an induced ambient");
  const RankOneData big = extend_coeffs(*fam.induced, emb.target());
  InducedLattice host = InducedLattice::ambient_lattice(big);
  std::vector<UVec> gens;
  for (int b = 0; b < static_cast<int>(fam.basis.size()); ++b) {
    const UMatrix at = fam.basis[static_cast<std::size_t>(b)].map([&](const TSeries& s) { return s.eval(t, emb); });
    for (const auto& c : columns(at)) gens.push_back(host.to_full(b, c));
  }
  return InducedLattice::from_generators(big, gens);
}

ConnectingFamily build_connecting_family(const RankOneData& n, const ShapeAssignment& shape) {
  require_two_dim(n);
  const Tower& t = n.tower;
  const Field& f = *t.field;
  const int h = t.deg_k;
  const int dl = t.deg_l;
  if (static_cast<int>(shape.size()) != h) throw std::invalid_argument("one shape per block expected");
  const int d = d_invariant(shape);
  if (d == 0) throw FamilyError("d = 0: the lattice is already a pushforward");
  if (d == h) throw FamilyError("every block is mixed: no split neighbour to anchor a family");
  int start = -1;
  for (int tau = 0; tau < h && start < 0; ++tau)
    if (shape[tau].mixed && !shape[(tau + h - 1) % h].mixed) start = tau;
  int len = 0;
  while (len < h && shape[(start + len) % h].mixed) ++len;

  ConnectingFamily out;
  out.run_start = start;
  out.run_length = len;
  out.start = shape;
  out.end = shape;
  std::vector<TVec> gens;
  for (int b = 0; b < h; ++b) {
    const BlockShape& bs = shape[static_cast<std::size_t>(b)];
    const int j = (b - start + h) % h;
    if (j < len) {
      const int a = (start + j) % dl;
      const int partner = (a + h) % dl;
      const Elem alpha = a < h ? bs.alpha : f.inv(bs.alpha);
      TVec g = t_unit(f, dl, a, 0);
      g[static_cast<std::size_t>(partner)] = TSeries::monomial(f, TPoly::t_power(f, alpha, 1), 0);
      gens.push_back(std::move(g));
      gens.push_back(t_unit(f, dl, partner, 1));
      BlockShape& e = out.end[static_cast<std::size_t>(b)];
      e = BlockShape{};
      e.x_low = a < h ? 0 : 1;
      e.x_high = a < h ? 1 : 0;
    } else if (bs.mixed) {
      TVec g = t_unit(f, dl, b, 0);
      g[static_cast<std::size_t>(b + h)] = TSeries::monomial(f, TPoly::constant(f, bs.alpha), 0);
      gens.push_back(std::move(g));
      gens.push_back(t_unit(f, dl, b + h, 1));
    } else {
      gens.push_back(t_unit(f, dl, b, bs.x_low));
      gens.push_back(t_unit(f, dl, b + h, bs.x_high));
    }
  }
  out.family = induced_family(n, gens);
  return out;
}

std::vector<ConnectingFamily> connect_to_pushforward(const RankOneData& n, const ShapeAssignment& shape) {
  std::vector<ConnectingFamily> chain;
  ShapeAssignment s = shape;
  while (d_invariant(s) > 0) {
    ConnectingFamily cf = build_connecting_family(n, s);
    const FamilyReport rep = verify_family(cf.family);
    if (!rep.ok) throw FamilyError("connecting family fails verification: " + rep.issues.front().what);
    if (d_invariant(cf.end) >= d_invariant(s)) throw std::logic_error("connecting family did not lower d");
    s = cf.end;
    chain.push_back(std::move(cf));
  }
  return chain;
}

ComponentGraph component_graph(std::vector<InducedLattice> lattices, const std::vector<Family>& families) {
  ComponentGraph g;
  g.nodes = std::move(lattices);
  auto node_of = [&](const InducedLattice& m) {
    for (std::size_t i = 0; i < g.nodes.size(); ++i)
      if (g.nodes[i] == m) return i;
    g.nodes.push_back(m);
    return g.nodes.size() - 1;
  };
  for (const auto& fam : families) {
    const FamilyReport rep = verify_family(fam);
    if (!rep.ok) throw FamilyError("unverified family edge: " + rep.issues.front().what);
    const Field& f = fam.ambient.field();
    const std::size_t a = node_of(family_lattice_at(fam, f.one()));
    const std::size_t b = node_of(family_lattice_at(fam, f.zero()));
    g.edges.emplace_back(a, b);
  }
  const std::size_t count = g.nodes.size();
  std::vector<std::size_t> parent(count);
  std::iota(parent.begin(), parent.end(), std::size_t{0});
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (const auto& [a, b] : g.edges) {
    const std::size_t ra = find(a), rb = find(b);
    if (ra != rb) parent[std::max(ra, rb)] = std::min(ra, rb);
  }

  // Breadth-first search from all pushforward nodes at once.
  std::vector<std::vector<std::size_t>> adj(count);
  for (const auto& [a, b] : g.edges) {
    adj[a].push_back(b);
    adj[b].push_back(a);
  }
  std::vector<bool> pushforward(count, false);
  for (std::size_t i = 0; i < count; ++i) {
    const auto s = classify_shape(g.nodes[i]);
    pushforward[i] = s && d_invariant(*s) == 0;
  }
  const std::size_t none = count;
  std::vector<std::size_t> toward(count, none);
  std::vector<bool> seen(count, false);
  std::deque<std::size_t> queue;
  for (std::size_t i = 0; i < count; ++i)
    if (pushforward[i]) {
      seen[i] = true;
      queue.push_back(i);
    }
  while (!queue.empty()) {
    const std::size_t x = queue.front();
    queue.pop_front();
    for (std::size_t y : adj[x])
      if (!seen[y]) {
        seen[y] = true;
        toward[y] = x;
        queue.push_back(y);
      }
  }

  std::vector<std::size_t> class_of(count, none);
  for (std::size_t i = 0; i < count; ++i) {
    const std::size_t r = find(i);
    if (class_of[r] == none) {
      class_of[r] = g.classes.size();
      g.classes.emplace_back();
    }
    ComponentClass& c = g.classes[class_of[r]];
    c.members.push_back(i);
    c.has_pushforward = c.has_pushforward || pushforward[i];
    std::vector<std::size_t> chain;
    if (seen[i]) {
      for (std::size_t x = i; x != none; x = toward[x]) chain.push_back(x);
    }
    c.chains.push_back(std::move(chain));
  }
  return g;
}

std::string adjacency_text(const ComponentGraph& g) {
  std::vector<std::vector<std::size_t>> adj(g.nodes.size());
  for (const auto& [a, b] : g.edges) {
    adj[a].push_back(b);
    adj[b].push_back(a);
  }
  std::string out;
  for (std::size_t i = 0; i < adj.size(); ++i) {
    std::sort(adj[i].begin(), adj[i].end());
    adj[i].erase(std::unique(adj[i].begin(), adj[i].end()), adj[i].end());
    out += std::to_string(i) + ":";
    for (std::size_t j : adj[i]) out += " " + std::to_string(j);
    out += "\n";
  }
  return out;
}

BKModule reducible_ambient(const Tower& t, const USeries& beta) {
  if (t.deg_k != 1) throw std::invalid_argument("reducible rank-two data lives over Q_p");
  const Field& f = *t.field;
  UMatrix a = identity(f, 2);
  a(0, 1) = beta;
  return BKModule{t, 2, {a}};
}

BKModule reducible_rank2_module(const Tower& t, int r, int s, const USeries& b, const USeries& beta) {
  if (t.deg_k != 1) throw std::invalid_argument("reducible rank-two data lives over Q_p");
  const Field& f = *t.field;
  const int p = t.p;
  UMatrix a(2, 2, USeries(&f));
  a(0, 0) = USeries::monomial(f, f.one(), static_cast<long long>(p - 1) * r);
  a(1, 1) = USeries::monomial(f, f.one(), static_cast<long long>(p - 1) * s);
  a(0, 1) = (b.phi(p) - b.shifted(static_cast<long long>(p - 1) * s) + beta.shifted(static_cast<long long>(p) * s))
                .shifted(-r);
  return BKModule{t, 2, {a}};
}

ReducibleCatalog enumerate_reducible_rank2(const Tower& t, const USeries& beta) {
  if (t.deg_k != 1) throw std::invalid_argument("reducible rank-two data lives over Q_p");
  const Field& f = *t.field;
  const int p = t.p;
  if (!beta.is_exact()) throw std::invalid_argument("beta must be an exact Laurent polynomial");
  ReducibleCatalog cat;
  for (const auto& [e, c] : beta.terms()) {
    if (e > 0) throw std::invalid_argument("beta must have no terms of positive degree");
    if (e <= -p) throw std::invalid_argument("pole depth of beta must be < p");
    cat.pole_depth = std::max(cat.pole_depth, static_cast<int>(-e));
  }
  // b has no poles (a pole of order k in b gives one of order pk in phi(b)
  // that nothing else can cancel); the window still starts below zero so
  // the solver, not this remark, decides.
  const int window = p;
  for (const auto& [r, s] : {std::pair{0, 0}, std::pair{0, 1}, std::pair{1, 0}, std::pair{1, 1}}) {
    const long long min_val = std::max(0, (p - 1) * (r + s) - p);
    const std::size_t unknowns = static_cast<std::size_t>(window + r);  // degrees [-window, r)
    const long long lowest = -static_cast<long long>(p) * window - r - p;
    std::vector<FVec> eqs;
    for (long long d = lowest; d < min_val; ++d) {
      FVec row(unknowns + 1, f.zero());
      for (std::size_t k = 0; k < unknowns; ++k) {
        const long long e = static_cast<long long>(k) - window;
        if (p * e - r == d) row[k] = f.add(row[k], f.one());
        if (e + static_cast<long long>(p - 1) * s - r == d) row[k] = f.sub(row[k], f.one());
      }
      row[unknowns] = beta.coeff(d - static_cast<long long>(p) * s + r);
      eqs.push_back(std::move(row));
    }
    ReducibleEntry entry{r, s, 0, {}};
    std::optional<FVec> particular;
    for (const auto& v : nullspace(f, eqs, unknowns + 1))
      if (!f.is_zero(v[unknowns])) {
        FVec x = v;
        const Elem scale = f.inv(v[unknowns]);
        for (auto& c : x) c = f.mul(c, scale);
        particular = std::move(x);
        break;
      }
    std::vector<FVec> homogeneous = eqs;
    for (auto& row : homogeneous) row.pop_back();
    std::vector<FVec> kernel = nullspace(f, homogeneous, unknowns);
    if (particular) {
      std::size_t count = 1;
      for (std::size_t i = 0; i < kernel.size(); ++i) count *= f.size();
      entry.count = count;
      // All representatives for small counts.
      if (count <= 4096) {
        for (std::size_t idx = 0; idx < count; ++idx) {
          FVec x = *particular;
          std::size_t rest = idx;
          for (const auto& kv : kernel) {
            const Elem c{static_cast<std::uint32_t>(rest % f.size())};
            rest /= f.size();
            for (std::size_t k = 0; k < unknowns; ++k) x[k] = f.add(x[k], f.mul(c, kv[k]));
          }
          USeries b(&f);
          for (std::size_t k = 0; k < unknowns; ++k)
            if (!f.is_zero(x[k])) b += USeries::monomial(f, x[k], static_cast<long long>(k) - window);
          entry.representatives.push_back(b);
        }
      }
    }
    cat.entries.push_back(std::move(entry));
  }
  return cat;
}

}  // namespace bk
