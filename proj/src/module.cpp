#include "bk/module.hpp"

#include <numeric>
#include <stdexcept>
#include <tuple>

namespace bk {

RankOneData RankOneData::untwisted(const Tower& t, std::vector<int> weights) {
  RankOneData n{t, std::move(weights), {}};
  n.twist.assign(static_cast<std::size_t>(t.deg_l), t.field->one());
  validate(n);
  return n;
}

bool RankOneData::untwisted() const {
  for (auto x : twist)
    if (x != tower.field->one()) return false;
  return true;
}

BlockSlot block_slot(const Tower& t, int j) {
  const int jj = ((j % t.deg_l) + t.deg_l) % t.deg_l;
  return BlockSlot{jj % t.deg_k, static_cast<std::size_t>(jj / t.deg_k)};
}

int embedding_index(const Tower& t, int block, std::size_t pos) {
  return block + static_cast<int>(pos) * t.deg_k;
}

void validate(const BKModule& m) {
  if (static_cast<int>(m.frobenius.size()) != m.tower.deg_k)
    throw std::invalid_argument("expected one Frobenius matrix per embedding of k");
  for (const auto& a : m.frobenius)
    if (a.rows() != m.rank || a.cols() != m.rank) throw std::invalid_argument("Frobenius matrix has wrong shape");
}

void validate(const RankOneData& n) {
  if (static_cast<int>(n.weights.size()) != n.tower.deg_l)
    throw std::invalid_argument("expected one weight per embedding of l");
  if (static_cast<int>(n.twist.size()) != n.tower.deg_l)
    throw std::invalid_argument("expected one twist entry per embedding of l");
  for (int r : n.weights)
    if (r < 0) throw std::invalid_argument("weights must be non-negative");
  for (auto x : n.twist)
    if (n.tower.field->is_zero(x)) throw std::invalid_argument("twist entries must be nonzero");
}

namespace {

long long resolve_precision(const BKModule& m, long long precision) {
  return precision > 0 ? precision : default_precision(m.tower.p, m.rank);
}

}  // namespace

std::vector<std::vector<long long>> hodge_exponents(const BKModule& m, long long precision) {
  validate(m);
  std::vector<std::vector<long long>> out;
  for (const auto& a : m.frobenius) {
    if (!is_integral(a)) throw std::domain_error("Frobenius matrix is not integral");
    out.push_back(elementary_divisors(a, resolve_precision(m, precision)));
  }
  return out;
}

bool check_height(const BKModule& m, int h, long long precision) {
  validate(m);
  for (const auto& a : m.frobenius) {
    if (!is_integral(a)) return false;
    for (long long e : elementary_divisors(a, resolve_precision(m, precision)))
      if (e > h) return false;
  }
  return true;
}

std::vector<UVec> phi_image(const BKModule& m, const std::vector<UVec>& element) {
  validate(m);
  const int h = m.blocks();
  std::vector<UVec> out(static_cast<std::size_t>(h));
  for (int t = 0; t < h; ++t) out[t] = m.frobenius[t] * phi(element[(t + 1) % h], m.tower.p);
  return out;
}

BKModule induce(const RankOneData& n) {
  validate(n);
  const Tower& t = n.tower;
  const Field& f = *t.field;
  const auto rank = static_cast<std::size_t>(t.block_rank());
  BKModule m{t, rank, {}};
  for (int tau = 0; tau < t.deg_k; ++tau) {
    UMatrix a(rank, rank, USeries(&f));
    const int src_block = (tau + 1) % t.deg_k;
    for (std::size_t c = 0; c < rank; ++c) {
      const int src = embedding_index(t, src_block, c);
      const int dst = ((src - 1) % t.deg_l + t.deg_l) % t.deg_l;
      const BlockSlot slot = block_slot(t, dst);
      a(slot.pos, c) = USeries::monomial(f, n.twist[dst], n.weights[dst]);
    }
    m.frobenius.push_back(std::move(a));
  }
  return m;
}

BKModule restrict_to_qp(const BKModule& m) {
  validate(m);
  const int h = m.blocks();
  const std::size_t n = m.rank;
  Tower t = m.tower;
  t.deg_l = t.deg_l / t.deg_k;
  t.deg_k = 1;
  BKModule out{t, n * static_cast<std::size_t>(h), {}};
  UMatrix big(n * h, n * h, USeries(&m.field()));
  for (int tau = 0; tau < h; ++tau) {
    const std::size_t ro = static_cast<std::size_t>(tau) * n;
    const std::size_t co = static_cast<std::size_t>((tau + 1) % h) * n;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) big(ro + i, co + j) = m.frobenius[tau](i, j);
  }
  out.frobenius.push_back(std::move(big));
  return out;
}

UMatrix extend_matrix(const UMatrix& a, const Embedding& emb) {
  const Field& g = *emb.target();
  return a.map([&](const USeries& s) {
    std::vector<std::pair<long long, Elem>> terms = s.terms();
    USeries out = s.is_exact() ? USeries(&g) : USeries::zero_mod(g, s.cap());
    for (auto [e, c] : terms) out += USeries::monomial(g, emb(c), e);
    return out;
  });
}

BKModule extend_coeffs(const BKModule& m, const FieldPtr& larger) {
  Embedding emb(m.tower.field, larger);
  BKModule out = m;
  out.tower.field = larger;
  for (auto& a : out.frobenius) a = extend_matrix(a, emb);
  return out;
}

RankOneData extend_coeffs(const RankOneData& n, const FieldPtr& larger) {
  Embedding emb(n.tower.field, larger);
  RankOneData out = n;
  out.tower.field = larger;
  for (auto& x : out.twist) x = emb(x);
  return out;
}

namespace {

// Smallest k >= 0 with k * n = l mod order, if any.
std::optional<long long> solve_exponent(long long n, long long l, long long order) {
  const long long g = std::gcd(n % order, order);
  if (l % g != 0) return std::nullopt;
  const long long mod = order / g;
  const long long nn = (n / g) % mod, ll = (l / g) % mod;
  if (mod == 1) return 0;
  // inverse of nn mod `mod`
  long long t = 0, newt = 1, r = mod, newr = nn;
  while (newr != 0) {
    const long long q = r / newr;
    std::tie(t, newt) = std::make_pair(newt, t - q * newt);
    std::tie(r, newr) = std::make_pair(newr, r - q * newr);
  }
  if (t < 0) t += mod;
  return static_cast<long long>((static_cast<__int128>(ll) * t) % mod);
}

}  // namespace

NormalizedTwist normalize_twist(const RankOneData& n) {
  validate(n);
  const Tower& t = n.tower;
  const int p = t.p;
  const int d = t.deg_l;
  long long pd = 1;
  for (int i = 0; i < d; ++i) pd *= p;
  for (int e = 1;; ++e) {
    const long long deg = static_cast<long long>(t.deg_F()) * e;
    long long size = 1;
    for (long long i = 0; i < deg && size <= Field::kMaxSize; ++i) size *= p;
    if (size > Field::kMaxSize)
      throw FieldError("twist normalization needs a coefficient field beyond the 2^20 cap");
    FieldPtr g = get_field(p, static_cast<int>(deg));
    Embedding emb(t.field, g);
    std::vector<Elem> x(static_cast<std::size_t>(d));
    for (int j = 0; j < d; ++j) x[j] = emb(n.twist[j]);
    // c = prod x_j^{p^j}
    Elem c = g->one();
    long long pj = 1;
    for (int j = 0; j < d; ++j) {
      c = g->mul(c, g->pow(x[j], pj));
      pj *= p;
    }
    const long long order = static_cast<long long>(g->size()) - 1;
    const long long target = (order - static_cast<long long>(g->log(c))) % order;
    auto k = solve_exponent(pd - 1, target, order);
    if (!k) continue;
    std::vector<Elem> y(static_cast<std::size_t>(d));
    y[0] = g->exp(*k);
    // y_{j+1} = (y_j / x_j)^{1/p}; the p-th root is the inverse Frobenius.
    const long long root = g->size() / p;
    for (int j = 0; j + 1 < d; ++j) y[j + 1] = g->pow(g->div(y[j], x[j]), root);
    NormalizedTwist out;
    out.normalized = extend_coeffs(n, g);
    for (auto& xi : out.normalized.twist) xi = g->one();
    out.extension_degree = e;
    out.scaling = std::move(y);
    return out;
  }
}

Extension sub_quotient(const BKModule& m, const std::vector<std::vector<UVec>>& subspace, long long precision) {
  validate(m);
  const int h = m.blocks();
  if (static_cast<int>(subspace.size()) != h) throw std::invalid_argument("subspace must be given per block");
  const Field& f = m.field();
  const std::size_t n = m.rank;
  const long long prec = resolve_precision(m, precision);
  std::vector<UMatrix> change(h), change_inv(h);
  std::size_t k_common = 0;
  for (int tau = 0; tau < h; ++tau) {
    const auto& span = subspace[tau];
    const std::size_t s = span.size();
    UMatrix b(n, s, USeries(&f));
    for (std::size_t j = 0; j < s; ++j) {
      if (span[j].size() != n) throw std::invalid_argument("subspace vector has wrong length");
      b.set_column(j, span[j]);
    }
    UMatrix left = identity(f, n);      // L with L B R = D
    UMatrix left_inv = identity(f, n);  // L^{-1}
    std::size_t k = 0;
    for (; k < std::min(n, s); ++k) {
      std::size_t pi = n, pj = s;
      long long best = USeries::kExact;
      for (std::size_t i = k; i < n; ++i)
        for (std::size_t j = k; j < s; ++j)
          if (!b(i, j).known_zero() && b(i, j).start() < best) {
            best = b(i, j).start();
            pi = i;
            pj = j;
          }
      if (pi == n) break;
      for (std::size_t j = 0; j < s; ++j) std::swap(b(k, j), b(pi, j));
      for (std::size_t j = 0; j < n; ++j) std::swap(left(k, j), left(pi, j));
      for (std::size_t i = 0; i < n; ++i) std::swap(left_inv(i, k), left_inv(i, pi));
      for (std::size_t i = 0; i < n; ++i) std::swap(b(i, k), b(i, pj));
      const USeries pivot_inv = b(k, k).inverse(prec);
      for (std::size_t i = 0; i < n; ++i) b(i, k) = b(i, k) * pivot_inv;
      for (std::size_t j = 0; j < s; ++j) {
        if (j == k || b(k, j).is_exact_zero()) continue;
        const USeries c = b(k, j);
        for (std::size_t i = 0; i < n; ++i) b(i, j) -= c * b(i, k);
      }
      for (std::size_t i = k + 1; i < n; ++i) {
        if (b(i, k).is_exact_zero()) continue;
        const USeries c = b(i, k);  // integral: pivot had minimal valuation
        for (std::size_t j = 0; j < s; ++j) b(i, j) -= c * b(k, j);
        for (std::size_t j = 0; j < n; ++j) left(i, j) -= c * left(k, j);
        for (std::size_t r = 0; r < n; ++r) left_inv(r, k) += c * left_inv(r, i);
      }
    }
    if (tau == 0) k_common = k;
    if (k != k_common) throw std::invalid_argument("subspace rank differs between blocks");
    change[tau] = std::move(left_inv);
    change_inv[tau] = std::move(left);
  }
  const std::size_t k = k_common;
  if (k == 0 || k == n) throw std::invalid_argument("subspace must be proper and nonzero");
  Extension ext;
  ext.sub = BKModule{m.tower, k, {}};
  ext.quotient = BKModule{m.tower, n - k, {}};
  for (int tau = 0; tau < h; ++tau) {
    const UMatrix a = change_inv[tau] * m.frobenius[tau] * phi(change[(tau + 1) % h], m.tower.p);
    UMatrix aw(k, k), az(n - k, n - k), b12(k, n - k);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        const USeries& e = a(i, j);
        if (i >= k && j < k) {
          if (!e.known_zero()) throw std::invalid_argument("subspace is not phi-stable");
        } else if (i < k && j < k) {
          aw(i, j) = e;
        } else if (i >= k && j >= k) {
          az(i - k, j - k) = e;
        } else {
          b12(i, j - k) = e;
        }
      }
    ext.sub.frobenius.push_back(aw);
    ext.quotient.frobenius.push_back(az);
    ext.cocycle.push_back(b12 * inverse(az, prec));
  }
  ext.change_of_basis = std::move(change);
  ext.change_inverse = std::move(change_inv);
  return ext;
}

}  // namespace bk
