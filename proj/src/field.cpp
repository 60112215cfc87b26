#include "bk/field.hpp"

#include <map>
#include <mutex>
#include <numeric>
#include <sstream>
#include <utility>

namespace bk {

namespace {

constexpr std::uint32_t kNoLog = 0xffffffffu;

using Digits = std::vector<int>;

Digits poly_mod(Digits a, const Digits& m, int p) {
  // m monic
  const int dm = static_cast<int>(m.size()) - 1;
  for (int i = static_cast<int>(a.size()) - 1; i >= dm; --i) {
    const int c = a[i];
    if (c == 0) continue;
    for (int j = 0; j <= dm; ++j) {
      a[i - dm + j] = ((a[i - dm + j] - c * m[j]) % p + p) % p;
    }
  }
  a.resize(std::max(dm, 0));
  return a;
}

bool poly_is_zero(const Digits& a) {
  for (int c : a)
    if (c != 0) return false;
  return true;
}

bool irreducible(const Digits& f, int p) {
  const int n = static_cast<int>(f.size()) - 1;
  if (n == 1) return true;
  for (int d = 1; 2 * d <= n; ++d) {
    long long count = 1;
    for (int i = 0; i < d; ++i) count *= p;
    for (long long code = 0; code < count; ++code) {
      Digits g(d + 1);
      long long c = code;
      for (int i = 0; i < d; ++i) {
        g[i] = static_cast<int>(c % p);
        c /= p;
      }
      g[d] = 1;
      if (poly_is_zero(poly_mod(f, g, p))) return false;
    }
  }
  return true;
}

Digits smallest_irreducible(int p, int n) {
  long long count = 1;
  for (int i = 0; i < n; ++i) count *= p;
  for (long long code = 0; code < count; ++code) {
    Digits f(n + 1);
    long long c = code;
    for (int i = 0; i < n; ++i) {
      f[i] = static_cast<int>(c % p);
      c /= p;
    }
    f[n] = 1;
    if (irreducible(f, p)) return f;
  }
  throw FieldError("no irreducible polynomial found");
}

Digits to_digits(std::uint32_t code, int p, int n) {
  Digits d(n);
  for (int i = 0; i < n; ++i) {
    d[i] = static_cast<int>(code % p);
    code /= p;
  }
  return d;
}

std::uint32_t from_digits(const Digits& d, int p) {
  std::uint32_t code = 0;
  for (int i = static_cast<int>(d.size()) - 1; i >= 0; --i) code = code * p + d[i];
  return code;
}

Digits slow_mul(const Digits& a, const Digits& b, const Digits& m, int p) {
  Digits r(a.size() + b.size(), 0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0) continue;
    for (std::size_t j = 0; j < b.size(); ++j) r[i + j] = (r[i + j] + a[i] * b[j]) % p;
  }
  return poly_mod(std::move(r), m, p);
}

Digits slow_pow(Digits a, long long e, const Digits& m, int p) {
  Digits r(m.size() - 1, 0);
  r[0] = 1;
  while (e > 0) {
    if (e & 1) r = slow_mul(r, a, m, p);
    a = slow_mul(a, a, m, p);
    e >>= 1;
  }
  return r;
}

}  // namespace

bool is_prime(long long n) {
  if (n < 2) return false;
  for (long long d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

std::vector<long long> prime_factors(long long n) {
  std::vector<long long> out;
  for (long long d = 2; d * d <= n; ++d) {
    if (n % d == 0) {
      out.push_back(d);
      while (n % d == 0) n /= d;
    }
  }
  if (n > 1) out.push_back(n);
  return out;
}

Field::Field(int p, int degree) : p_(p), n_(degree) {
  if (!is_prime(p)) throw FieldError("characteristic must be prime: " + std::to_string(p));
  if (degree < 1) throw FieldError("field degree must be positive");
  unsigned long long q = 1;
  for (int i = 0; i < degree; ++i) {
    q *= static_cast<unsigned long long>(p);
    if (q > kMaxSize)
      throw FieldError("field F_" + std::to_string(p) + "^" + std::to_string(degree) +
                       " exceeds the 2^20 element cap");
  }
  q_ = static_cast<std::uint32_t>(q);
  modulus_ = smallest_irreducible(p, degree);

  // Find a primitive element, preferring low codes (cheap multiplication).
  const auto factors = prime_factors(static_cast<long long>(q_) - 1);
  Digits g;
  for (std::uint32_t code = 1; code < q_; ++code) {
    Digits cand = to_digits(code, p, n_);
    bool ok = true;
    for (long long ell : factors) {
      Digits t = slow_pow(cand, (static_cast<long long>(q_) - 1) / ell, modulus_, p);
      if (from_digits(t, p) == 1) {
        ok = false;
        break;
      }
    }
    if (ok) {
      g = std::move(cand);
      break;
    }
  }
  if (g.empty()) throw FieldError("no primitive element");

  const std::uint32_t order = q_ - 1;
  exp_.resize(order);
  log_.assign(q_, kNoLog);
  Digits cur(n_, 0);
  cur[0] = 1;
  for (std::uint32_t k = 0; k < order; ++k) {
    const std::uint32_t code = from_digits(cur, p);
    exp_[k] = Elem{code};
    log_[code] = k;
    cur = slow_mul(cur, g, modulus_, p);
  }
  zech_.resize(order);
  for (std::uint32_t k = 0; k < order; ++k) {
    std::uint32_t code = exp_[k].code;
    const std::uint32_t low = code % p;
    code = code - low + (low + 1) % p;
    zech_[k] = code == 0 ? kNoLog : log_[code];
  }
  log_minus_one_ = p == 2 ? 0 : order / 2;
}

Elem Field::from_int(long long v) const {
  long long r = v % p_;
  if (r < 0) r += p_;
  return Elem{static_cast<std::uint32_t>(r)};
}

Elem Field::generator() const {
  if (n_ == 1) return from_int(-modulus_[0]);
  return Elem{static_cast<std::uint32_t>(p_)};
}

Elem Field::add(Elem a, Elem b) const {
  if (a.code == 0) return b;
  if (b.code == 0) return a;
  if (p_ == 2) return Elem{a.code ^ b.code};
  const std::uint32_t order = q_ - 1;
  const std::uint32_t la = log_[a.code];
  const std::uint32_t lb = log_[b.code];
  const std::uint32_t d = lb >= la ? lb - la : lb + order - la;
  const std::uint32_t z = zech_[d];
  if (z == kNoLog) return zero();
  std::uint32_t e = la + z;
  if (e >= order) e -= order;
  return exp_[e];
}

Elem Field::neg(Elem a) const {
  if (a.code == 0 || p_ == 2) return a;
  std::uint32_t e = log_[a.code] + log_minus_one_;
  if (e >= q_ - 1) e -= q_ - 1;
  return exp_[e];
}

Elem Field::mul(Elem a, Elem b) const {
  if (a.code == 0 || b.code == 0) return zero();
  std::uint32_t e = log_[a.code] + log_[b.code];
  if (e >= q_ - 1) e -= q_ - 1;
  return exp_[e];
}

Elem Field::inv(Elem a) const {
  if (a.code == 0) throw FieldError("inverse of zero");
  const std::uint32_t l = log_[a.code];
  return exp_[l == 0 ? 0 : q_ - 1 - l];
}

Elem Field::pow(Elem a, long long e) const {
  if (a.code == 0) {
    if (e == 0) return one();
    if (e < 0) throw FieldError("inverse of zero");
    return zero();
  }
  const long long order = q_ - 1;
  long long k = (static_cast<long long>(log_[a.code]) * (((e % order) + order) % order)) % order;
  return exp_[static_cast<std::size_t>(k)];
}

std::uint32_t Field::log(Elem a) const {
  if (a.code == 0) throw FieldError("log of zero");
  return log_[a.code];
}

Elem Field::exp(long long k) const {
  const long long order = q_ - 1;
  return exp_[static_cast<std::size_t>(((k % order) + order) % order)];
}

bool Field::in_subfield(Elem a, int d) const {
  if (d <= 0 || n_ % d != 0) throw FieldError("subfield degree must divide the field degree");
  long long q = 1;
  for (int i = 0; i < d; ++i) q *= p_;
  return pow(a, q) == a;
}

std::vector<int> Field::coords(Elem a) const { return to_digits(a.code, p_, n_); }

Elem Field::from_coords(std::span<const int> c) const {
  if (static_cast<int>(c.size()) > n_) throw FieldError("too many coordinates for field element");
  std::uint32_t code = 0;
  for (int i = static_cast<int>(c.size()) - 1; i >= 0; --i) {
    int v = ((c[i] % p_) + p_) % p_;
    code = code * p_ + v;
  }
  return Elem{code};
}

std::string Field::to_string(Elem a) const {
  if (n_ == 1) return std::to_string(a.code);
  std::ostringstream os;
  os << '[';
  auto c = coords(a);
  for (int i = 0; i < n_; ++i) os << (i ? "," : "") << c[i];
  os << ']';
  return os.str();
}

FieldPtr get_field(int p, int degree) {
  static std::mutex mu;
  static std::map<std::pair<int, int>, FieldPtr> cache;
  std::lock_guard lock(mu);
  auto key = std::make_pair(p, degree);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  auto f = std::make_shared<const Field>(p, degree);
  cache.emplace(key, f);
  return f;
}

Embedding::Embedding(FieldPtr from, FieldPtr to) : from_(std::move(from)), to_(std::move(to)) {
  if (from_->characteristic() != to_->characteristic() || to_->degree() % from_->degree() != 0)
    throw FieldError("no embedding between these fields");
  // Least root (by code) of the small modulus inside the large field.
  const auto& m = from_->modulus();
  bool found = false;
  for (std::uint32_t code = 0; code < to_->size() && !found; ++code) {
    Elem x{code};
    Elem acc = to_->zero();
    for (int i = static_cast<int>(m.size()) - 1; i >= 0; --i)
      acc = to_->add(to_->mul(acc, x), to_->from_int(m[i]));
    if (to_->is_zero(acc)) {
      image_of_generator_ = x;
      found = true;
    }
  }
  if (!found) throw FieldError("modulus has no root in target field");
  powers_.resize(from_->degree());
  Elem cur = to_->one();
  for (int i = 0; i < from_->degree(); ++i) {
    powers_[i] = cur;
    cur = to_->mul(cur, image_of_generator_);
  }
}

Elem Embedding::operator()(Elem a) const {
  auto c = from_->coords(a);
  Elem out = to_->zero();
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (c[i] != 0) out = to_->add(out, to_->mul(to_->from_int(c[i]), powers_[i]));
  }
  return out;
}

Tower make_tower(int p, int deg_k, int deg_l, int deg_F) {
  if (!is_prime(p)) throw FieldError("p must be prime");
  if (deg_k < 1 || deg_l < 1 || deg_F < 1) throw FieldError("degrees must be positive");
  if (deg_l % deg_k != 0) throw FieldError("[k:Q_p] must divide [l:Q_p]");
  if (deg_F % deg_l != 0) throw FieldError("[l:Q_p] must divide [F:F_p]");
  return Tower{p, deg_k, deg_l, get_field(p, deg_F)};
}

std::vector<int> embedding_orbit(const Tower& t, int start) {
  std::vector<int> out(t.deg_l);
  for (int i = 0; i < t.deg_l; ++i) out[i] = (start + i) % t.deg_l;
  return out;
}

}  // namespace bk
