#pragma once

#include <compare>
#include <cstdint>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace bk {

// Element of a finite field, stored as the base-p code of its coordinates
// in the polynomial basis 1, X, ..., X^{n-1}.
struct Elem {
  std::uint32_t code = 0;
  friend constexpr auto operator<=>(Elem, Elem) = default;
};

class FieldError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// F_{p^n} with log/exp and Zech tables. Sizes are capped at 2^20 elements.
class Field {
 public:
  static constexpr std::uint32_t kMaxSize = 1u << 20;

  Field(int p, int degree);

  int characteristic() const { return p_; }
  int degree() const { return n_; }
  std::uint32_t size() const { return q_; }

  Elem zero() const { return Elem{0}; }
  Elem one() const { return Elem{1}; }
  Elem from_int(long long v) const;
  Elem primitive() const { return exp_[1 % (q_ - 1)]; }
  // The class of X in F_p[X]/(modulus).
  Elem generator() const;

  bool is_zero(Elem a) const { return a.code == 0; }
  Elem add(Elem a, Elem b) const;
  Elem sub(Elem a, Elem b) const { return add(a, neg(b)); }
  Elem neg(Elem a) const;
  Elem mul(Elem a, Elem b) const;
  Elem inv(Elem a) const;
  Elem div(Elem a, Elem b) const { return mul(a, inv(b)); }
  Elem pow(Elem a, long long e) const;
  Elem frobenius(Elem a) const { return pow(a, p_); }
  // Discrete log w.r.t. primitive(); a must be nonzero.
  std::uint32_t log(Elem a) const;
  Elem exp(long long k) const;

  // True when a lies in the subfield F_{p^d} (d must divide the degree).
  bool in_subfield(Elem a, int d) const;

  std::vector<int> coords(Elem a) const;
  Elem from_coords(std::span<const int> c) const;
  // Monic modulus, low coefficient first, length degree+1.
  const std::vector<int>& modulus() const { return modulus_; }

  std::string to_string(Elem a) const;

 private:
  int p_;
  int n_;
  std::uint32_t q_;
  std::vector<int> modulus_;
  std::vector<std::uint32_t> log_;
  std::vector<Elem> exp_;
  // zech_[k] = log(1 + g^k), or kNoLog when 1 + g^k = 0.
  std::vector<std::uint32_t> zech_;
  std::uint32_t log_minus_one_ = 0;
};

using FieldPtr = std::shared_ptr<const Field>;

// Shared, thread-safe cache so repeated towers reuse tables.
FieldPtr get_field(int p, int degree);

// Embedding F_{p^a} -> F_{p^b} (a | b), sending the generator of the small
// field to the least root (by code) of its modulus in the large one.
class Embedding {
 public:
  Embedding(FieldPtr from, FieldPtr to);
  Elem operator()(Elem a) const;
  const FieldPtr& source() const { return from_; }
  const FieldPtr& target() const { return to_; }

 private:
  FieldPtr from_;
  FieldPtr to_;
  Elem image_of_generator_;
  std::vector<Elem> powers_;  // images of X^i
};

// The data (p, [k:Q_p], [l:Q_p], [F:F_p]) with [k] | [l] | [F].
struct Tower {
  int p = 2;
  int deg_k = 1;
  int deg_l = 1;
  FieldPtr field;

  int deg_F() const { return field->degree(); }
  // Block (embedding of k) that the embedding of l with index j restricts to.
  int restrict_index(int j) const { return ((j % deg_k) + deg_k) % deg_k; }
  int block_rank() const { return deg_l / deg_k; }
};

Tower make_tower(int p, int deg_k, int deg_l, int deg_F);

// Indices of the embeddings of l, in the order theta, theta o phi, ...
std::vector<int> embedding_orbit(const Tower& t, int start = 0);

bool is_prime(long long n);
std::vector<long long> prime_factors(long long n);

}  // namespace bk
