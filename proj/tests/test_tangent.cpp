#include "doctest.h"

#include <set>

#include "bk/moduli.hpp"
#include "bk/tangent.hpp"
#include "examples.hpp"

using namespace bk;
using namespace bk::testing;

namespace {

// Every X over F_2 with entries in degrees [-2, 0]; the polar parts of the
// solutions form a space of size 2^dim.
std::size_t brute_force_polar_dim(const BKModule& m) {
  const Field& f = m.field();
  REQUIRE(f.size() == 2);
  REQUIRE(m.blocks() == 1);
  REQUIRE(m.rank == 2);
  std::set<std::vector<int>> polar;
  for (unsigned bits = 0; bits < (1u << 12); ++bits) {
    UMatrix x(2, 2, USeries(&f));
    std::vector<int> key;
    for (unsigned k = 0; k < 12; ++k) {
      const unsigned entry = k / 3;
      const long long deg = static_cast<long long>(k % 3) - 2;
      const bool on = (bits >> k) & 1u;
      if (on) x(entry / 2, entry % 2) += USeries::monomial(f, f.one(), deg);
      if (deg < 0) key.push_back(on);
    }
    if (verify_tangent_solution(m, {x})) polar.insert(key);
  }
  std::size_t dim = 0;
  while ((std::size_t{1} << dim) < polar.size()) ++dim;
  CHECK((std::size_t{1} << dim) == polar.size());
  return dim;
}

}  // namespace

TEST_CASE("trivial module has no polar tangent directions") {
  for (int p : {2, 3, 5}) {
    auto t = make_tower(p, 1, 1, 1);
    const BKModule m{t, 2, {identity(*t.field, 2)}};
    const TangentReport r = solve_tangent(m);
    CHECK(r.non_integral_dim == 0);
    CHECK(r.fiber_point_reduced);
    CHECK(r.pole_bound == p);
  }
}

TEST_CASE("irreducible inductions are reduced points") {
  for (int p : {2, 3, 5})
    for (int r = 0; r <= p; ++r)
      for (int s = 0; s <= p; ++s) {
        const RankOneData n = RankOneData::untwisted(make_tower(p, 1, 2, 2), {r, s});
        if (!induced_irreducible(n)) continue;
        CHECK(solve_tangent(induce(n)).non_integral_dim == 0);
      }
}

TEST_CASE("reducible lattice with a nonsplit extension has a simple pole direction") {
  for (int p : {2, 3, 5}) {
    auto t = make_tower(p, 1, 1, 1);
    const Field& f = *t.field;
    const BKModule m = reducible_rank2_module(t, 0, 1, USeries(&f), mono(f, 1, 0));
    const TangentReport r = solve_tangent(m);
    CHECK(r.non_integral_dim >= 1);
    CHECK_FALSE(r.fiber_point_reduced);
    for (const auto& x : r.polar_basis) {
      CHECK(verify_tangent_solution(m, x));
      long long order = 0;
      for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t j = 0; j < 2; ++j)
          if (!x[0](i, j).known_zero()) order = std::max(order, -x[0](i, j).start());
      CHECK(order == 1);
    }
  }
}

TEST_CASE("solver agrees with brute force over F_2") {
  auto t = make_tower(2, 1, 1, 1);
  const Field& f = *t.field;
  std::vector<BKModule> mods;
  for (int r = 0; r <= 1; ++r)
    for (int s = 0; s <= 1; ++s)
      for (int depth = 0; depth <= 1; ++depth) {
        const BKModule m = reducible_rank2_module(t, r, s, USeries(&f), mono(f, 1, -depth));
        if (check_height(m, 2)) mods.push_back(m);
      }
  for (int r = 0; r <= 2; ++r)
    for (int s = 0; s <= 2; ++s) {
      UMatrix a(2, 2, USeries(&f));
      a(0, 1) = mono(f, 1, r);
      a(1, 0) = mono(f, 1, s);
      mods.push_back(BKModule{t, 2, {a}});
    }
  REQUIRE(mods.size() > 10);
  for (const auto& m : mods) CHECK(solve_tangent(m, 2).non_integral_dim == brute_force_polar_dim(m));
}

TEST_CASE("pole bound saturates") {
  for (int p : {2, 3}) {
    auto t = make_tower(p, 1, 1, 1);
    const Field& f = *t.field;
    const BKModule m = reducible_rank2_module(t, 0, 1, USeries(&f), mono(f, 1, 0));
    CHECK(solve_tangent(m, p).non_integral_dim == solve_tangent(m, 2 * p).non_integral_dim);
  }
  auto t = make_tower(3, 1, 1, 1);
  const BKModule m{t, 1, {identity(*t.field, 1)}};
  CHECK_THROWS_AS(solve_tangent(m, -1), std::invalid_argument);
}

TEST_CASE("fiber report needs a complete enumeration") {
  CHECK_THROWS_AS(fiber_report({}, false), std::invalid_argument);
  TangentReport bad;
  bad.non_integral_dim = 1;
  bad.fiber_point_reduced = false;
  const FiberReport r = fiber_report({{"a", TangentReport{}}, {"b", bad}}, true);
  CHECK(r.points == 2);
  CHECK_FALSE(r.hypothesis_holds);
  CHECK(fiber_report({{"a", TangentReport{}}}, true).hypothesis_holds);
}
