#include "doctest.h"

#include "bk/induced.hpp"
#include "bk/ramseries.hpp"
#include "bk/strong_div.hpp"
#include "examples.hpp"

using namespace bk;
using namespace bk::testing;

TEST_CASE("theta exponents satisfy p Theta_{j+1} = Theta_j + (p^d - 1) r_j") {
  for (int trial = 0; trial < 50; ++trial) {
    const int p = std::vector<int>{2, 3, 5, 7}[random_int(0, 3)];
    const int d = random_int(1, 5);
    std::vector<int> w(static_cast<std::size_t>(d));
    for (auto& x : w) x = random_int(0, p);
    const RankOneData n = RankOneData::untwisted(make_tower(p, 1, d, d), w);
    long long pd = 1;
    for (int i = 0; i < d; ++i) pd *= p;
    for (int j = 0; j < d; ++j)
      CHECK(p * theta_exponent(n, j + 1) == theta_exponent(n, j) + (pd - 1) * w[static_cast<std::size_t>(j)]);
  }
}

TEST_CASE("seven-dimensional lattice is crystalline") {
  for (int p : {2, 3}) {
    const RankOneData amb = seven_dim_ambient(p);
    const Field& f = *amb.tower.field;
    const InducedLattice m = InducedLattice::from_generators(amb, seven_dim_generators(f));
    CHECK(m.inside_ambient());
    CHECK(check_height(m.module(), p));
    const auto crit = check_crys_induced(m);
    CHECK(crit.crystalline);
    CHECK(crit.slices[0].slice_dim == 4);
    CHECK(galois_defect_oracle(m).crystalline);
    const SDReport sd = check_sd_induced(m);
    CHECK(sd.sd);
    CHECK(verify_sd_witness(m.module(), sd.witness));
    // Coordinates of e6 + e4 + e2 in the Hermite basis are a unit vector.
    const UVec c = m.blocks[0].solve(seven_dim_generators(f)[0]);
    int nonzero = 0;
    for (const auto& s : c) nonzero += !s.is_exact_zero();
    CHECK(nonzero == 1);
  }
}

TEST_CASE("slice lattices: criterion, oracle and SD agree") {
  // [k:Q_p] = 2, [l:Q_p] = 4: blocks (e0, e2) and (e1, e3). Each block of M
  // is u f_*N plus one line; every weight vector in [0,p]^4.
  for (int p : {2, 3}) {
    auto t = make_tower(p, 2, 4, 4);
    const Field& f = *t.field;
    std::vector<Elem> slopes;
    for (std::uint32_t c = 1; c < f.size() && slopes.size() < 4; ++c) slopes.push_back(Elem{c});
    const int shapes = static_cast<int>(slopes.size()) + 2;
    int failing = 0, passing = 0;
    int weights = 1;
    for (int i = 0; i < 4; ++i) weights *= p + 1;
    for (int wi = 0; wi < weights; ++wi) {
      std::vector<int> w(4);
      for (int x = wi; auto& r : w) { r = x % (p + 1); x /= p + 1; }
      const RankOneData amb = RankOneData::untwisted(t, w);
      for (int s0 = 0; s0 < shapes; ++s0) {
        for (int s1 = 0; s1 < shapes; ++s1) {
          std::vector<UVec> gens;
          for (int j = 0; j < 4; ++j) gens.push_back(unit(f, 4, j, 1));
          for (const auto [b, s] : {std::pair{0, s0}, std::pair{1, s1}}) {
            UVec g = unit(f, 4, s == 1 ? b + 2 : b);
            if (s >= 2) g[static_cast<std::size_t>(b + 2)] = USeries::constant(f, slopes[static_cast<std::size_t>(s - 2)]);
            gens.push_back(g);
          }
          const InducedLattice m = InducedLattice::from_generators(amb, gens);
          if (!check_height(m.module(), p)) continue;
          const bool crit = check_crys_induced(m).crystalline;
          const GaloisDefect d = galois_defect_oracle(m);
          CHECK(crit == d.crystalline);
          CHECK(check_sd_induced(m).sd == crit);
          (crit ? passing : failing) += 1;
          if (!crit) CHECK(galois_defect_oracle(m, 1).min_margin_num > d.min_margin_num);
        }
      }
    }
    CHECK(failing > 0);
    CHECK(passing > 0);
  }
}

TEST_CASE("criterion preconditions") {
  auto t = make_tower(3, 1, 2, 2);
  const Field& f = *t.field;
  RankOneData twisted = RankOneData::untwisted(t, {1, 2});
  twisted.twist[0] = f.from_int(2);
  CHECK_THROWS_AS(check_crys_induced(InducedLattice::ambient_lattice(twisted)), PreconditionError);
  const RankOneData tall = RankOneData::untwisted(t, {1, 4});
  CHECK_THROWS_AS(check_crys_induced(InducedLattice::ambient_lattice(tall)), PreconditionError);
}

TEST_CASE("eta valuations at small parameters") {
  const Field& f = *get_field(3, 1);
  const RamSeries eta = eta_series(f, 3, 2, 0, 200);
  for (long long n = 1; n <= 20; ++n) {
    const RamSeries d = eta.pow(n) - RamSeries::one(f, 2, 200);
    long long expect = 3;
    for (long long k = n; k % 3 == 0; k /= 3) expect *= 3;
    CHECK(d.valuation_numerator() == expect);
  }
}
