// Acceptance run: one PASS/FAIL line per criterion, with the measured
// runtime against its limit. Exit status is the number of failing
// criteria, except that criteria listed with --known-fail are required to
// fail (they record a documented disagreement) and do not count.
#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <numeric>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "bk/hodge.hpp"
#include "bk/moduli.hpp"
#include "bk/ramseries.hpp"
#include "bk/strong_div.hpp"
#include "bk/tangent.hpp"

using namespace bk;

namespace {

std::mt19937_64 rng(20261015);

int uniform(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

struct Verdict {
  bool ok = false;
  std::string detail;
};

UVec unit(const Field& f, int d, int j, long long e = 0) {
  UVec v(static_cast<std::size_t>(d), USeries(&f));
  v[static_cast<std::size_t>(j)] = USeries::monomial(f, f.one(), e);
  return v;
}

TVec tunit(const Field& f, int d, int j, long long e = 0) {
  TVec v(static_cast<std::size_t>(d), TSeries(&f));
  v[static_cast<std::size_t>(j)] = TSeries::monomial(f, TPoly::constant(f, f.one()), e);
  return v;
}

TSeries tpow(const Field& f, int deg) { return TSeries::monomial(f, TPoly::t_power(f, f.one(), deg), 0); }

std::string num(std::size_t n) { return std::to_string(n); }

// ---- 1: seven-dimensional example --------------------------------------

Family seven_dim_family(const RankOneData& n, int deg_on_e4, int deg_on_e2) {
  const Field& f = *n.tower.field;
  TVec g0 = tunit(f, 7, 6), g1 = tunit(f, 7, 5);
  g0[4] = tpow(f, deg_on_e4);
  g0[2] = tpow(f, deg_on_e2);
  g1[3] = tpow(f, 1);
  return induced_family(n, {g0, g1, tunit(f, 7, 4, 1), tunit(f, 7, 3, 1), tunit(f, 7, 2, 1), tunit(f, 7, 1),
                            tunit(f, 7, 0)});
}

bool links(const Family& fam, const InducedLattice& top, const InducedLattice& pushforward) {
  const Field& f = fam.ambient.field();
  if (!(family_lattice_at(fam, f.one()) == top) || !(family_lattice_at(fam, f.zero()) == pushforward)) return false;
  return component_graph({top, pushforward}, {fam}).classes.size() == 1;
}

Verdict seven_dim_example() {
  bool ok = true;
  std::string detail;
  for (int p : {2, 3, 5}) {
    const RankOneData n = RankOneData::untwisted(make_tower(p, 1, 7, 7), {2, 0, 1, 0, 1, 0, 1});
    const Field& f = *n.tower.field;
    std::vector<UVec> gens{unit(f, 7, 6), unit(f, 7, 5), unit(f, 7, 4, 1), unit(f, 7, 3, 1),
                           unit(f, 7, 2, 1), unit(f, 7, 1), unit(f, 7, 0)};
    const auto pushforward = InducedLattice::from_generators(n, gens);
    gens[0][4] = gens[0][2] = gens[1][3] = USeries::constant(f, f.one());
    const auto lattice = InducedLattice::from_generators(n, gens);

    const bool height = check_height(lattice.module(), p);
    const bool crys = decide_crys(lattice).verdict == CrysVerdict::Crystalline;
    const Family printed = seven_dim_family(n, 2, 1);
    const FamilyReport rep = verify_family(printed);
    const bool printed_links = rep.ok && links(printed, lattice, pushforward);
    ok = ok && height && crys && printed_links;

    detail += " p=" + std::to_string(p) + ": height " + (height ? "ok" : "FAILS") + ", crys " +
              (crys ? "ok" : "FAILS") + ", printed family ";
    if (rep.ok) {
      detail += printed_links ? "verifies and links" : "verifies but does not link";
    } else {
      const FamilyIssue& i = rep.issues.front();
      detail += "rejected (" + i.what + " at row " + std::to_string(i.row) + " col " + std::to_string(i.col) +
                " exponent " + std::to_string(i.exponent) + ")";
      const Family swapped = seven_dim_family(n, 1, 2);
      const bool swapped_links = verify_family(swapped).ok && links(swapped, lattice, pushforward);
      detail += std::string("; with the T powers on e4 and e2 exchanged it ") +
                (swapped_links ? "verifies and links" : "also fails");
    }
    detail += ";";
  }
  return {ok, detail};
}

// ---- 2: dim-2 replay ----------------------------------------------------

Verdict dim2_replay() {
  bool ok = true;
  std::string detail;
  for (auto [p, h] : {std::pair{3, 1}, std::pair{3, 2}, std::pair{5, 1}}) {
    const Tower t = make_tower(p, h, 2 * h, 2 * h);
    const Field& f = *t.field;
    std::size_t vectors = 0, lattices = 0, moved = 0, families = 0, failures = 0;
    std::vector<int> w(static_cast<std::size_t>(2 * h), 0);
    for (;;) {
      ++vectors;
      const RankOneData n = RankOneData::untwisted(t, w);
      for (const auto& s : enumerate_2d(n)) {
        ++lattices;
        if (s.d == 0) continue;
        ++moved;
        try {
          const auto chain = connect_to_pushforward(n, s.shape);
          // Endpoints are rechecked here rather than trusted from the chain.
          bool good = !chain.empty() && family_lattice_at(chain.front().family, f.one()) == s.lattice;
          for (std::size_t i = 0; good && i < chain.size(); ++i) {
            const Family& fam = chain[i].family;
            good = verify_family(fam).ok;
            const InducedLattice end = family_lattice_at(fam, f.zero());
            if (i + 1 < chain.size()) good = good && end == family_lattice_at(chain[i + 1].family, f.one());
            good = good && check_height(end.module(), p) && check_crys_induced(end).crystalline;
          }
          const auto last = classify_shape(family_lattice_at(chain.back().family, f.zero()));
          good = good && last && d_invariant(*last) == 0;
          families += chain.size();
          if (!good) ++failures;
        } catch (const std::exception&) {
          ++failures;
        }
      }
      std::size_t i = 0;
      while (i < w.size() && w[i] == p) w[i++] = 0;
      if (i == w.size()) break;
      ++w[i];
    }
    ok = ok && failures == 0 && lattices > 0;
    detail += " (" + std::to_string(p) + "," + std::to_string(h) + "): " + num(vectors) + " weight vectors, " +
              num(lattices) + " lattices, " + num(moved) + " with d>0, " + num(families) + " families, " +
              num(failures) + " failures;";
  }
  return {ok, detail};
}

// ---- 3: irreducible rank two --------------------------------------------

Verdict irreducible_rank2() {
  std::size_t cases = 0, bad = 0;
  for (int p : {2, 3, 5}) {
    const Tower t = make_tower(p, 1, 1, 1);
    const Field& f = *t.field;
    for (int r = 0; r <= p; ++r)
      for (int s = 0; s <= p; ++s) {
        if (r == s) continue;
        for (std::uint32_t x = 1; x < f.size(); ++x) {
          ++cases;
          UMatrix a(2, 2, USeries(&f));
          a(0, 1) = USeries::monomial(f, Elem{x}, s);
          a(1, 0) = USeries::monomial(f, Elem{x}, r);
          const BKModule m{t, 2, {a}};
          const TangentReport tr = solve_tangent(m);
          const std::vector<int> expected{std::min(r, s), std::max(r, s)};
          if (tr.non_integral_dim != 0 || graded_dims(m).weights[0] != expected) ++bad;
        }
      }
  }
  return {bad == 0, " " + num(cases) + " matrices over p in {2,3,5}, " + num(bad) + " mismatches"};
}

// ---- 4: reducible rank two ----------------------------------------------

std::vector<std::size_t> counts_of(const ReducibleCatalog& c) {
  std::vector<std::size_t> out;
  for (const auto& e : c.entries) out.push_back(e.count);
  return out;
}

std::string show(const std::vector<std::size_t>& v) {
  std::string s = "(";
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + num(v[i]);
  return s + ")";
}

Verdict reducible_rank2() {
  bool ok = true;
  std::string detail;
  for (int p : {3, 5}) {
    const Tower t = make_tower(p, 1, 1, 1);
    const Field& f = *t.field;
    const std::size_t q = f.size();
    const USeries zero(&f);
    const USeries pole = USeries::monomial(f, f.one(), -1);
    const auto unram = counts_of(enumerate_reducible_rank2(t, USeries::constant(f, f.one())));
    const auto beta_zero = counts_of(enumerate_reducible_rank2(t, zero));
    const ReducibleCatalog pole_cat = enumerate_reducible_rank2(t, pole);
    const auto ram = counts_of(pole_cat);
    const bool counts = unram == std::vector<std::size_t>{1, 1, 0, 1} &&
                        beta_zero == std::vector<std::size_t>{1, 1, q, 1} &&
                        ram == std::vector<std::size_t>{0, 1, 0, 1};

    // Hodge type (0, p - 1) is the (r, s) = (0, 1) lattice.
    const bool ram_reduced =
        solve_tangent(reducible_rank2_module(t, 0, 1, pole_cat.entries[1].representatives.at(0), pole))
            .fiber_point_reduced;
    bool unram_nonreduced = true;
    for (std::uint32_t c = 1; c < q; ++c)
      unram_nonreduced = unram_nonreduced &&
                         !solve_tangent(reducible_rank2_module(t, 0, 1, zero, USeries::constant(f, Elem{c})))
                              .fiber_point_reduced;

    TMatrix basis(2, 2, TSeries(&f));
    basis(0, 0) = TSeries::monomial(f, TPoly::constant(f, f.one()), 1);
    basis(0, 1) = tpow(f, 1);
    basis(1, 1) = tpow(f, 0);
    const bool p1 = verify_family(Family{reducible_ambient(t, zero), std::nullopt, {basis}}).ok;

    ok = ok && counts && ram_reduced && unram_nonreduced && p1;
    detail += " p=" + std::to_string(p) + ": beta=1 " + show(unram) + ", beta=0 " + show(beta_zero) +
              ", beta=1/u " + show(ram) + ", ramified " + (ram_reduced ? "reduced" : "non-reduced") +
              ", unramified " + (unram_nonreduced ? "non-reduced" : "reduced somewhere") + ", P1 family " +
              (p1 ? "verifies" : "FAILS") + ";";
  }
  return {ok, detail};
}

// ---- 5: eta valuations --------------------------------------------------

Verdict eta_valuation() {
  std::size_t checked = 0, failures = 0;
  for (int p : {2, 3, 5}) {
    const Field& f = *get_field(p, 1);
    const long long n_max = static_cast<long long>(p) * p * p;
    for (int m = 0; m <= 2; ++m) {
      long long top = 1;
      for (int i = 0; i < 1 + m + 3; ++i) top *= p;
      const long long cap = 2 * top + 8;
      const RamSeries eta = eta_series(f, p, 1, m, cap);
      const RamSeries one = RamSeries::one(f, p - 1, cap);
      RamSeries power = one;
      for (long long n = 1; n <= n_max; ++n) {
        power = power * eta;
        long long vp = 0;
        for (long long x = n; x % p == 0; x /= p) ++vp;
        long long expected = 1;  // numerator over p - 1
        for (long long i = 0; i < 1 + m + vp; ++i) expected *= p;
        ++checked;
        if ((power - one).valuation_numerator() != expected) ++failures;
      }
    }
  }
  return {failures == 0, " " + num(checked) + " (p, m, n) triples, " + num(failures) + " failures"};
}

// ---- 6 and 7: lattice corpus --------------------------------------------

std::vector<InducedLattice> lattice_corpus() {
  std::vector<InducedLattice> out;
  auto add_corpus = [&](const RankOneData& n, std::size_t alpha_limit) {
    for (auto& s : shape_corpus(n, alpha_limit)) out.push_back(std::move(s.lattice));
  };
  for (int p : {2, 3, 5}) {
    // Rank one: the ambient itself, [l:Q_p] in {1, 2}.
    for (int h : {1, 2}) {
      const Tower t = make_tower(p, h, h, h);
      std::vector<int> w(static_cast<std::size_t>(h), 0);
      for (;;) {
        out.push_back(InducedLattice::ambient_lattice(RankOneData::untwisted(t, w)));
        std::size_t i = 0;
        while (i < w.size() && w[i] == p) w[i++] = 0;
        if (i == w.size()) break;
        ++w[i];
      }
    }
    const Tower t2 = make_tower(p, 1, 2, 2);
    for (int a = 0; a <= p; ++a)
      for (int b = 0; b <= p; ++b) add_corpus(RankOneData::untwisted(t2, {a, b}), 0);
    const Tower t4 = make_tower(p, 2, 4, 4);
    if (p == 5) {
      for (int k = 0; k < 12; ++k)
        add_corpus(RankOneData::untwisted(t4, {uniform(0, p), uniform(0, p), uniform(0, p), uniform(0, p)}), 2);
    } else {
      std::vector<int> w(4, 0);
      for (;;) {
        add_corpus(RankOneData::untwisted(t4, w), 2);
        std::size_t i = 0;
        while (i < w.size() && w[i] == p) w[i++] = 0;
        if (i == w.size()) break;
        ++w[i];
      }
    }
  }
  return out;
}

const std::vector<InducedLattice>& corpus() {
  static const std::vector<InducedLattice> c = lattice_corpus();
  return c;
}

Verdict criterion_vs_oracle() {
  std::size_t agree = 0, crystalline = 0;
  const auto& c = corpus();
  const auto results = batch_map(c.size(), [&](std::size_t i) {
    const bool crit = check_crys_induced(c[i]).crystalline;
    return std::pair{crit, crit == galois_defect_oracle(c[i]).crystalline};
  });
  for (const auto& [crit, same] : results) {
    agree += same;
    crystalline += crit;
  }
  const bool ok = c.size() >= 500 && agree == c.size() && crystalline > 0 && crystalline < c.size();
  return {ok, " " + num(agree) + "/" + num(c.size()) + " agree (" + num(crystalline) + " crystalline)"};
}

bool claims_crystalline(CrysVerdict v) {
  return v == CrysVerdict::Crystalline || v == CrysVerdict::CertifiedCrystalline;
}

// Upper triangular rank two with a random extension class; the line e_0 is
// phi-stable, so it is a filtration.
struct FilteredCase {
  BKModule module;
  std::vector<Subspace> flag;
  std::vector<JHFactor> factors;
};

std::vector<FilteredCase> filtered_corpus() {
  std::vector<FilteredCase> out;
  while (out.size() < 400) {
    const int p = std::vector<int>{2, 3, 5}[static_cast<std::size_t>(uniform(0, 2))];
    const Tower t = make_tower(p, 1, 1, 1);
    const Field& f = *t.field;
    const int r = uniform(0, p), s = uniform(0, p);
    UMatrix a(2, 2, USeries(&f));
    a(0, 0) = USeries::monomial(f, f.from_int(uniform(1, p - 1)), r);
    a(1, 1) = USeries::monomial(f, f.from_int(uniform(1, p - 1)), s);
    for (int e = 0; e <= p; ++e)
      if (uniform(0, 2) == 0) a(0, 1) += USeries::monomial(f, f.from_int(uniform(1, p - 1)), e);
    const BKModule m{t, 2, {a}};
    if (!check_height(m, p)) continue;
    const std::vector<JHFactor> factors{{1, uniform(0, p - 1), uniform(0, 2)}, {1, uniform(0, p - 1), uniform(0, 2)}};
    out.push_back({m, {Subspace{{unit(f, 2, 0)}}}, factors});
  }
  return out;
}

Verdict inclusion_property() {
  std::size_t violations = 0, claimed = 0, not_sd = 0;
  const auto& c = corpus();
  const auto induced = batch_map(c.size(), [&](std::size_t i) {
    return std::pair{claims_crystalline(decide_crys(c[i]).verdict), check_sd_direct(c[i].module()).sd};
  });
  for (const auto& [crys, sd] : induced) {
    claimed += crys;
    not_sd += !sd;
    if (crys && !sd) ++violations;
  }
  const auto filtered = filtered_corpus();
  for (bool strong : {false, true})
    for (const auto& fc : filtered) {
      const CrysDecision d = decide_crys(fc.module, fc.flag, fc.factors, strong);
      const bool sd = check_sd_direct(fc.module).sd;
      claimed += claims_crystalline(d.verdict);
      not_sd += !sd;
      if (claims_crystalline(d.verdict) && !sd) ++violations;
    }
  const std::size_t total = c.size() + 2 * filtered.size();
  return {violations == 0 && claimed > 0 && not_sd > 0,
          " " + num(total) + " instances (" + num(c.size()) + " induced, " + num(2 * filtered.size()) +
              " filtered), " + num(claimed) + " claimed crystalline, " + num(not_sd) + " not SD, " +
              num(violations) + " violations"};
}

// ---- 8: graded pieces ---------------------------------------------------

UMatrix random_unit_matrix(const Field& f, std::size_t n) {
  for (;;) {
    UMatrix c(n, n, USeries(&f));
    std::vector<FVec> rows(n, FVec(n));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        rows[i][j] = Elem{static_cast<std::uint32_t>(uniform(0, static_cast<int>(f.size()) - 1))};
        c(i, j) = USeries::constant(f, rows[i][j]);
        for (int e = 1; e <= 2; ++e)
          if (uniform(0, 2) == 0) c(i, j) += USeries::monomial(f, f.one(), e);
      }
    if (rank_of(f, rows, n) == n) return c;
  }
}

// Cofactor expansion; exact for the polynomial matrices used here.
USeries det(const UMatrix& a) {
  const std::size_t n = a.rows();
  if (n == 1) return a(0, 0);
  USeries out(a(0, 0).field());
  for (std::size_t j = 0; j < n; ++j) {
    UMatrix minor(n - 1, n - 1, USeries(a(0, 0).field()));
    for (std::size_t i = 1; i < n; ++i)
      for (std::size_t k = 0, c = 0; k < n; ++k)
        if (k != j) minor(i - 1, c++) = a(i, k);
    const USeries term = a(0, j) * det(minor);
    out = j % 2 ? out - term : out + term;
  }
  return out;
}

Verdict graded_pieces() {
  std::size_t cases = 0, bad = 0;
  for (int trial = 0; trial < 320; ++trial) {
    const int p = std::vector<int>{2, 3, 5}[static_cast<std::size_t>(trial % 3)];
    const int h = uniform(1, 2);
    const Tower t = make_tower(p, h, h, h);
    const Field& f = *t.field;
    const auto n = static_cast<std::size_t>(uniform(1, 3));
    std::vector<UMatrix> blocks;
    for (int tau = 0; tau < h; ++tau) {
      std::vector<long long> r(n);
      for (auto& x : r) x = uniform(0, p);
      blocks.push_back(random_unit_matrix(f, n) * diagonal_monomials(f, r) * random_unit_matrix(f, n));
    }
    const BKModule m{t, n, blocks};
    const HodgeType type = graded_dims(m);
    ++cases;
    bool good = type.weights.size() == static_cast<std::size_t>(h);
    for (int tau = 0; good && tau < h; ++tau) {
      const auto& w = type.weights[static_cast<std::size_t>(tau)];
      long long dims = 0, mass = 0;
      for (int i = 0; i <= p; ++i) {
        const long long g = brute_force_graded(m, tau, i, 64);
        good = good && g == std::count(w.begin(), w.end(), i);
        dims += g;
        mass += g * i;
      }
      const long long vdet = det(blocks[static_cast<std::size_t>(tau)]).valuation().value();
      good = good && dims == static_cast<long long>(n) && mass == vdet;
    }
    if (!good) ++bad;
  }
  return {cases >= 300 && bad == 0, " " + num(cases) + " modules, " + num(bad) + " mismatches"};
}

// ---- 9: tangent count ---------------------------------------------------

Verdict tangent_counting() {
  std::size_t bad = 0;
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<int> w(static_cast<std::size_t>(uniform(0, 8)));
    for (auto& x : w) x = uniform(0, 5);
    const long long d = uniform(0, 6);
    long long pairs = 0;
    for (int i : w)
      for (int j : w) pairs += i > j;
    if (tangent_count(d, w) != d * d + pairs) ++bad;
  }
  std::size_t constant = 0;
  for (long long d = 0; d <= 6; ++d)
    for (int len = 0; len <= 6; ++len)
      for (int v = 0; v <= 5; ++v) {
        ++constant;
        if (tangent_count(d, std::vector<int>(static_cast<std::size_t>(len), v)) != d * d) ++bad;
      }
  return {bad == 0, " 100 random multisets and " + num(constant) + " constant ones, " + num(bad) + " mismatches"};
}

struct Criterion {
  int id;
  const char* name;
  double limit_seconds;
  std::function<Verdict()> run;
};

}  // namespace

int main(int argc, char** argv) {
  std::set<int> known_fail;
  for (int i = 1; i < argc; ++i) {
    if (std::string(argv[i]) == "--known-fail" && i + 1 < argc) {
      known_fail.insert(std::atoi(argv[++i]));
    } else {
      std::fprintf(stderr, "usage: %s [--known-fail N]...\n", argv[0]);
      return 2;
    }
  }

  const std::vector<Criterion> criteria{
      {1, "seven-dimensional example", 5, seven_dim_example},
      {2, "dim-2 replay", 600, dim2_replay},
      {3, "irreducible rank two", 30, irreducible_rank2},
      {4, "reducible rank two", 60, reducible_rank2},
      {5, "eta valuations", 60, eta_valuation},
      {6, "criterion vs Galois oracle", 600, criterion_vs_oracle},
      {7, "crystalline implies SD", 600, inclusion_property},
      {8, "graded pieces vs cokernel count", 600, graded_pieces},
      {9, "tangent count", 10, tangent_counting},
  };

  int unexpected = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = c.run();
    } catch (const std::exception& e) {
      v = {false, std::string(" threw: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool pass = v.ok && secs < c.limit_seconds;
    std::printf("%s %d %s:%s [%.2f s, limit %.0f s]\n", pass ? "PASS" : "FAIL", c.id, c.name, v.detail.c_str(),
                secs, c.limit_seconds);
    std::fflush(stdout);
    if (pass == known_fail.contains(c.id)) ++unexpected;
  }
  if (!known_fail.empty()) std::printf("%d criteria differ from the expected outcome\n", unexpected);
  return unexpected;
}
