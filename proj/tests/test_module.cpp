#include "doctest.h"

#include "bk/module.hpp"
#include "examples.hpp"

using namespace bk;
using namespace bk::testing;

TEST_CASE("induced rank-one module over Q_p of degree two") {
  auto t = make_tower(5, 1, 2, 2);
  const Field& f = *t.field;
  const BKModule m = induce(RankOneData::untwisted(t, {3, 1}));
  REQUIRE(m.frobenius.size() == 1);
  const UMatrix& a = m.frobenius[0];
  // phi(e_1) = u^{r_0} e_0 and phi(e_0) = u^{r_1} e_1.
  CHECK(a(0, 0).is_exact_zero());
  CHECK(a(0, 1) == mono(f, 1, 3));
  CHECK(a(1, 0) == mono(f, 1, 1));
  CHECK(a(1, 1).is_exact_zero());
  CHECK(hodge_exponents(m)[0] == std::vector<long long>{1, 3});
}

TEST_CASE("block structure of induced modules") {
  auto t = make_tower(3, 2, 4, 4);
  const Field& f = *t.field;
  const RankOneData n = RankOneData::untwisted(t, {0, 1, 2, 3});
  const BKModule m = induce(n);
  REQUIRE(m.frobenius.size() == 2);
  // Block 0 = (e0, e2), block 1 = (e1, e3). phi(e1) = e0, phi(e3) = u^2 e2.
  CHECK(m.frobenius[0](0, 0) == mono(f, 1, 0));
  CHECK(m.frobenius[0](1, 1) == mono(f, 1, 2));
  // phi(e2) = u e1, phi(e0) = phi(e4) = u^3 e3.
  CHECK(m.frobenius[1](0, 1) == mono(f, 1, 1));
  CHECK(m.frobenius[1](1, 0) == mono(f, 1, 3));
}

TEST_CASE("restriction to Q_p agrees with inducing directly") {
  for (int trial = 0; trial < 30; ++trial) {
    const int p = std::vector<int>{2, 3, 5}[random_int(0, 2)];
    const int h = random_int(1, 2), m = random_int(1, 2);
    const int d = h * m;
    std::vector<int> w(static_cast<std::size_t>(d));
    for (auto& x : w) x = random_int(0, p);
    auto tk = make_tower(p, h, d, d);
    auto tq = make_tower(p, 1, d, d);
    const BKModule viaK = restrict_to_qp(induce(RankOneData::untwisted(tk, w)));
    const BKModule direct = induce(RankOneData::untwisted(tq, w));
    // Restricted basis order is block by block: e_0, e_h, ..., e_1, e_{1+h}, ...
    std::vector<int> order;
    for (int b = 0; b < h; ++b)
      for (int k = 0; k < m; ++k) order.push_back(b + k * h);
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) CHECK(viaK.frobenius[0](i, j) == direct.frobenius[0](order[i], order[j]));
  }
}

TEST_CASE("height of the seven-dimensional ambient") {
  for (int p : {2, 3, 5}) {
    const BKModule m = induce(seven_dim_ambient(p));
    CHECK(check_height(m, p));
    CHECK(check_height(m, 2));
    CHECK_FALSE(check_height(m, 1));
    auto ex = hodge_exponents(m)[0];
    CHECK(ex == std::vector<long long>{0, 0, 0, 1, 1, 1, 2});
  }
}

TEST_CASE("height fails for non-integral Frobenius") {
  auto t = make_tower(3, 1, 1, 1);
  const Field& f = *t.field;
  BKModule m{t, 1, {UMatrix(1, 1, mono(f, 1, -1))}};
  CHECK_FALSE(check_height(m, 3));
}

TEST_CASE("phi_image follows the column convention") {
  auto t = make_tower(3, 1, 2, 2);
  const Field& f = *t.field;
  const BKModule m = induce(RankOneData::untwisted(t, {2, 1}));
  // phi(u e_1) = u^3 u^{r_0} e_0.
  auto img = phi_image(m, {UVec{USeries(&f), mono(f, 1, 1)}});
  CHECK(img[0][0] == mono(f, 1, 5));
  CHECK(img[0][1].is_exact_zero());
}

TEST_CASE("twist normalization solves the rescaling equations") {
  int solved = 0;
  for (int trial = 0; trial < 40; ++trial) {
    const int p = std::vector<int>{2, 3, 5}[random_int(0, 2)];
    const int d = random_int(1, 3);
    auto t = make_tower(p, 1, d, d);
    const Field& f = *t.field;
    RankOneData n = RankOneData::untwisted(t, std::vector<int>(static_cast<std::size_t>(d), 1));
    for (auto& x : n.twist) x = random_elem(f, true);
    NormalizedTwist nt;
    try {
      nt = normalize_twist(n);
    } catch (const FieldError&) {
      continue;  // root only exists beyond the field size cap
    }
    ++solved;
    const Field& g = *nt.normalized.tower.field;
    Embedding emb(t.field, nt.normalized.tower.field);
    // x'_j = y_{j+1}^p x_j / y_j must be 1, indices mod d.
    for (int j = 0; j < d; ++j) {
      const Elem y1 = nt.scaling[static_cast<std::size_t>((j + 1) % d)];
      const Elem lhs = g.div(g.mul(g.pow(y1, p), emb(n.twist[j])), nt.scaling[j]);
      CHECK(lhs == g.one());
    }
    CHECK(nt.normalized.untwisted());
    CHECK(g.degree() == t.deg_F() * nt.extension_degree);
  }
  CHECK(solved >= 20);
}

TEST_CASE("twist normalization in degree one is a (p-1)-th root") {
  auto t = make_tower(5, 1, 1, 1);
  const Field& f = *t.field;
  RankOneData n = RankOneData::untwisted(t, {2});
  n.twist[0] = f.from_int(2);  // generator of F_5^x, so no root in F_5
  const NormalizedTwist nt = normalize_twist(n);
  const Field& g = *nt.normalized.tower.field;
  Embedding emb(t.field, nt.normalized.tower.field);
  CHECK(nt.extension_degree > 1);
  CHECK(g.mul(g.pow(nt.scaling[0], 4), emb(n.twist[0])) == g.one());
  // F_{5^4} always suffices.
  CHECK(4 % nt.extension_degree == 0);
}

TEST_CASE("sub and quotient of the reducible rank-two example") {
  for (int p : {3, 5}) {
    auto t = make_tower(p, 1, 1, 1);
    const Field& f = *t.field;
    for (int r : {0, 1})
      for (int s : {0, 1}) {
        const BKModule m = reducible_rank2_module(t, r, s, USeries(&f), mono(f, 1, 0));
        const Extension ext = sub_quotient(m, {{UVec{mono(f, 1, 0), USeries(&f)}}});
        CHECK(ext.sub.frobenius[0](0, 0) == mono(f, 1, (p - 1) * r));
        CHECK(ext.quotient.frobenius[0](0, 0) == mono(f, 1, (p - 1) * s));
        // f = A_12 / u^{(p-1)s}
        const USeries expect = m.frobenius[0](0, 1).shifted(-(p - 1) * s);
        CHECK((ext.cocycle[0](0, 0) - expect).known_zero());
      }
  }
}

TEST_CASE("sub_quotient rejects subspaces that are not phi-stable") {
  auto t = make_tower(3, 1, 2, 2);
  const Field& f = *t.field;
  const BKModule m = induce(RankOneData::untwisted(t, {1, 2}));
  CHECK_THROWS_AS(sub_quotient(m, {{UVec{mono(f, 1, 0), USeries(&f)}}}), std::invalid_argument);
}

TEST_CASE("extending coefficients keeps heights") {
  auto t = make_tower(3, 1, 2, 2);
  const BKModule m = induce(RankOneData::untwisted(t, {1, 3}));
  const BKModule big = extend_coeffs(m, get_field(3, 4));
  CHECK(big.field().degree() == 4);
  CHECK(hodge_exponents(big) == hodge_exponents(m));
}
