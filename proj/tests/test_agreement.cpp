#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "fixtures.hpp"
#include "kappamax/kappamax.hpp"

using namespace kappamax;
using Catch::Approx;
using fixtures::ex27;
using fixtures::ex4;

TEST_CASE("observed agreement") {
  SECTION("diagonal-only table scores 1 under every scheme") {
    const Table t(2, 3, {4, 0, 0, 0, 2, 0, 0, 0, 5});
    for (const auto& s : {quadratic_scheme(3), linear_scheme(3),
                          sqrt_scheme(3), identity_scheme(3)}) {
      CHECK(observed_agreement(t, s) == 1.0);
    }
  }
  SECTION("bundled example, identity scheme: diagonal mass over N") {
    CHECK(observed_agreement(ex4(), identity_scheme(4)) ==
          Approx(18.0 / 33).margin(1e-12));
  }
  SECTION("anti-diagonal 2x2 scores 0") {
    const Table t(2, 2, {0, 1, 1, 0});
    CHECK(observed_agreement(t, identity_scheme(2)) == 0.0);
  }
  SECTION("empty table is an error") {
    CHECK_THROWS_AS(observed_agreement(Table::zeros(Dims{2, 2}),
                                       identity_scheme(2)),
                    DegenerateTableError);
  }
  SECTION("scheme size mismatch") {
    CHECK_THROWS_AS(observed_agreement(ex4(), identity_scheme(3)),
                    DimensionError);
  }
}

TEST_CASE("expected agreement") {
  SECTION("uniform 2x2") {
    const Table t(2, 2, {1, 1, 1, 1});
    CHECK(expected_agreement(t, identity_scheme(2)) == 0.5);
  }
  SECTION("bundled example, identity scheme") {
    // Margins (11,8,7,7) x (6,9,12,6): sum of aligned products is 264.
    CHECK(expected_agreement(ex4(), identity_scheme(4)) ==
          Approx(264.0 / 1089).margin(1e-12));
  }
  SECTION("always below 1 for non-degenerate tables") {
    std::mt19937_64 rng(3);
    for (int rep = 0; rep < 50; ++rep) {
      const Table t = fixtures::random_table(Dims{2, 3}, 12, rng);
      if (kappamax::detail::degenerate_margins(t.fiber_statistic())) continue;
      for (const auto& s : {quadratic_scheme(3), identity_scheme(3)}) {
        CHECK(expected_agreement(t, s) < 1.0);
      }
    }
  }
}

TEST_CASE("weighted kappa on the two-rater example") {
  const Table t = ex4();
  const KappaValue kl = weighted_kappa(t, linear_scheme(4));
  CHECK(kl.value == Approx(0.5023).margin(5e-5));
  REQUIRE(kl.exact.has_value());
  CHECK(kl.exact->first == 660);    // N * sum(u_num * n)
  CHECK(kl.exact->second == 1326);  // sum(u_num * row * col)
  CHECK(kl.value == Approx(1.0 - 660.0 / 1326.0).margin(1e-12));

  const KappaValue kq = weighted_kappa(t, quadratic_scheme(4));
  REQUIRE(kq.exact.has_value());
  CHECK(kq.exact->first == 1056);  // 33 * 32
  CHECK(kq.exact->second == 2544);
  CHECK(kq.value == Approx(1.0 - 1056.0 / 2544.0).margin(1e-12));
}

TEST_CASE("weighted kappa on the three-rater example") {
  const KappaValue k = weighted_kappa(ex27(), linear_scheme(3));
  CHECK(k.value == Approx(0.4872).margin(5e-5));
  REQUIRE(k.exact.has_value());
  CHECK(k.exact->first == 320);
  CHECK(k.exact->second == 624);
}

TEST_CASE("kappa value grid of the three maximal configurations") {
  const struct {
    Table table;
    double q, l, s;
  } cases[] = {
      {fixtures::ex4_max_q(), 0.8703, 0.7511, 0.6771},
      {fixtures::ex4_max_l(), 0.8184, 0.7511, 0.7150},
      {fixtures::ex4_max_s(), 0.7665, 0.7511, 0.7528},
  };
  for (const auto& c : cases) {
    CHECK(weighted_kappa(c.table, quadratic_scheme(4)).value ==
          Approx(c.q).margin(5e-5));
    CHECK(weighted_kappa(c.table, linear_scheme(4)).value ==
          Approx(c.l).margin(5e-5));
    CHECK(weighted_kappa(c.table, sqrt_scheme(4)).value ==
          Approx(c.s).margin(5e-5));
  }
}

TEST_CASE("cohen kappa") {
  CHECK(cohen_kappa(Table(2, 2, {5, 0, 0, 5})).value == 1.0);
  CHECK(cohen_kappa(Table(2, 2, {1, 1, 1, 1})).value == 0.0);
  SECTION("rank-one tables score zero") {
    const std::vector<Count> a{1, 2, 1}, b{1, 1, 2};
    std::vector<Count> counts;
    for (Count x : a) {
      for (Count y : b) counts.push_back(x * y);
    }
    CHECK(cohen_kappa(Table(2, 3, counts)).value == Approx(0.0).margin(1e-12));
  }
  SECTION("equals weighted kappa under the identity scheme") {
    const KappaValue a = cohen_kappa(ex4());
    const KappaValue b = weighted_kappa(ex4(), identity_scheme(4));
    CHECK(a.value == b.value);
    CHECK(a.exact == b.exact);
    CHECK(a.value == Approx(0.4).margin(1e-12));
  }
  SECTION("three raters rejected") {
    CHECK_THROWS_AS(cohen_kappa(ex27()), DimensionError);
  }
}

TEST_CASE("degenerate tables") {
  // All mass in one diagonal cell: margins concentrate on one category.
  const Table t(2, 3, {7, 0, 0, 0, 0, 0, 0, 0, 0});
  CHECK_THROWS_AS(weighted_kappa(t, linear_scheme(3)), DegenerateTableError);
  const Table t3(3, 2, {0, 0, 0, 0, 0, 0, 0, 4});
  CHECK_THROWS_AS(weighted_kappa(t3, linear_scheme(2)), DegenerateTableError);
  // Same support category but off-diagonal mass elsewhere is fine.
  const Table ok(2, 2, {3, 1, 0, 0});
  CHECK_NOTHROW(weighted_kappa(ok, identity_scheme(2)));
}

TEST_CASE("multi-rater kappa under identity matches the pairwise formula") {
  // Independent implementation of the unweighted multi-rater index: mean
  // pairwise diagonal proportion, chance-corrected.
  const Table t = ex27();
  const int k = t.levels();
  const double n = static_cast<double>(t.total());
  double po = 0.0, pe = 0.0;
  int pairs = 0;
  for (int u = 0; u < 3; ++u) {
    for (int v = u + 1; v < 3; ++v) {
      ++pairs;
      const auto pm = t.pair_margin(u, v);
      const auto mu = t.margin(u);
      const auto mv = t.margin(v);
      for (int i = 0; i < k; ++i) {
        po += static_cast<double>(pm[i * k + i]) / n;
        pe += (static_cast<double>(mu[i]) / n) * (static_cast<double>(mv[i]) / n);
      }
    }
  }
  po /= pairs;
  pe /= pairs;
  const double expected = (po - pe) / (1.0 - pe);
  CHECK(weighted_kappa(t, identity_scheme(3)).value ==
        Approx(expected).margin(1e-12));
}

TEST_CASE("kappa against the reference transcription") {
  std::mt19937_64 rng(17);
  for (int rep = 0; rep < 60; ++rep) {
    const bool three = rep % 3 == 0;
    const Table t =
        fixtures::random_table(three ? Dims{3, 3} : Dims{2, 4}, 18, rng);
    if (kappamax::detail::degenerate_margins(t.fiber_statistic())) continue;
    for (const auto& s :
         {quadratic_scheme(t.levels()), linear_scheme(t.levels()),
          sqrt_scheme(t.levels()), identity_scheme(t.levels())}) {
      CHECK(weighted_kappa(t, s).value ==
            Approx(fixtures::reference_kappa(t, s)).margin(1e-10));
    }
  }
}

TEST_CASE("agreement delta") {
  const Dims d{2, 4};
  const auto cellf = [&](int i, int j) {
    const std::vector<int> c{i, j};
    return flatten(d, c);
  };
  SECTION("symmetric diagonal move gains 2 u_ij / N exactly") {
    for (const auto& s : {quadratic_scheme(4), linear_scheme(4),
                          sqrt_scheme(4), identity_scheme(4)}) {
      for (int i = 0; i < 4; ++i) {
        for (int j = i + 1; j < 4; ++j) {
          const BasicMove m(d, {cellf(i, i), cellf(j, j)},
                            {cellf(i, j), cellf(j, i)});
          const Count n = 33;
          CHECK(agreement_delta(m, s, n) ==
                2.0 * s.u(i, j) / static_cast<double>(n));
        }
      }
    }
  }
  SECTION("one-sided moves are exactly neutral under linear weights") {
    const DisagreementScheme lin = linear_scheme(4);
    // i1 < i2 <= j1 < j2 with +1 at (i1,j1), (i2,j2).
    const int quads[][4] = {{0, 1, 1, 2}, {0, 1, 2, 3}, {0, 2, 2, 3},
                            {1, 2, 2, 3}, {0, 1, 1, 3}};
    for (const auto& q : quads) {
      const BasicMove m(d, {cellf(q[0], q[2]), cellf(q[1], q[3])},
                        {cellf(q[0], q[3]), cellf(q[1], q[2])});
      CHECK(agreement_delta(m, lin, 20) == 0.0);
      CHECK(agreement_delta_numerator(SignedMove{m, +1}, lin) == 0);
      // Mirrored condition below the diagonal.
      const BasicMove mm(d, {cellf(q[2], q[0]), cellf(q[3], q[1])},
                         {cellf(q[3], q[0]), cellf(q[2], q[1])});
      CHECK(agreement_delta(mm, lin, 20) == 0.0);
    }
  }
  SECTION("matches observed agreement difference") {
    std::mt19937_64 rng(23);
    const MarkovBasis b2 = two_way_basis(4);
    const MarkovBasis b3 = multi_way_basis(3, 3);
    int done = 0;
    while (done < 500) {
      const bool three = done % 2 == 0;
      const Table t = fixtures::random_table(
          three ? Dims{3, 3} : Dims{2, 4}, 16, rng);
      const SignedMove sm = random_move(three ? b3 : b2, rng);
      const auto next = apply_move(t, sm);
      if (!next.has_value()) continue;
      ++done;
      for (const auto& s :
           {quadratic_scheme(t.levels()), linear_scheme(t.levels()),
            sqrt_scheme(t.levels()), identity_scheme(t.levels())}) {
        const double direct =
            observed_agreement(*next, s) - observed_agreement(t, s);
        CHECK(agreement_delta(sm, s, t.total()) ==
              Approx(direct).margin(1e-12));
      }
    }
  }
  SECTION("worked move comparison across schemes") {
    const Table n = fixtures::near_diag();
    const Table after = fixtures::near_diag_after();
    const KappaValue q0 = weighted_kappa(n, quadratic_scheme(4));
    const KappaValue q1 = weighted_kappa(after, quadratic_scheme(4));
    CHECK(q1.value < q0.value);
    const KappaValue l0 = weighted_kappa(n, linear_scheme(4));
    const KappaValue l1 = weighted_kappa(after, linear_scheme(4));
    CHECK(l0.exact == l1.exact);  // exact-rational equality
    const KappaValue s0 = weighted_kappa(n, sqrt_scheme(4));
    const KappaValue s1 = weighted_kappa(after, sqrt_scheme(4));
    CHECK(s1.value > s0.value);
  }
}

TEST_CASE("fiber constancy of expected agreement") {
  // Tables with the same margins share expected agreement exactly.
  const Table a = ex4();
  for (const Table& b : {fixtures::ex4_level_min_q(), fixtures::ex4_level_max_q(),
                         fixtures::ex4_max_q(), fixtures::ex4_max_l(),
                         fixtures::ex4_max_s()}) {
    REQUIRE(b.fiber_statistic() == a.fiber_statistic());
    for (const auto& s : {quadratic_scheme(4), linear_scheme(4),
                          sqrt_scheme(4), identity_scheme(4)}) {
      CHECK(expected_agreement(a, s) == expected_agreement(b, s));
    }
  }
}
