#include <catch2/catch_amalgamated.hpp>

#include <map>
#include <random>
#include <set>
#include <vector>

#include "fixtures.hpp"
#include "kappamax/kappamax.hpp"

using namespace kappamax;

namespace {

CellIndex cell2(int k, int i, int j) {
  const std::vector<int> c{i, j};
  return flatten(Dims{2, k}, c);
}

CellIndex cell3(int k, int i, int j, int l) {
  const std::vector<int> c{i, j, l};
  return flatten(Dims{3, k}, c);
}

long long choose2(long long k) { return k * (k - 1) / 2; }

/// Margin check written directly against the move's dense representation.
bool kernel_move(const BasicMove& m) {
  const Dims& d = m.dims();
  std::vector<int> table(d.cell_count(), 0);
  table[m.plus()[0]] += 1;
  table[m.plus()[1]] += 1;
  table[m.minus()[0]] -= 1;
  table[m.minus()[1]] -= 1;
  for (int a = 0; a < d.raters; ++a) {
    std::vector<int> margin(d.levels, 0);
    for (CellIndex c = 0; c < d.cell_count(); ++c) {
      margin[cell_coord(d, c, a)] += table[c];
    }
    for (int v : margin) {
      if (v != 0) return false;
    }
  }
  return true;
}

std::set<std::array<CellIndex, 4>> key_set(const std::vector<BasicMove>& moves) {
  std::set<std::array<CellIndex, 4>> out;
  for (const BasicMove& m : moves) out.insert(m.key());
  return out;
}

}  // namespace

TEST_CASE("basic move validation") {
  const Dims d{2, 3};
  // +1 cells sharing a row are rejected.
  CHECK_THROWS_AS(BasicMove(d, {cell2(3, 0, 0), cell2(3, 0, 1)},
                            {cell2(3, 1, 0), cell2(3, 1, 1)}),
                  DimensionError);
  // -1 cells that break the margin condition are rejected.
  CHECK_THROWS_AS(BasicMove(d, {cell2(3, 0, 0), cell2(3, 1, 1)},
                            {cell2(3, 0, 2), cell2(3, 1, 0)}),
                  DimensionError);
  // Duplicated cells are rejected.
  CHECK_THROWS_AS(BasicMove(d, {cell2(3, 0, 0), cell2(3, 0, 0)},
                            {cell2(3, 0, 1), cell2(3, 1, 0)}),
                  DimensionError);
  const BasicMove ok(d, {cell2(3, 0, 0), cell2(3, 1, 1)},
                     {cell2(3, 0, 1), cell2(3, 1, 0)});
  CHECK(ok.differing_axes() == 2);
  CHECK(ok.entry(cell2(3, 0, 0)) == 1);
  CHECK(ok.entry(cell2(3, 1, 0)) == -1);
  CHECK(ok.entry(cell2(3, 2, 2)) == 0);
  CHECK(ok.negated().negated() == ok);
}

TEST_CASE("two-way basis cardinality") {
  CHECK(two_way_basis(2).size() == 1);
  CHECK(two_way_basis(4).size() == 36);
  CHECK(two_way_basis(7).size() == 441);
  for (int k = 2; k <= 10; ++k) {
    CHECK(two_way_basis(k).size() ==
          static_cast<std::size_t>(choose2(k) * choose2(k)));
  }
  CHECK_THROWS_AS(two_way_basis(1), DimensionError);
}

TEST_CASE("two-way basis contains the printed sample moves") {
  const MarkovBasis b = two_way_basis(4);
  const int k = 4;
  // Both +1 entries on the diagonal.
  CHECK(b.contains_up_to_sign(BasicMove(
      b.dims(), {cell2(k, 0, 0), cell2(k, 2, 2)},
      {cell2(k, 0, 2), cell2(k, 2, 0)})));
  // One diagonal entry, upper triangle.
  CHECK(b.contains_up_to_sign(BasicMove(
      b.dims(), {cell2(k, 0, 3), cell2(k, 1, 1)},
      {cell2(k, 0, 1), cell2(k, 1, 3)})));
  // One diagonal entry, straddling the diagonal.
  CHECK(b.contains_up_to_sign(BasicMove(
      b.dims(), {cell2(k, 1, 1), cell2(k, 2, 3)},
      {cell2(k, 1, 3), cell2(k, 2, 1)})));
  // No diagonal entries.
  CHECK(b.contains_up_to_sign(BasicMove(
      b.dims(), {cell2(k, 0, 3), cell2(k, 1, 2)},
      {cell2(k, 0, 2), cell2(k, 1, 3)})));
}

TEST_CASE("per-pair move counts in the multi-way construction") {
  const Dims d{3, 2};
  // Cells differing in exactly two of three binary coordinates: one move.
  CHECK(detail::moves_for_cell_pair(d, cell3(2, 0, 0, 0), cell3(2, 1, 1, 0))
            .size() == 1);
  // Cells differing in all three: 2^(3-1) - 1 = 3 moves.
  CHECK(detail::moves_for_cell_pair(d, cell3(2, 0, 0, 0), cell3(2, 1, 1, 1))
            .size() == 3);
  // Cells differing in one coordinate: none.
  CHECK(detail::moves_for_cell_pair(d, cell3(2, 0, 0, 0), cell3(2, 0, 0, 1))
            .empty());
}

TEST_CASE("multi-way basis") {
  CHECK_THROWS_AS(multi_way_basis(2, 3), DimensionError);
  const MarkovBasis b32 = multi_way_basis(3, 2);
  CHECK(b32.size() == 12);
  const MarkovBasis b33 = multi_way_basis(3, 3);
  CHECK(b33.size() == 243);

  SECTION("all moves are kernel moves (exhaustive, r <= 3, k <= 5)") {
    for (int k = 2; k <= 5; ++k) {
      const MarkovBasis two = two_way_basis(k);
      for (const BasicMove& m : two.moves()) {
        REQUIRE(kernel_move(m));
      }
      const MarkovBasis multi = multi_way_basis(3, k);
      for (const BasicMove& m : multi.moves()) {
        REQUIRE(kernel_move(m));
      }
    }
  }

  SECTION("no duplicates, no negation pairs") {
    for (const MarkovBasis& b : {two_way_basis(5), multi_way_basis(3, 3)}) {
      std::set<std::array<CellIndex, 4>> keys;
      for (const BasicMove& m : b.moves()) {
        CHECK(keys.insert(m.key()).second);
        CHECK_FALSE(keys.contains(m.negated().key()));
      }
    }
  }

  SECTION("contains the printed three-rater sample moves") {
    // +1 at (1,1,2) and (3,3,3); -1 at (3,1,2) and (1,3,3) [1-based].
    CHECK(b33.contains_up_to_sign(BasicMove(
        b33.dims(), {cell3(3, 0, 0, 1), cell3(3, 2, 2, 2)},
        {cell3(3, 2, 0, 1), cell3(3, 0, 2, 2)})));
    // +1 at (1,1,1) and (2,2,3); -1 at (2,2,1) and (1,1,3).
    CHECK(b33.contains_up_to_sign(BasicMove(
        b33.dims(), {cell3(3, 0, 0, 0), cell3(3, 1, 1, 2)},
        {cell3(3, 1, 1, 0), cell3(3, 0, 0, 2)})));
  }

  SECTION("generic enumeration at r = 2 matches the two-way construction") {
    for (int k = 2; k <= 5; ++k) {
      CHECK(key_set(detail::enumerate_basic_moves(Dims{2, k})) ==
            key_set(two_way_basis(k).moves()));
    }
  }
}

TEST_CASE("diagonal moves") {
  SECTION("two raters") {
    CHECK(diagonal_moves(Dims{2, 4}).size() == 6);
    const auto moves = diagonal_moves(Dims{2, 2});
    REQUIRE(moves.size() == 1);
    CHECK(moves[0] == BasicMove(Dims{2, 2}, {cell2(2, 0, 0), cell2(2, 1, 1)},
                                {cell2(2, 0, 1), cell2(2, 1, 0)}));
  }
  SECTION("three raters, three arrangements per level pair") {
    const auto moves = diagonal_moves(Dims{3, 3});
    CHECK(moves.size() == 9);
    int pair01 = 0;
    for (const BasicMove& m : moves) {
      if (m.plus()[0] == cell3(3, 0, 0, 0) && m.plus()[1] == cell3(3, 1, 1, 1)) {
        ++pair01;
      }
    }
    CHECK(pair01 == 3);
  }
  SECTION("diagonal moves belong to the basis, +1s on the diagonal") {
    const MarkovBasis b = multi_way_basis(3, 3);
    for (const BasicMove& m : diagonal_moves(Dims{3, 3})) {
      CHECK(b.contains(m));
    }
    const MarkovBasis b2 = two_way_basis(4);
    for (const BasicMove& m : diagonal_moves(Dims{2, 4})) {
      CHECK(b2.contains(m));
    }
  }
}

TEST_CASE("pair projections") {
  const Dims d{3, 3};
  const BasicMove a(d, {cell3(3, 0, 0, 1), cell3(3, 2, 2, 2)},
                    {cell3(3, 2, 0, 1), cell3(3, 0, 2, 2)});
  const BasicMove b(d, {cell3(3, 0, 0, 0), cell3(3, 1, 1, 2)},
                    {cell3(3, 1, 1, 0), cell3(3, 0, 0, 2)});
  SECTION("each sample move projects to two basic moves and one null move") {
    int basic_a = 0, basic_b = 0;
    for (const auto& [u, v] : std::vector<std::pair<int, int>>{{0, 1}, {0, 2}, {1, 2}}) {
      if (pair_projection(a, u, v).has_value()) ++basic_a;
      if (pair_projection(b, u, v).has_value()) ++basic_b;
    }
    CHECK(basic_a == 2);
    CHECK(basic_b == 2);
    CHECK_FALSE(pair_projection(a, 1, 2).has_value());
    CHECK_FALSE(pair_projection(b, 0, 1).has_value());
  }
  SECTION("every basis move has at least one basic projection") {
    const MarkovBasis b33 = multi_way_basis(3, 3);
    for (const BasicMove& m : b33.moves()) {
      int basic = 0;
      for (const auto& [u, v] :
           std::vector<std::pair<int, int>>{{0, 1}, {0, 2}, {1, 2}}) {
        if (const auto p = pair_projection(m, u, v)) {
          ++basic;
          CHECK(kernel_move(*p));  // projections are valid two-way moves
        }
      }
      CHECK(basic >= 1);
    }
  }
  SECTION("errors") {
    CHECK_THROWS_AS(pair_projection(fixtures::near_diag_move(), 0, 1),
                    DimensionError);
    CHECK_THROWS_AS(pair_projection(a, 0, 0), DimensionError);
  }
}

TEST_CASE("random move sampling") {
  SECTION("uniform over signed moves") {
    const MarkovBasis b = two_way_basis(2);
    std::mt19937_64 rng(99);
    int positive = 0;
    const int draws = 10000;
    for (int i = 0; i < draws; ++i) {
      const SignedMove sm = random_move(b, rng);
      if (sm.sign > 0) ++positive;
    }
    const double freq = static_cast<double>(positive) / draws;
    CHECK(freq > 0.48);
    CHECK(freq < 0.52);
  }
  SECTION("deterministic given the seed") {
    const MarkovBasis b = two_way_basis(5);
    std::mt19937_64 r1(42), r2(42);
    for (int i = 0; i < 200; ++i) {
      const SignedMove a = random_move(b, r1);
      const SignedMove c = random_move(b, r2);
      CHECK(a.move == c.move);
      CHECK(a.sign == c.sign);
    }
  }
  SECTION("empty basis is an error") {
    const MarkovBasis empty;
    std::mt19937_64 rng(1);
    CHECK_THROWS_AS(random_move(empty, rng), Error);
  }
}

TEST_CASE("basis dispatch") {
  CHECK(basis_for(Dims{2, 4}).size() == two_way_basis(4).size());
  CHECK(basis_for(Dims{3, 3}).size() == multi_way_basis(3, 3).size());
}
