#include <catch2/catch_amalgamated.hpp>

#include <numeric>

#include "drmmm/hw/compressor.hpp"
#include "drmmm/random.hpp"

using namespace drmmm;
using namespace drmmm::hw;

namespace {

Natural sum_of(const std::vector<Natural>& terms) {
  Natural acc = 0;
  for (const Natural& t : terms) acc += t;
  return acc;
}

}  // namespace

TEST_CASE("6-to-3 cell counts exhaustively") {
  for (unsigned pattern = 0; pattern < 64; ++pattern) {
    std::array<bool, 6> in;
    unsigned pop = 0;
    for (unsigned i = 0; i < 6; ++i) {
      in[i] = (pattern >> i) & 1;
      pop += in[i] ? 1 : 0;
    }
    auto out = compress_6to3(in);
    unsigned value = (out[0] ? 1u : 0u) + (out[1] ? 2u : 0u) + (out[2] ? 4u : 0u);
    CHECK(value == pop);
  }
}

TEST_CASE("3-to-2 cell is a full adder") {
  for (unsigned pattern = 0; pattern < 8; ++pattern) {
    bool x = pattern & 1, y = (pattern >> 1) & 1, z = (pattern >> 2) & 1;
    auto [sum, carry] = csa_3to2(x, y, z);
    CHECK((sum ? 1u : 0u) + 2u * (carry ? 1u : 0u) ==
          (x ? 1u : 0u) + (y ? 1u : 0u) + (z ? 1u : 0u));
  }
}

TEST_CASE("word-parallel level equals the cell applied per column") {
  RandomSource rng(8);
  for (int trial = 0; trial < 30; ++trial) {
    std::size_t n = 2 + rng.next_u64() % 5;  // one group, 2..6 members
    std::vector<Natural> terms;
    for (std::size_t i = 0; i < n; ++i) terms.push_back(rng.bits(48));

    std::vector<Natural> out = compress_one_level(terms, 64);
    // Reference: per-column popcount through the cell.
    Natural r0 = 0, r1 = 0, r2 = 0;
    for (std::size_t bit = 0; bit < 48; ++bit) {
      std::array<bool, 6> col{};
      for (std::size_t i = 0; i < n; ++i) col[i] = test_bit(terms[i], bit);
      auto cell = compress_6to3(col);
      if (cell[0]) mpz_setbit(r0.get_mpz_t(), bit);
      if (cell[1]) mpz_setbit(r1.get_mpz_t(), bit + 1);
      if (cell[2]) mpz_setbit(r2.get_mpz_t(), bit + 2);
    }
    if (n <= 2) {
      CHECK(sum_of(out) == sum_of(terms));
    } else {
      REQUIRE(out.size() == (n > 3 ? 3u : 2u));
      CHECK(out[0] == r0);
      CHECK(out[1] == r1);
      if (n > 3) CHECK(out[2] == r2);
    }
  }
}

TEST_CASE("tree preserves sums for random shapes") {
  RandomSource rng(9);
  for (int trial = 0; trial < 400; ++trial) {
    std::size_t n = 1 + rng.next_u64() % 40;
    std::size_t width = 1 + rng.next_u64() % 256;
    std::size_t target = 2 + rng.next_u64() % 2;
    std::vector<Natural> terms;
    for (std::size_t i = 0; i < n; ++i) terms.push_back(rng.bits(width));
    Natural expect = sum_of(terms);

    CompressResult res = compress_terms(terms, target, width + 16);
    CHECK(res.terms.size() <= std::max(target, n));
    CHECK(sum_of(res.terms) == expect);
    CHECK(res.levels == compress_level_count(n, target));
  }
}

TEST_CASE("reference shapes take the documented level counts") {
  CHECK(compress_level_count(24, 3) == 3);  // 24 -> 12 -> 6 -> 3
  CHECK(compress_level_count(33, 2) == 5);  // 33 -> 17 -> 9 -> 5 -> 3 -> 2
  CHECK(compress_level_count(9, 2) == 3);   // 9 -> 5 -> 3 -> 2
  CHECK(compress_level_count(9, 3) == 2);
  CHECK(compress_level_count(8, 3) == 2);   // update tree for k = 2
  CHECK(compress_level_count(3, 3) == 0);

  // 33 encoded terms reach 9 after exactly two levels, sum preserved.
  RandomSource rng(10);
  std::vector<Natural> terms;
  for (int i = 0; i < 33; ++i) terms.push_back(rng.bits(64));
  Natural expect = sum_of(terms);
  std::vector<Natural> l1 = compress_one_level(terms, 80);
  CHECK(l1.size() == 17);
  std::vector<Natural> l2 = compress_one_level(l1, 80);
  CHECK(l2.size() == 9);
  CHECK(sum_of(l2) == expect);

  // The full 24-term update tree: exactly three levels to three terms.
  terms.clear();
  for (int i = 0; i < 24; ++i) terms.push_back(rng.bits(64));
  expect = sum_of(terms);
  CompressResult res = compress_terms(terms, 3, 80);
  CHECK(res.levels == 3);
  CHECK(res.terms.size() == 3);
  CHECK(sum_of(res.terms) == expect);
}

TEST_CASE("width cap rejects oversized values") {
  std::vector<Natural> terms{pow2(70), 1, 2, 3};
  CHECK_THROWS_AS(compress_terms(terms, 3, 64), BoundError);
  CHECK_THROWS_AS(compress_terms({}, 3, 64), ParameterError);
  CHECK_THROWS_AS(compress_terms({Natural(1)}, 4, 64), ParameterError);
}
