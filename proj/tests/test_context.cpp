#include <catch2/catch_amalgamated.hpp>

#include "drmmm/context.hpp"
#include "drmmm/random.hpp"

using namespace drmmm;

TEST_CASE("context derives the small worked example") {
  MontgomeryContext ctx = make_context(13, 2, 2);
  CHECK(ctx.modulus_bits == 4);
  CHECK(ctx.radix == 4);
  CHECK(ctx.num_digits == 2);
  CHECK(ctx.window_product_bits() == 4);
  // Brute force over [0, 2^k): the unique x with 13*x + 1 == 0 mod 4 is 3.
  CHECK(ctx.m_prime_digit == 3);
  CHECK(ctx.m_prime_wide == 11);
  CHECK(ctx.m_prime_full == 11);
}

TEST_CASE("context rejects bad parameters") {
  CHECK_THROWS_AS(make_context(12, 2, 1), ParameterError);  // even
  CHECK_THROWS_AS(make_context(1, 2, 1), ParameterError);   // too small
  CHECK_THROWS_AS(make_context(13, 1, 1), ParameterError);  // k < 2
  CHECK_THROWS_AS(make_context(13, 65, 1), ParameterError);
  CHECK_THROWS_AS(make_context(13, 2, 0), ParameterError);
  CHECK_THROWS_AS(make_context(13, 64, 65), ParameterError);  // k*t > 4096
}

TEST_CASE("inverse identities hold exactly on random contexts") {
  RandomSource rng(101);
  for (int trial = 0; trial < 40; ++trial) {
    std::size_t width = 8 + rng.next_u64() % 200;
    unsigned k = 2 + unsigned(rng.next_u64() % 15);
    unsigned t = 1 + unsigned(rng.next_u64() % 6);
    MontgomeryContext ctx = make_context(rng.odd_with_bit_length(width), k, t);

    CHECK(low_bits(ctx.modulus * ctx.m_prime_digit + 1, k) == 0);
    CHECK(low_bits(ctx.modulus * ctx.m_prime_wide + 1,
                   ctx.window_product_bits()) == 0);
    CHECK(low_bits(ctx.modulus * ctx.m_prime_full + 1, ctx.modulus_bits) == 0);
    CHECK(ctx.m_prime_digit == low_bits(ctx.m_prime_wide, k));
    CHECK(ctx.num_digits == (ctx.modulus_bits + k - 1) / k);
  }
}

TEST_CASE("digit decomposition round-trips with zero padding") {
  MontgomeryContext ctx = make_context(13, 2, 2);
  DigitVector dv = to_digits(7, ctx);
  REQUIRE(dv.digits.size() == ctx.num_digits + ctx.t + 1);
  CHECK(dv.digits[0] == 3);
  CHECK(dv.digits[1] == 1);
  for (std::size_t i = dv.padded_from; i < dv.digits.size(); ++i)
    CHECK(dv.digits[i] == 0);
  CHECK(recompose(dv) == 7);

  RandomSource rng(77);
  for (int trial = 0; trial < 50; ++trial) {
    MontgomeryContext c =
        make_context(rng.odd_with_bit_length(40 + rng.next_u64() % 100),
                     2 + unsigned(rng.next_u64() % 30),
                     1 + unsigned(rng.next_u64() % 4));
    Natural v = rng.below(c.modulus);
    DigitVector d = to_digits(v, c);
    CHECK(recompose(d) == v);
    for (std::uint64_t digit : d.digits)
      CHECK((c.k >= 64 || digit < (std::uint64_t(1) << c.k)));
  }
}

TEST_CASE("digit decomposition rejects wide values") {
  MontgomeryContext ctx = make_context(13, 2, 2);
  CHECK_THROWS_AS(to_digits(16, ctx), BoundError);  // 2^(k*d) == 16
  CHECK_NOTHROW(to_digits(15, ctx));
}

TEST_CASE("hex helpers are strict and lowercase") {
  CHECK(to_hex(Natural(0)) == "0");
  CHECK(to_hex(Natural(255)) == "ff");
  CHECK(parse_hex("ff") == 255);
  CHECK(parse_hex("FF") == 255);  // tolerant on input
  CHECK_THROWS_AS(parse_hex(""), ParseError);
  CHECK_THROWS_AS(parse_hex("0x1f"), ParseError);
  CHECK_THROWS_AS(parse_hex("g"), ParseError);
  CHECK(is_canonical_hex("2b"));
  CHECK(!is_canonical_hex("2B"));
  CHECK(!is_canonical_hex("02b"));
  CHECK(is_canonical_hex("0"));
}

TEST_CASE("random source is deterministic") {
  RandomSource a(42), b(42);
  Natural bound = parse_hex("ffffffffffffff1");
  for (int i = 0; i < 10; ++i) {
    CHECK(a.bits(130) == b.bits(130));
    CHECK(a.below(bound) == b.below(bound));
  }
  RandomSource c(43);
  bool all_equal = true;
  RandomSource a2(42);
  for (int i = 0; i < 10; ++i)
    if (a2.bits(130) != c.bits(130)) all_equal = false;
  CHECK(!all_equal);
}
