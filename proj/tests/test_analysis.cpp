#include <catch2/catch_amalgamated.hpp>

#include "drmmm/analysis.hpp"
#include "drmmm/random.hpp"

using namespace drmmm;

namespace {

Rational random_rational(RandomSource& rng) {
  unsigned long num = rng.next_u64() % 1000;
  unsigned long den = 1 + rng.next_u64() % 30;
  Rational r(num, den);
  r.canonicalize();
  return r;
}

}  // namespace

TEST_CASE("latency formulas on the reference configuration") {
  LatencyParams p;  // t_mul = t_add = 1, t_reduce = 0
  CHECK(latency_serial(p, 64) == 320);        // 64 * (3 + 2)
  CHECK(latency_proposed(p, 64, 4) == 207);   // (64 + 4 + 1) * 3
  CHECK(latency_gain(p, 64, 4) == 113);
  CHECK(latency_serial(p, 64) - latency_proposed(p, 64, 4) ==
        latency_gain(p, 64, 4));
}

TEST_CASE("gain identity holds on random rational parameters") {
  RandomSource rng(13);
  for (int trial = 0; trial < 150; ++trial) {
    LatencyParams p;
    p.t_mul = random_rational(rng);
    p.t_add = random_rational(rng);
    p.t_reduce = random_rational(rng);
    std::size_t d = 1 + rng.next_u64() % 700;
    unsigned t = 1 + unsigned(rng.next_u64() % 9);
    CHECK(latency_serial(p, d) - latency_proposed(p, d, t) ==
          latency_gain(p, d, long(t)));
    // Positive gain exactly when 2*d*t_mul exceeds (t+1)*(t_mul + 2*t_add).
    bool faster = latency_proposed(p, d, t) < latency_serial(p, d);
    bool expect = 2 * Rational(long(d)) * p.t_mul >
                  Rational(long(t) + 1) * (p.t_mul + 2 * p.t_add);
    CHECK(faster == expect);
  }
}

TEST_CASE("degenerate pipeline depth recovers the full multiplier cost") {
  LatencyParams p;
  p.t_mul = Rational(7, 2);
  p.t_add = 5;
  std::size_t d = 33;
  CHECK(latency_gain(p, d, -1) == 2 * Rational(long(d)) * p.t_mul);
}

TEST_CASE("t_max estimate") {
  LatencyParams p;
  p.t_update = 4;
  p.t_qpath = 9;
  CHECK(estimate_t_max(p) == 4);
  p.t_qpath = 8;
  CHECK(estimate_t_max(p) == 3);
  p.t_qpath = 0;
  CHECK(estimate_t_max(p) == 1);
  p.t_qpath = Rational(1, 3);
  CHECK(estimate_t_max(p) == 2);
  p.t_update = 0;
  CHECK_THROWS_AS(estimate_t_max(p), ParameterError);
}

TEST_CASE("dependence degree and bound") {
  MontgomeryContext ctx = make_context(pow2(1024) - 1, 16, 4);
  REQUIRE(ctx.num_digits == 64);
  CHECK(dependence_degree(0, ctx).value == 0);
  CHECK(dependence_degree(1, ctx).value == Rational(1, 2));
  CHECK(dependence_degree(5, ctx).value == Rational(5, 6));
  CHECK(dependence_degree(63, ctx).value == Rational(63, 64));
  CHECK_THROWS_AS(dependence_degree(64, ctx), ParameterError);

  CHECK(dependence_bound(1024, 16) == Rational(63, 64));
  CHECK(dependence_bound(1024, 2) == Rational(511, 512));
  CHECK(dependence_bound(8, 16) == 0);  // single iteration: nothing to wait on

  // Smaller radix -> more iterations -> bound closer to 1.
  Rational prev = -1;
  for (unsigned k : {64u, 32u, 16u, 8u, 4u, 2u}) {
    Rational b = dependence_bound(1024, k);
    CHECK(b >= prev);
    prev = b;
  }

  // General form specializes when both operands have the modulus width.
  for (std::size_t i : {1ul, 3ul, 17ul}) {
    Rational g = dependence_degree_general(i, 16, 1024, 1024);
    Rational want(long(i * 16 + 1024), long((i + 1) * 16 + 1024));
    want.canonicalize();
    CHECK(g == want);
  }
  CHECK(dependence_degree_general(0, 16, 1024, 1024) == 0);
}
