#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "drmmm/classical.hpp"

namespace drmmm {

// Different-radix variant of the digit-serial recurrence. The result radix
// stays 2^k, but the quotient digit for iteration i is derived from the full
// k*t-bit low window of the state as it stood t iterations earlier:
//
//   Z_i = (Z_{i-1} + a_i * B * 2^(k*t) + qhat_i * M) >> k
//   qhat_i = q_hat(Z_{i-t})   (zero while i < t, since the state was zero)
//
// Multiplying the operand digits by 2^(k*t) delays the point where a_i can
// disturb the low window, which is what buys t cycles of slack to compute
// q_hat in a pipeline. After d + t iterations the accumulator equals the
// classical pre-reduction value, and the nonzero qhat stream equals the
// classical quotient stream digit for digit.

/// One committed iteration: state after the shift, the quotient digit
/// consumed, and the operand digit folded in.
struct DrmmmStep {
  std::size_t i = 0;
  Natural z;
  std::uint64_t q_consumed = 0;
  std::uint64_t a_digit = 0;
};

struct DrmmmTrace {
  std::vector<DrmmmStep> steps;
};

struct DrmmmRun {
  MmmResult result;
  DrmmmTrace trace;
};

/// Quotient digit from a (k*t)-bit window:
///   ((z mod 2^(k*t)) * m_prime_wide mod 2^(k*t)) >> k*(t-1)
/// The product cancels the whole low window of z + q*M; only the top k bits
/// of the window are kept as the digit. For t = 1 this is exactly the
/// classical digit map.
inline Natural q_hat(const MontgomeryContext& ctx, const Natural& z_prev) {
  const std::size_t kt = ctx.window_product_bits();
  Natural prod = low_bits(low_bits(z_prev, kt) * ctx.m_prime_wide, kt);
  return shift_right(prod, std::size_t(ctx.k) * (ctx.t - 1));
}

inline DrmmmRun drmmm_mul(const MontgomeryContext& ctx, const Natural& a,
                          const Natural& b) {
  if (a >= ctx.modulus || b >= ctx.modulus)
    throw ParameterError("operands must be below the modulus");

  const DigitVector ad = to_digits(a, ctx);
  const std::size_t rounds = ctx.num_digits + ctx.t;
  const Natural b_shifted = shift_left(b, ctx.window_product_bits());

  DrmmmRun run;
  run.trace.steps.reserve(rounds);
  run.result.quotients.k = ctx.k;
  run.result.quotients.digits.reserve(ctx.num_digits);

  Natural z = 0;
  for (std::size_t i = 0; i < rounds; ++i) {
    // Digit computed from the state t iterations back (zero before start).
    std::uint64_t q = 0;
    if (i >= ctx.t) q = q_hat(ctx, run.trace.steps[i - ctx.t].z).get_ui();

    Natural sum = z;
    if (ad.digits[i])
      mpz_addmul_ui(sum.get_mpz_t(), b_shifted.get_mpz_t(), ad.digits[i]);
    if (q) mpz_addmul_ui(sum.get_mpz_t(), ctx.modulus.get_mpz_t(), q);

    if (detail::low_word(sum, ctx.k) != 0)
      throw ShiftValidityError("nonzero low window before shift", i);
    z = shift_right(sum, ctx.k);

    run.trace.steps.push_back({i, z, q, ad.digits[i]});
    if (i >= ctx.t) run.result.quotients.digits.push_back(q);
  }

  run.result.pre_reduction = z;
  run.result.output = final_reduce(z, ctx.modulus);
  return run;
}

}  // namespace drmmm
