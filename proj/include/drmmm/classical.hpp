#pragma once

#include <cstdint>
#include <vector>

#include "drmmm/context.hpp"

namespace drmmm {

/// Quotient digits q_0..q_{d-1} produced by one multiplication, at radix 2^k.
struct QuotientTrace {
  std::vector<std::uint64_t> digits;
  unsigned k = 0;

  /// sum_j digits[j] * 2^(k*j), reduced mod 2^bits. For a fixed (M, A, B)
  /// this fold is the same for every radix — see quotient_fold_constant().
  Natural folded_mod_pow2(std::size_t bits) const {
    Natural acc = 0;
    for (std::size_t j = digits.size(); j-- > 0;) {
      acc = shift_left(acc, k);
      acc += Natural(digits[j]);
    }
    return low_bits(acc, bits);
  }
};

struct MmmResult {
  Natural output;         // A*B*2^(-k*d) mod M, fully reduced
  Natural pre_reduction;  // value before the final conditional subtraction, < 2M
  QuotientTrace quotients;
};

/// Ground-truth modular product used to cross-check everything else.
inline Natural modmul_oracle(const Natural& a, const Natural& b,
                             const Natural& modulus) {
  if (modulus < 1) throw ParameterError("modulus must be >= 1");
  Natural r;
  mpz_mul(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  mpz_mod(r.get_mpz_t(), r.get_mpz_t(), modulus.get_mpz_t());
  return r;
}

/// Final conditional subtraction: maps [0, 2M) onto [0, M).
inline Natural final_reduce(const Natural& z, const Natural& modulus) {
  if (z >= 2 * modulus) throw BoundError("pre-reduction value not below 2M");
  return z >= modulus ? Natural(z - modulus) : z;
}

namespace detail {

inline std::uint64_t mask_bits(unsigned k) {
  return k >= 64 ? ~std::uint64_t(0) : (std::uint64_t(1) << k) - 1;
}

// Low k bits of v as a machine word (k <= 64).
inline std::uint64_t low_word(const Natural& v, unsigned k) {
  return low_bits(v, k).get_ui();
}

}  // namespace detail

/// Digit-serial Montgomery multiplication. Each round folds one digit of A
/// into the accumulator, cancels the low k bits with a quotient digit
/// q = (Z mod 2^k) * m_prime_digit mod 2^k, and shifts right by k. The
/// low window is checked to be zero before every shift.
inline MmmResult classical_mmm(const MontgomeryContext& ctx, const Natural& a,
                               const Natural& b) {
  if (a >= ctx.modulus || b >= ctx.modulus)
    throw ParameterError("operands must be below the modulus");

  const DigitVector ad = to_digits(a, ctx);
  const std::uint64_t mask = detail::mask_bits(ctx.k);
  const std::uint64_t mpd = ctx.m_prime_digit.get_ui();

  MmmResult res;
  res.quotients.k = ctx.k;
  res.quotients.digits.reserve(ctx.num_digits);

  Natural z = 0;
  for (std::size_t i = 0; i < ctx.num_digits; ++i) {
    if (ad.digits[i])
      mpz_addmul_ui(z.get_mpz_t(), b.get_mpz_t(), ad.digits[i]);
    const std::uint64_t low = detail::low_word(z, ctx.k);
    const std::uint64_t q =
        std::uint64_t((unsigned __int128)(low) * mpd) & mask;
    if (q) mpz_addmul_ui(z.get_mpz_t(), ctx.modulus.get_mpz_t(), q);
    if (detail::low_word(z, ctx.k) != 0)
      throw ShiftValidityError("nonzero low window before shift", i);
    z = shift_right(z, ctx.k);
    res.quotients.digits.push_back(q);
  }

  res.pre_reduction = z;
  res.output = final_reduce(z, ctx.modulus);
  return res;
}

/// A*R mod M with R = 2^(k*d), computed by the direct route.
inline Natural mont_encode(const MontgomeryContext& ctx, const Natural& a) {
  if (a >= ctx.modulus)
    throw ParameterError("operand must be below the modulus");
  Natural r_mod = pow2(ctx.k * ctx.num_digits) % ctx.modulus;
  return modmul_oracle(a, r_mod, ctx.modulus);
}

/// Inverse of mont_encode: one multiplication by 1 strips the R factor.
inline Natural mont_decode(const MontgomeryContext& ctx, const Natural& a_hat) {
  return classical_mmm(ctx, a_hat, 1).output;
}

/// Plain A*B mod M via two passes (the second multiplies by R^2 mod M to
/// cancel the R^-1 the first pass introduced).
inline Natural mont_mul_corrected(const MontgomeryContext& ctx,
                                  const Natural& a, const Natural& b) {
  Natural r_mod = pow2(ctx.k * ctx.num_digits) % ctx.modulus;
  Natural r2 = modmul_oracle(r_mod, r_mod, ctx.modulus);
  Natural z = classical_mmm(ctx, a, b).output;
  return classical_mmm(ctx, z, r2).output;
}

/// (A * B * m_prime_full) mod 2^modulus_bits. The folded quotient digits of
/// any radix-2^k run equal this value, which is what makes quotient streams
/// comparable across radices.
inline Natural quotient_fold_constant(const MontgomeryContext& ctx,
                                      const Natural& a, const Natural& b) {
  return low_bits(a * b * ctx.m_prime_full, ctx.modulus_bits);
}

/// Runs the classical algorithm at radices 2^k1 and 2^k2 and confirms both
/// quotient folds match each other and the closed-form constant.
inline bool check_quotient_consistency(const Natural& modulus,
                                       const Natural& a, const Natural& b,
                                       unsigned k1, unsigned k2) {
  MontgomeryContext c1 = make_context(modulus, k1, 1);
  MontgomeryContext c2 = make_context(modulus, k2, 1);
  Natural f1 = classical_mmm(c1, a, b).quotients.folded_mod_pow2(c1.modulus_bits);
  Natural f2 = classical_mmm(c2, a, b).quotients.folded_mod_pow2(c2.modulus_bits);
  Natural expect = quotient_fold_constant(c1, a, b);
  return f1 == f2 && f1 == expect;
}

}  // namespace drmmm
