#pragma once

#include <cstdint>
#include <vector>

#include "drmmm/natural.hpp"

namespace drmmm {

// Hard caps on the derived-parameter sizes so digit values fit machine words
// and precomputed tables stay bounded. k is the radix exponent (radix = 2^k),
// k*t is the width of the wide quotient window used by the pipelined variant.
inline constexpr unsigned max_radix_bits = 64;
inline constexpr unsigned max_window_product_bits = 4096;

/// Precomputed constants for one (modulus, k, t) choice. Immutable in normal
/// use; tests corrupt the m_prime_* fields on purpose to show the shift
/// validity checks trip.
struct MontgomeryContext {
  Natural modulus;           // M, odd, >= 3
  std::size_t modulus_bits;  // exact bit length of M
  unsigned k = 0;            // radix exponent, 2 <= k <= 64
  unsigned t = 0;            // pipeline depth of the variant, >= 1
  Natural radix;             // 2^k
  std::size_t num_digits;    // d = ceil(modulus_bits / k)

  // Negated modular inverses of M at three different power-of-two moduli.
  Natural m_prime_digit;  // -M^-1 mod 2^k
  Natural m_prime_wide;   // -M^-1 mod 2^(k*t)
  Natural m_prime_full;   // -M^-1 mod 2^modulus_bits

  std::size_t window_product_bits() const {
    return std::size_t(k) * t;  // k*t
  }
};

namespace detail {

// (-base^-1) mod 2^bits for odd base.
inline Natural neg_inverse_pow2(const Natural& base, std::size_t bits) {
  Natural mod = pow2(bits);
  Natural inv;
  if (mpz_invert(inv.get_mpz_t(), base.get_mpz_t(), mod.get_mpz_t()) == 0)
    throw InternalError("modular inverse does not exist");
  return low_bits(mod - inv, bits);
}

}  // namespace detail

inline MontgomeryContext make_context(const Natural& modulus, unsigned k,
                                      unsigned t) {
  if (modulus < 3 || !is_odd(modulus))
    throw ParameterError("modulus must be odd and >= 3");
  if (k < 2 || k > max_radix_bits)
    throw ParameterError("k must be in [2, 64]");
  if (t < 1) throw ParameterError("t must be >= 1");
  if (std::size_t(k) * t > max_window_product_bits)
    throw ParameterError("k*t exceeds the supported window width");

  MontgomeryContext ctx;
  ctx.modulus = modulus;
  ctx.modulus_bits = bit_length(modulus);
  ctx.k = k;
  ctx.t = t;
  ctx.radix = pow2(k);
  ctx.num_digits = (ctx.modulus_bits + k - 1) / k;
  ctx.m_prime_digit = detail::neg_inverse_pow2(modulus, k);
  ctx.m_prime_wide = detail::neg_inverse_pow2(modulus, ctx.window_product_bits());
  ctx.m_prime_full = detail::neg_inverse_pow2(modulus, ctx.modulus_bits);
  return ctx;
}

/// Little-endian radix-2^k digits. `digits[i] < 2^k`; entries at and past
/// `padded_from` are structural zero padding for the pipelined recurrence,
/// which reads t+1 digits past the end of the operand.
struct DigitVector {
  std::vector<std::uint64_t> digits;
  unsigned k = 0;
  std::size_t padded_from = 0;
};

inline DigitVector to_digits(const Natural& value,
                             const MontgomeryContext& ctx) {
  if (bit_length(value) > ctx.k * ctx.num_digits)
    throw BoundError("value too wide for the digit vector");
  DigitVector out;
  out.k = ctx.k;
  out.padded_from = ctx.num_digits;
  out.digits.reserve(ctx.num_digits + ctx.t + 1);
  Natural rest = value;
  for (std::size_t i = 0; i < ctx.num_digits; ++i) {
    out.digits.push_back(low_bits(rest, ctx.k).get_ui());
    rest = shift_right(rest, ctx.k);
  }
  for (unsigned i = 0; i < ctx.t + 1; ++i) out.digits.push_back(0);
  return out;
}

inline Natural recompose(const DigitVector& dv) {
  Natural acc = 0;
  for (std::size_t i = dv.digits.size(); i-- > 0;) {
    acc = shift_left(acc, dv.k);
    acc += Natural(dv.digits[i]);
  }
  return acc;
}

}  // namespace drmmm
