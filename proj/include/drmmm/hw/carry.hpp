#pragma once

#include <cstdint>

#include "drmmm/natural.hpp"

namespace drmmm::hw {

// Carry recovery for the redundant accumulator. The three k-bit low windows
// sum to a multiple of 2^k (guaranteed by the quotient digit), and that
// multiple is 0, 1 or 2 - so two unary carry bits reconstruct it. Both bits
// are decided from the top two bit positions of each window alone:
//
//   C_l: a carry into position k-1 exists iff any of the six inspected bits
//        is set (an all-zero top cannot produce a nonzero multiple of 2^k,
//        and any set bit forces at least one).
//   C_m: the second carry appears only when the position k-1 column is heavy:
//        three ones there, or two ones helped by any one at position k-2,
//        or one one helped by all three at position k-2.

struct CarryBits {
  bool low = false;   // C_l, injected into term 1 after the shift
  bool high = false;  // C_m, injected into term 2 after the shift

  unsigned total() const { return (low ? 1u : 0u) + (high ? 1u : 0u); }
};

/// Pure combinational cell on the six inspected bits; also the generator for
/// the LUT INIT words. (z*_msb = bit k-1, z*_next = bit k-2.)
inline CarryBits carry_cell(bool z0_msb, bool z1_msb, bool z2_msb,
                            bool z0_next, bool z1_next, bool z2_next) {
  unsigned n_msb = (z0_msb ? 1u : 0u) + (z1_msb ? 1u : 0u) + (z2_msb ? 1u : 0u);
  unsigned n_next =
      (z0_next ? 1u : 0u) + (z1_next ? 1u : 0u) + (z2_next ? 1u : 0u);

  CarryBits out;
  out.low = n_msb + n_next > 0;
  out.high = (n_msb == 3) || (n_msb == 2 && n_next >= 1) ||
             (n_msb == 1 && n_next == 3);
  return out;
}

/// Carry bits for three k-bit windows whose sum is divisible by 2^k.
/// Violating the divisibility precondition raises CarryError.
inline CarryBits carry_bits(std::uint64_t z0_low, std::uint64_t z1_low,
                            std::uint64_t z2_low, unsigned k) {
  if (k < 2 || k > 64) throw ParameterError("k must be in [2, 64]");
  const std::uint64_t mask =
      k >= 64 ? ~std::uint64_t(0) : (std::uint64_t(1) << k) - 1;
  if ((z0_low | z1_low | z2_low) & ~mask)
    throw ParameterError("window value wider than k bits");

  unsigned __int128 sum =
      (unsigned __int128)z0_low + z1_low + z2_low;
  if ((std::uint64_t(sum) & mask) != 0)
    throw CarryError("window sum not divisible by 2^k");

  auto bit = [](std::uint64_t v, unsigned pos) { return ((v >> pos) & 1) != 0; };
  return carry_cell(bit(z0_low, k - 1), bit(z1_low, k - 1), bit(z2_low, k - 1),
                    bit(z0_low, k - 2), bit(z1_low, k - 2), bit(z2_low, k - 2));
}

struct CarryLutInits {
  std::uint64_t init_low = 0;   // C_l LUT6 contents
  std::uint64_t init_high = 0;  // C_m LUT6 contents
};

// Expected LUT6 contents for the two carry functions; the generator below
// must reproduce them bit for bit.
inline constexpr std::uint64_t carry_init_low_expected = 0xfffffffffffffffeull;
inline constexpr std::uint64_t carry_init_high_expected = 0xfffefe80fe808000ull;

/// Builds both 64-bit INIT words from carry_cell. Bit index layout, high to
/// low: (z0_msb, z1_msb, z2_msb, z0_next, z1_next, z2_next). A divergence
/// from the expected constants means the cell logic regressed, and raises.
inline CarryLutInits carry_lut_inits() {
  CarryLutInits out;
  for (unsigned idx = 0; idx < 64; ++idx) {
    CarryBits cb = carry_cell((idx >> 5) & 1, (idx >> 4) & 1, (idx >> 3) & 1,
                              (idx >> 2) & 1, (idx >> 1) & 1, idx & 1);
    if (cb.low) out.init_low |= std::uint64_t(1) << idx;
    if (cb.high) out.init_high |= std::uint64_t(1) << idx;
  }
  if (out.init_low != carry_init_low_expected ||
      out.init_high != carry_init_high_expected)
    throw InternalError("carry LUT generator diverged from expected INITs");
  return out;
}

}  // namespace drmmm::hw
