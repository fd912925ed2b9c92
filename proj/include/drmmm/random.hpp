#pragma once

#include <cstdint>
#include <random>

#include "drmmm/natural.hpp"

namespace drmmm {

/// Deterministic wide-integer source. A fixed seed yields the same draw
/// sequence on every platform (mt19937_64 is specified bit-for-bit and the
/// values are assembled with shifts, not native-endian imports), which is what
/// makes `verify --seed N` byte-reproducible.
class RandomSource {
 public:
  explicit RandomSource(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform in [0, 2^nbits).
  Natural bits(std::size_t nbits) {
    Natural r = 0;
    std::size_t full = nbits / 64;
    for (std::size_t i = 0; i < full; ++i) {
      r = shift_left(r, 64);
      r += Natural(engine_());
    }
    std::size_t rest = nbits % 64;
    if (rest) {
      r = shift_left(r, rest);
      r += Natural(engine_() >> (64 - rest));
    }
    return r;
  }

  /// Uniform in [0, bound) by rejection.
  Natural below(const Natural& bound) {
    if (bound <= 0) throw ParameterError("random bound must be positive");
    if (bound == 1) return 0;
    std::size_t nbits = bit_length(bound - 1);
    for (;;) {
      Natural x = bits(nbits);
      if (x < bound) return x;
    }
  }

  /// Odd value with exactly `nbits` significant bits (top and bottom bit set).
  Natural odd_with_bit_length(std::size_t nbits) {
    if (nbits < 2)
      throw ParameterError("odd_with_bit_length needs at least 2 bits");
    Natural x = bits(nbits);
    mpz_setbit(x.get_mpz_t(), nbits - 1);
    mpz_setbit(x.get_mpz_t(), 0);
    return x;
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace drmmm
