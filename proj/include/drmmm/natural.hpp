#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <cstdint>
#include <string>

#include "drmmm/errors.hpp"

namespace drmmm {

/// Arbitrary-precision unsigned integer. Backed by GMP; every operation in
/// this library keeps values non-negative. bit_length(0) == 0 by convention.
using Natural = mpz_class;

/// Exact rational, used by the latency and dependence-degree analyses.
using Rational = mpq_class;

inline std::size_t bit_length(const Natural& v) {
  return v == 0 ? 0 : mpz_sizeinbase(v.get_mpz_t(), 2);
}

inline bool is_odd(const Natural& v) { return mpz_odd_p(v.get_mpz_t()) != 0; }

inline Natural pow2(std::size_t bits) {
  Natural r = 0;
  mpz_setbit(r.get_mpz_t(), bits);
  return r;
}

/// v mod 2^bits.
inline Natural low_bits(const Natural& v, std::size_t bits) {
  Natural r;
  mpz_fdiv_r_2exp(r.get_mpz_t(), v.get_mpz_t(), bits);
  return r;
}

inline Natural shift_right(const Natural& v, std::size_t bits) {
  Natural r;
  mpz_fdiv_q_2exp(r.get_mpz_t(), v.get_mpz_t(), bits);
  return r;
}

inline Natural shift_left(const Natural& v, std::size_t bits) {
  Natural r;
  mpz_mul_2exp(r.get_mpz_t(), v.get_mpz_t(), bits);
  return r;
}

inline bool test_bit(const Natural& v, std::size_t index) {
  return mpz_tstbit(v.get_mpz_t(), index) != 0;
}

/// Lowercase, unprefixed, big-endian hex; "0" for zero. This is the canonical
/// text form used by the CLI, vector files and trace documents.
inline std::string to_hex(const Natural& v) { return v.get_str(16); }

/// Parses unprefixed hex. Accepts upper- and lowercase input digits.
inline Natural parse_hex(const std::string& text) {
  if (text.empty()) throw ParseError("empty hex string");
  for (char c : text) {
    const bool ok = (c >= '0' && c <= '9') || (c >= 'a' && c <= 'f') ||
                    (c >= 'A' && c <= 'F');
    if (!ok)
      throw ParseError("invalid hex digit '" + std::string(1, c) + "'");
  }
  Natural r;
  if (r.set_str(text, 16) != 0)
    throw ParseError("unparsable hex string \"" + text + "\"");
  return r;
}

/// Strict lowercase form required inside vector files.
inline bool is_canonical_hex(const std::string& text) {
  if (text.empty()) return false;
  for (char c : text)
    if (!((c >= '0' && c <= '9') || (c >= 'a' && c <= 'f'))) return false;
  // No redundant leading zeros, so values round-trip byte-identically.
  return text.size() == 1 || text[0] != '0';
}

}  // namespace drmmm
