#pragma once

#include <algorithm>
#include <array>
#include <cstddef>
#include <utility>
#include <vector>

#include "drmmm/natural.hpp"

namespace drmmm::hw {

/// One 6-input counter cell: the three output bits are the binary count of
/// set inputs, so out[0] + 2*out[1] + 4*out[2] == popcount(in).
inline std::array<bool, 3> compress_6to3(const std::array<bool, 6>& in) {
  unsigned count = 0;
  for (bool b : in) count += b ? 1 : 0;
  return {(count & 1) != 0, (count & 2) != 0, (count & 4) != 0};
}

/// Classic carry-save cell, (sum, carry) with sum + 2*carry == x + y + z.
inline std::pair<bool, bool> csa_3to2(bool x, bool y, bool z) {
  bool sum = x ^ y ^ z;
  bool carry = (x && y) || (y && z) || (x && z);
  return {sum, carry};
}

struct CompressResult {
  std::vector<Natural> terms;
  unsigned levels = 0;
};

namespace detail {

// Whole-vector 6-input counter: applies compress_6to3 to every bit column at
// once using word-parallel logic. Missing inputs are zero.
// Returns (weight-1, weight-2, weight-4) planes, already shifted into place.
inline std::array<Natural, 3> column_count6(const std::vector<Natural>& g) {
  Natural zero = 0;
  const Natural& a = g.size() > 0 ? g[0] : zero;
  const Natural& b = g.size() > 1 ? g[1] : zero;
  const Natural& c = g.size() > 2 ? g[2] : zero;
  const Natural& d = g.size() > 3 ? g[3] : zero;
  const Natural& e = g.size() > 4 ? g[4] : zero;
  const Natural& f = g.size() > 5 ? g[5] : zero;

  Natural s1 = a ^ b ^ c;
  Natural c1 = (a & b) | (b & c) | (a & c);
  Natural s2 = d ^ e ^ f;
  Natural c2 = (d & e) | (e & f) | (d & f);

  Natural o0 = s1 ^ s2;
  Natural cl = s1 & s2;
  Natural o1 = c1 ^ c2 ^ cl;
  Natural o2 = (c1 & c2) | (c2 & cl) | (c1 & cl);

  return {std::move(o0), shift_left(o1, 1), shift_left(o2, 2)};
}

// Term count after one level, mirroring the grouping in compress_one_level:
// each full group of 6 yields 3 terms, a tail of 4..5 yields 3, a tail of 3
// yields 2, tails of 1..2 pass through.
inline std::size_t level_output_count(std::size_t n) {
  static constexpr std::size_t tail[6] = {0, 1, 2, 2, 3, 3};
  return 3 * (n / 6) + tail[n % 6];
}

}  // namespace detail

/// One compressor level: partitions the terms into groups of up to six and
/// counts each group column-wise. The numeric sum of the terms is preserved
/// exactly; groups of one or two pass through unchanged.
inline std::vector<Natural> compress_one_level(const std::vector<Natural>& terms,
                                               std::size_t width_cap) {
  std::vector<Natural> out;
  out.reserve(detail::level_output_count(terms.size()));
  for (std::size_t base = 0; base < terms.size(); base += 6) {
    std::size_t n = std::min<std::size_t>(6, terms.size() - base);
    if (n <= 2) {
      for (std::size_t i = 0; i < n; ++i) out.push_back(terms[base + i]);
      continue;
    }
    std::vector<Natural> group(terms.begin() + base, terms.begin() + base + n);
    auto planes = detail::column_count6(group);
    out.push_back(std::move(planes[0]));
    out.push_back(std::move(planes[1]));
    if (n > 3) out.push_back(std::move(planes[2]));  // count < 4 for 3 inputs
  }
  for (const Natural& v : out)
    if (bit_length(v) > width_cap)
      throw BoundError("compressor output exceeded the width cap");
  return out;
}

/// Reduces `terms` to at most `target` (2 or 3) values with the same sum,
/// counting levels. Inputs wider than `width_cap` bits are rejected, as is
/// any intermediate that outgrows the cap (a guard-bit violation).
inline CompressResult compress_terms(std::vector<Natural> terms,
                                     std::size_t target,
                                     std::size_t width_cap) {
  if (target != 2 && target != 3)
    throw ParameterError("compression target must be 2 or 3");
  if (terms.empty()) throw ParameterError("no terms to compress");
  for (const Natural& v : terms)
    if (bit_length(v) > width_cap)
      throw BoundError("compressor input exceeds the width cap");

  CompressResult res;
  while (terms.size() > target) {
    terms = compress_one_level(terms, width_cap);
    ++res.levels;
  }
  res.terms = std::move(terms);
  return res;
}

/// Level count of compress_terms without touching any values.
inline unsigned compress_level_count(std::size_t n, std::size_t target) {
  unsigned levels = 0;
  while (n > target) {
    n = detail::level_output_count(n);
    ++levels;
  }
  return levels;
}

}  // namespace drmmm::hw
