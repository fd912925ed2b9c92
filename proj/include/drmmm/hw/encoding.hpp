#pragma once

#include <algorithm>
#include <cstdint>
#include <string>
#include <vector>

#include "drmmm/context.hpp"

namespace drmmm::hw {

/// Window lookup tables that replace the two in-loop multiplications.
///   im       : window value i -> i * M            (exact)
///   im_prime : window value i -> i * M' mod 2^mod_bits
///   merged   : window value i -> ((i * M' mod 2^w) * M); folds the quotient
///              map and the modulus multiple into one radix-16 lookup, so it
///              is only offered for w == k == 4.
enum class TableKind { im, im_prime, merged };

struct EncodingTable {
  TableKind kind = TableKind::im;
  unsigned window_bits = 0;   // w in [4, 6]
  std::size_t mod_bits = 0;   // nonzero: entries live mod 2^mod_bits
  std::vector<Natural> entries;  // 2^w values
};

namespace detail {

inline void check_window_bits(unsigned w) {
  if (w < 4 || w > 6) throw ParameterError("window width must be in [4, 6]");
}

}  // namespace detail

/// i -> i * base table, optionally reduced mod 2^mod_bits.
inline EncodingTable build_multiple_table(const Natural& base, unsigned w,
                                          TableKind kind,
                                          std::size_t mod_bits = 0) {
  detail::check_window_bits(w);
  if (kind == TableKind::merged)
    throw ParameterError("merged tables require a full context");
  if ((kind == TableKind::im_prime) != (mod_bits != 0))
    throw ParameterError("mod_bits is required exactly for im_prime tables");

  EncodingTable table;
  table.kind = kind;
  table.window_bits = w;
  table.mod_bits = mod_bits;
  table.entries.reserve(std::size_t(1) << w);
  for (std::size_t i = 0; i < (std::size_t(1) << w); ++i) {
    Natural e = Natural(static_cast<unsigned long>(i)) * base;
    if (mod_bits) e = low_bits(e, mod_bits);
    table.entries.push_back(std::move(e));
  }
  return table;
}

inline EncodingTable build_encoding_table(const MontgomeryContext& ctx,
                                          unsigned w, TableKind kind) {
  detail::check_window_bits(w);
  switch (kind) {
    case TableKind::im:
      return build_multiple_table(ctx.modulus, w, TableKind::im);
    case TableKind::im_prime:
      return build_multiple_table(ctx.m_prime_wide, w, TableKind::im_prime,
                                  ctx.window_product_bits());
    case TableKind::merged: {
      if (w != 4 || ctx.k != 4)
        throw ParameterError("merged tables need w == k == 4");
      EncodingTable table;
      table.kind = TableKind::merged;
      table.window_bits = w;
      table.entries.reserve(16);
      for (unsigned long i = 0; i < 16; ++i) {
        Natural q = low_bits(Natural(i) * ctx.m_prime_digit, w);
        table.entries.push_back(q * ctx.modulus);
      }
      return table;
    }
  }
  throw ParameterError("unknown table kind");
}

/// Bit-transposed view of a table: row b holds bit b of every entry, with
/// entry index 0 at the least significant bit. Each row is one 2^w-bit LUT
/// INIT word.
struct LutInitMatrix {
  unsigned window_bits = 0;
  std::size_t entry_bits = 0;  // rows.size()
  std::vector<Natural> rows;
};

inline LutInitMatrix lut_init_matrix(const EncodingTable& table) {
  LutInitMatrix m;
  m.window_bits = table.window_bits;
  for (const Natural& e : table.entries)
    m.entry_bits = std::max(m.entry_bits, bit_length(e));
  m.rows.assign(m.entry_bits, Natural(0));
  for (std::size_t i = 0; i < table.entries.size(); ++i)
    for (std::size_t b = 0; b < m.entry_bits; ++b)
      if (test_bit(table.entries[i], b))
        mpz_setbit(m.rows[b].get_mpz_t(), i);
  return m;
}

/// One INIT word as fixed-width lowercase hex (2^w bits -> 2^w/4 digits).
inline std::string format_init_word(const Natural& row, unsigned w) {
  std::string hex = to_hex(row);
  std::size_t width = (std::size_t(1) << w) / 4;
  if (hex.size() < width) hex.insert(0, width - hex.size(), '0');
  return hex;
}

/// Table output for one window of one term, plus where it lands.
struct PartialProduct {
  Natural value;
  std::size_t shift = 0;

  Natural shifted() const { return shift_left(value, shift); }
};

/// Slices the low `width_bits` of every term into ceil(width_bits / w)
/// windows and looks each one up. Zero-valued windows still emit a partial
/// product: the count is structural, matching the physical LUT columns.
inline std::vector<PartialProduct> encode_windows(
    const std::vector<Natural>& terms, std::size_t width_bits,
    const EncodingTable& table) {
  const unsigned w = table.window_bits;
  if (width_bits == 0) throw ParameterError("window slice width must be > 0");
  const std::size_t windows = (width_bits + w - 1) / w;

  std::vector<PartialProduct> pps;
  pps.reserve(terms.size() * windows);
  for (const Natural& term : terms) {
    Natural slice = low_bits(term, width_bits);
    for (std::size_t j = 0; j < windows; ++j) {
      std::uint64_t idx = low_bits(slice, w).get_ui();
      pps.push_back({table.entries[idx], j * w});
      slice = shift_right(slice, w);
    }
  }
  return pps;
}

/// Sum of shifted partial products, optionally reduced mod 2^mod_bits.
inline Natural sum_partial_products(const std::vector<PartialProduct>& pps,
                                    std::size_t mod_bits = 0) {
  Natural acc = 0;
  for (const PartialProduct& pp : pps) {
    Natural v = pp.shifted();
    mpz_add(acc.get_mpz_t(), acc.get_mpz_t(), v.get_mpz_t());
  }
  return mod_bits ? low_bits(acc, mod_bits) : acc;
}

/// Partial products of a_i * B * 2^(k*t): bit j of the operand digit selects
/// B shifted by j, and the whole bundle is pre-shifted by k*t. Exactly k
/// terms, zeros included.
inline std::vector<Natural> gen_temp_pps(std::uint64_t a_digit,
                                         const Natural& b,
                                         const MontgomeryContext& ctx) {
  std::vector<Natural> pps;
  pps.reserve(ctx.k);
  const std::size_t kt = ctx.window_product_bits();
  for (unsigned j = 0; j < ctx.k; ++j) {
    if ((a_digit >> j) & 1)
      pps.push_back(shift_left(b, kt + j));
    else
      pps.push_back(Natural(0));
  }
  return pps;
}

}  // namespace drmmm::hw
