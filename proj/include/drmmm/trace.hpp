#pragma once

#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "drmmm/hw/datapath.hpp"
#include "drmmm/variant.hpp"

namespace drmmm {

using Json = nlohmann::json;

// Trace documents: one JSON object per multiplication with a fixed schema
// ({header, iterations, summary}). All numbers that can be wide are lowercase
// unprefixed hex strings; small structural counts stay JSON integers.

namespace detail {

inline Json trace_header(const MontgomeryContext& ctx, const std::string& mode,
                         std::optional<unsigned> w,
                         std::optional<unsigned> w_prime) {
  Json h;
  h["m"] = to_hex(ctx.modulus);
  h["k"] = ctx.k;
  h["t"] = ctx.t;
  h["w"] = w ? Json(*w) : Json(nullptr);
  h["w_prime"] = w_prime ? Json(*w_prime) : Json(nullptr);
  h["mode"] = mode;
  return h;
}

inline Json iteration_entry(std::size_t i, std::vector<std::string> z_terms,
                            std::uint64_t q, Json carry, bool ok) {
  Json e;
  e["i"] = i;
  e["z_terms"] = std::move(z_terms);
  e["q_hat"] = to_hex(Natural(q));
  e["carry"] = std::move(carry);
  e["assertions_passed"] = ok;
  return e;
}

}  // namespace detail

inline Json make_trace_classical(const MontgomeryContext& ctx, const Natural& a,
                                 const Natural& b) {
  MmmResult res = classical_mmm(ctx, a, b);
  // Re-run the recurrence to expose the per-iteration accumulator.
  DigitVector ad = to_digits(a, ctx);
  Json doc;
  doc["header"] = detail::trace_header(ctx, "classical", std::nullopt,
                                       std::nullopt);
  Json iters = Json::array();
  Natural z = 0;
  for (std::size_t i = 0; i < ctx.num_digits; ++i) {
    if (ad.digits[i])
      mpz_addmul_ui(z.get_mpz_t(), b.get_mpz_t(), ad.digits[i]);
    if (res.quotients.digits[i])
      mpz_addmul_ui(z.get_mpz_t(), ctx.modulus.get_mpz_t(),
                    res.quotients.digits[i]);
    z = shift_right(z, ctx.k);
    iters.push_back(detail::iteration_entry(i, {to_hex(z)},
                                            res.quotients.digits[i],
                                            Json(nullptr), true));
  }
  doc["iterations"] = std::move(iters);
  doc["summary"] = {{"output", to_hex(res.output)},
                    {"pre_reduction", to_hex(res.pre_reduction)},
                    {"cycles", ctx.num_digits},
                    {"levels", nullptr}};
  return doc;
}

inline Json make_trace_drmmm(const MontgomeryContext& ctx, const Natural& a,
                             const Natural& b) {
  DrmmmRun run = drmmm_mul(ctx, a, b);
  Json doc;
  doc["header"] =
      detail::trace_header(ctx, "drmmm", std::nullopt, std::nullopt);
  Json iters = Json::array();
  for (const DrmmmStep& s : run.trace.steps)
    iters.push_back(detail::iteration_entry(s.i, {to_hex(s.z)}, s.q_consumed,
                                            Json(nullptr), true));
  doc["iterations"] = std::move(iters);
  doc["summary"] = {{"output", to_hex(run.result.output)},
                    {"pre_reduction", to_hex(run.result.pre_reduction)},
                    {"cycles", ctx.num_digits + ctx.t},
                    {"levels", nullptr}};
  return doc;
}

inline Json make_trace_hw(const MontgomeryContext& ctx, const Natural& a,
                          const Natural& b, const hw::HwConfig& config = {}) {
  hw::HwRun run = hw::hw_run(ctx, a, b, config);
  Json doc;
  doc["header"] = detail::trace_header(ctx, "hw", config.w, config.w_prime);
  Json iters = Json::array();
  for (const hw::HwStepRecord& s : run.trace) {
    Json carry = {{"c_l", s.carry_low ? 1 : 0}, {"c_m", s.carry_high ? 1 : 0}};
    iters.push_back(detail::iteration_entry(
        s.i, {to_hex(s.z0), to_hex(s.z1), to_hex(s.z2)}, s.q_consumed,
        std::move(carry), s.shift_zero));
  }
  doc["iterations"] = std::move(iters);
  doc["summary"] = {{"output", to_hex(run.result.output)},
                    {"pre_reduction", to_hex(run.result.pre_reduction)},
                    {"cycles", run.cycles.total_cycles},
                    {"levels", run.cycles.iteration_levels}};
  return doc;
}

/// One line of a vector file: operands, parameters, optional expected output
/// (the Montgomery product A*B*2^(-k*d) mod M).
struct VectorRecord {
  Natural m, a, b;
  unsigned k = 0;
  unsigned t = 0;
  std::optional<Natural> expected;
};

/// Vector files are JSON lines: one object per line, keys M, A, B (lowercase
/// hex strings), k, t (integers) and optionally expected. Blank lines are
/// skipped.
inline std::vector<VectorRecord> load_vector_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open vector file " + path);
  std::vector<VectorRecord> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    Json j = Json::parse(line, nullptr, false);
    if (j.is_discarded() || !j.is_object())
      throw ParseError("vector file line " + std::to_string(lineno) +
                       " is not a JSON object");
    auto hex_field = [&](const char* key) -> Natural {
      if (!j.contains(key) || !j[key].is_string())
        throw ParseError("vector file line " + std::to_string(lineno) +
                         ": missing hex field " + key);
      std::string s = j[key].get<std::string>();
      if (!is_canonical_hex(s))
        throw ParseError("vector file line " + std::to_string(lineno) +
                         ": field " + key + " is not canonical lowercase hex");
      return parse_hex(s);
    };
    auto int_field = [&](const char* key) -> unsigned {
      if (!j.contains(key) || !j[key].is_number_unsigned())
        throw ParseError("vector file line " + std::to_string(lineno) +
                         ": missing integer field " + key);
      return j[key].get<unsigned>();
    };
    VectorRecord rec;
    rec.m = hex_field("M");
    rec.a = hex_field("A");
    rec.b = hex_field("B");
    rec.k = int_field("k");
    rec.t = int_field("t");
    if (j.contains("expected")) rec.expected = hex_field("expected");
    out.push_back(std::move(rec));
  }
  return out;
}

inline void save_vector_file(const std::string& path,
                             const std::vector<VectorRecord>& records) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write vector file " + path);
  for (const VectorRecord& rec : records) {
    Json j;
    j["M"] = to_hex(rec.m);
    j["A"] = to_hex(rec.a);
    j["B"] = to_hex(rec.b);
    j["k"] = rec.k;
    j["t"] = rec.t;
    if (rec.expected) j["expected"] = to_hex(*rec.expected);
    out << j.dump() << '\n';
  }
  if (!out) throw IoError("write to vector file " + path + " failed");
}

}  // namespace drmmm
