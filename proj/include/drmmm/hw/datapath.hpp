#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "drmmm/classical.hpp"
#include "drmmm/hw/carry.hpp"
#include "drmmm/hw/compressor.hpp"
#include "drmmm/hw/encoding.hpp"

namespace drmmm::hw {

// Bit-accurate model of the pipelined datapath. The accumulator is held as
// three carry-save terms; one iteration compresses {residue, operand partial
// products, quotient-multiple partial products} back to three terms, recovers
// the two carry bits the k-bit right shift would otherwise drop, and shifts.
// The quotient digit itself is computed over t cycles in a side pipeline that
// works on a snapshot of the low k*t window, so by the time a digit is
// needed it is ready without lengthening the update path.

/// What a pipeline stage does to the in-flight quotient computation. Each
/// item costs one logic level in the stage budget.
enum class StageWork {
  encode_quotient,  // window-slice the three low terms through the iM' table
  compress,         // one 6-to-3 counter level over the partial products
  sum_extract,      // final summation mod 2^(k*t), keep the top k window bits
  encode_multiple   // window-slice the digit through the iM table
};

struct StageSchedule {
  std::vector<std::vector<StageWork>> stages;  // stages.size() == t
};

struct HwConfig {
  unsigned w = 6;        // iM table window width
  unsigned w_prime = 6;  // iM' table window width
  unsigned guard_bits = 3;
  std::optional<unsigned> epilogue_cycles;  // unset -> fitted default of 6
  std::optional<StageSchedule> schedule;    // unset -> default_schedule()
  bool fault_flip_carry = false;  // verification hook: corrupts one C_m case
};

inline constexpr unsigned default_epilogue_cycles = 6;

/// Default work split: the quotient-path work list (one encode level, the
/// counter levels down to two terms, one summation level) is cut into even
/// chunks across stages 1..t-1, and stage t holds the multiple encode.
inline StageSchedule default_schedule(const MontgomeryContext& ctx,
                                      unsigned w_prime) {
  const std::size_t kt = ctx.window_product_bits();
  const std::size_t n0 = 3 * ((kt + w_prime - 1) / w_prime);

  std::vector<StageWork> work;
  work.push_back(StageWork::encode_quotient);
  for (unsigned i = 0; i < compress_level_count(n0, 2); ++i)
    work.push_back(StageWork::compress);
  work.push_back(StageWork::sum_extract);

  StageSchedule s;
  s.stages.assign(ctx.t, {});
  if (ctx.t == 1) {
    s.stages[0] = std::move(work);
    s.stages[0].push_back(StageWork::encode_multiple);
    return s;
  }
  const std::size_t chunk = (work.size() + ctx.t - 2) / (ctx.t - 1);
  std::size_t pos = 0;
  for (unsigned st = 0; st + 1 < ctx.t && pos < work.size(); ++st) {
    const std::size_t take = std::min(chunk, work.size() - pos);
    s.stages[st].assign(work.begin() + pos, work.begin() + pos + take);
    pos += take;
  }
  s.stages[ctx.t - 1] = {StageWork::encode_multiple};
  return s;
}

inline void validate_schedule(const StageSchedule& s, unsigned t) {
  if (s.stages.size() != t)
    throw ParameterError("schedule must have exactly t stages");
  std::vector<StageWork> flat;
  for (const auto& stage : s.stages)
    flat.insert(flat.end(), stage.begin(), stage.end());
  // Required shape: encode, compress*, sum_extract, encode_multiple.
  bool ok = flat.size() >= 3 && flat.front() == StageWork::encode_quotient &&
            flat.back() == StageWork::encode_multiple &&
            flat[flat.size() - 2] == StageWork::sum_extract;
  for (std::size_t i = 1; ok && i + 2 < flat.size(); ++i)
    ok = flat[i] == StageWork::compress;
  if (!ok)
    throw ParameterError(
        "schedule must run encode, compressions, extraction, multiple encode "
        "in that order");
  if (s.stages.back().empty() ||
      s.stages.back().back() != StageWork::encode_multiple)
    throw ParameterError("the multiple encode must sit in stage t");
}

/// Triple-term redundant accumulator. value() is the arithmetic meaning.
struct RedundantResidue {
  Natural z0, z1, z2;
  std::size_t width_bits = 0;  // k*t + |M| + k + guard

  Natural value() const { return z0 + z1 + z2; }
};

namespace detail {

enum class SlotPhase { windows, encoded, digit, multiple };

}  // namespace detail

/// One in-flight quotient computation. `terms` changes meaning as the slot
/// moves down the pipeline; `launch_window_sum` is the low-window sum the
/// slot was launched with, kept so the emitted product can be audited.
struct PipelineSlot {
  detail::SlotPhase phase = detail::SlotPhase::windows;
  std::vector<Natural> terms;
  std::uint64_t digit = 0;
  Natural launch_window_sum;
};

struct QuotientPipeline {
  std::vector<PipelineSlot> slots;  // slots[s]: register bank after stage s+1
};

struct HwTables {
  EncodingTable im;
  EncodingTable im_prime;
};

inline HwTables build_hw_tables(const MontgomeryContext& ctx,
                                const HwConfig& config) {
  return {build_encoding_table(ctx, config.w, TableKind::im),
          build_encoding_table(ctx, config.w_prime, TableKind::im_prime)};
}

struct HwState {
  RedundantResidue residue;
  QuotientPipeline pipeline;
  std::size_t iteration = 0;
};

namespace detail {

inline PipelineSlot make_launch(const RedundantResidue& res,
                                const MontgomeryContext& ctx) {
  const std::size_t kt = ctx.window_product_bits();
  PipelineSlot s;
  s.phase = SlotPhase::windows;
  s.terms = {low_bits(res.z0, kt), low_bits(res.z1, kt), low_bits(res.z2, kt)};
  s.launch_window_sum = low_bits(s.terms[0] + s.terms[1] + s.terms[2], kt);
  return s;
}

inline PipelineSlot apply_stage(PipelineSlot slot,
                                const std::vector<StageWork>& work,
                                const MontgomeryContext& ctx,
                                const HwTables& tables) {
  const std::size_t kt = ctx.window_product_bits();
  const std::size_t cap = kt + 8;  // counter growth headroom over the window
  for (StageWork wk : work) {
    switch (wk) {
      case StageWork::encode_quotient: {
        if (slot.phase != SlotPhase::windows)
          throw InternalError("quotient encode applied twice");
        auto pps = encode_windows(slot.terms, kt, tables.im_prime);
        slot.terms.clear();
        slot.terms.reserve(pps.size());
        for (const PartialProduct& pp : pps)
          slot.terms.push_back(low_bits(pp.shifted(), kt));
        slot.phase = SlotPhase::encoded;
        break;
      }
      case StageWork::compress:
        if (slot.phase != SlotPhase::encoded)
          throw InternalError("compression outside the encoded phase");
        slot.terms = compress_one_level(slot.terms, cap);
        break;
      case StageWork::sum_extract: {
        if (slot.phase != SlotPhase::encoded)
          throw InternalError("digit extraction before the quotient encode");
        Natural full = 0;
        for (const Natural& term : slot.terms) full += term;
        full = low_bits(full, kt);
        slot.digit =
            shift_right(full, std::size_t(ctx.k) * (ctx.t - 1)).get_ui();
        slot.terms.clear();
        slot.phase = SlotPhase::digit;
        break;
      }
      case StageWork::encode_multiple: {
        if (slot.phase != SlotPhase::digit)
          throw InternalError("multiple encode before the digit is ready");
        auto pps = encode_windows({Natural(slot.digit)}, ctx.k, tables.im);
        slot.terms.clear();
        slot.terms.reserve(pps.size());
        for (const PartialProduct& pp : pps)
          slot.terms.push_back(pp.shifted());
        slot.phase = SlotPhase::multiple;
        break;
      }
    }
  }
  return slot;
}

}  // namespace detail

inline HwState hw_init(const MontgomeryContext& ctx,
                       const StageSchedule& schedule, const HwTables& tables,
                       const HwConfig& config) {
  HwState st;
  st.residue.z0 = st.residue.z1 = st.residue.z2 = 0;
  st.residue.width_bits = ctx.window_product_bits() + ctx.modulus_bits +
                          ctx.k + config.guard_bits;
  // Registers power up as if zero-valued computations had been flowing
  // through forever, which makes the first t emitted digits zero.
  st.pipeline.slots.resize(ctx.t);
  PipelineSlot cur = detail::make_launch(st.residue, ctx);
  for (unsigned s = 0; s < ctx.t; ++s) {
    cur = detail::apply_stage(cur, schedule.stages[s], ctx, tables);
    st.pipeline.slots[s] = cur;
  }
  return st;
}

struct HwStepRecord {
  std::size_t i = 0;
  Natural z0, z1, z2;  // residue terms after the step
  bool carry_low = false;
  bool carry_high = false;
  std::uint64_t q_consumed = 0;
  std::uint64_t a_digit = 0;
  bool shift_zero = false;  // low-k window of the compressed triple was zero
};

inline HwStepRecord hw_step(HwState& state, const MontgomeryContext& ctx,
                            const Natural& b, std::uint64_t a_digit,
                            const HwTables& tables,
                            const StageSchedule& schedule,
                            const HwConfig& config) {
  const std::size_t kt = ctx.window_product_bits();

  // 1. The quotient pipeline advances on last cycle's register contents;
  //    stage 1 additionally snapshots the current low windows.
  PipelineSlot launch = detail::make_launch(state.residue, ctx);
  std::vector<PipelineSlot> next(ctx.t);
  for (unsigned s = 0; s < ctx.t; ++s) {
    const PipelineSlot& in = s == 0 ? launch : state.pipeline.slots[s - 1];
    next[s] = detail::apply_stage(in, schedule.stages[s], ctx, tables);
  }

  const PipelineSlot& emitted = next[ctx.t - 1];
  if (emitted.phase != detail::SlotPhase::multiple)
    throw InternalError("pipeline emitted an unfinished slot");
  {
    // Audit the emitted bundle against the closed-form digit of the window
    // it was launched with.
    Natural expect = shift_right(
        low_bits(emitted.launch_window_sum * ctx.m_prime_wide, kt),
        std::size_t(ctx.k) * (ctx.t - 1));
    Natural qm = 0;
    for (const Natural& term : emitted.terms) qm += term;
    if (Natural(emitted.digit) != expect || qm != expect * ctx.modulus)
      throw InternalError("quotient pipeline diverged from its window");
  }

  // 2. Operand partial products for this iteration's digit.
  std::vector<Natural> all = gen_temp_pps(a_digit, b, ctx);
  all.insert(all.begin(), {state.residue.z0, state.residue.z1, state.residue.z2});
  all.insert(all.end(), emitted.terms.begin(), emitted.terms.end());

  // 3. Single-cycle update: everything back down to three terms.
  CompressResult comp =
      compress_terms(std::move(all), 3, state.residue.width_bits);
  while (comp.terms.size() < 3) comp.terms.emplace_back(0);

  // 4. Carry recovery over the low k bits, then the shift.
  const std::uint64_t l0 = ::drmmm::detail::low_word(comp.terms[0], ctx.k);
  const std::uint64_t l1 = ::drmmm::detail::low_word(comp.terms[1], ctx.k);
  const std::uint64_t l2 = ::drmmm::detail::low_word(comp.terms[2], ctx.k);
  const std::uint64_t mask =
      ctx.k >= 64 ? ~std::uint64_t(0) : (std::uint64_t(1) << ctx.k) - 1;
  const bool low_clear =
      (std::uint64_t((unsigned __int128)l0 + l1 + l2) & mask) == 0;
  if (!low_clear)
    throw ShiftValidityError("compressed triple has a nonzero low window",
                             state.iteration);

  CarryBits cb = carry_bits(l0, l1, l2, ctx.k);
  if (config.fault_flip_carry) {
    // Deliberately mis-handle one feasible case of the C_m table.
    auto bit = [](std::uint64_t v, unsigned p) { return (v >> p) & 1; };
    unsigned n_msb = unsigned(bit(l0, ctx.k - 1) + bit(l1, ctx.k - 1) +
                              bit(l2, ctx.k - 1));
    unsigned n_next = unsigned(bit(l0, ctx.k - 2) + bit(l1, ctx.k - 2) +
                               bit(l2, ctx.k - 2));
    if (n_msb == 2 && n_next == 0) cb.high = !cb.high;
  }

  state.residue.z0 = shift_right(comp.terms[0], ctx.k);
  state.residue.z1 = shift_right(comp.terms[1], ctx.k) + (cb.low ? 1 : 0);
  state.residue.z2 = shift_right(comp.terms[2], ctx.k) + (cb.high ? 1 : 0);
  for (const Natural* z : {&state.residue.z0, &state.residue.z1,
                           &state.residue.z2})
    if (bit_length(*z) > state.residue.width_bits)
      throw BoundError("residue term outgrew its register at iteration " +
                       std::to_string(state.iteration));

  state.pipeline.slots = std::move(next);

  HwStepRecord rec;
  rec.i = state.iteration;
  rec.z0 = state.residue.z0;
  rec.z1 = state.residue.z1;
  rec.z2 = state.residue.z2;
  rec.carry_low = cb.low;
  rec.carry_high = cb.high;
  rec.q_consumed = emitted.digit;
  rec.a_digit = a_digit;
  rec.shift_zero = low_clear;
  ++state.iteration;
  return rec;
}

/// Level accounting and the cycle count model. Levels are 6-input-LUT logic
/// levels; the per-iteration budget is the operand partial-product generation
/// level plus the update tree depth.
struct CycleReport {
  std::size_t iterations = 0;      // main-loop cycles, d + t
  unsigned epilogue_cycles = 0;    // final summation and reduction
  bool epilogue_fitted = false;    // true when the default constant is used
  std::size_t total_cycles = 0;

  unsigned pp_gen_levels = 1;
  unsigned carry_levels = 1;       // runs in parallel with the tree
  unsigned tree_inputs = 0;        // 3 residue + 2 carry + k operand + iM PPs
  unsigned tree_levels = 0;
  unsigned iteration_levels = 0;   // pp_gen + tree

  std::vector<unsigned> stage_levels;  // quotient pipeline, per stage
  bool stages_within_budget = true;
  std::vector<std::string> notes;
};

inline CycleReport level_budget_report(const MontgomeryContext& ctx,
                                       const HwConfig& config = {}) {
  StageSchedule schedule =
      config.schedule ? *config.schedule : default_schedule(ctx, config.w_prime);
  validate_schedule(schedule, ctx.t);

  CycleReport r;
  r.iterations = ctx.num_digits + ctx.t;
  r.epilogue_fitted = !config.epilogue_cycles.has_value();
  r.epilogue_cycles = config.epilogue_cycles.value_or(default_epilogue_cycles);
  r.total_cycles = r.iterations + r.epilogue_cycles;

  r.tree_inputs =
      unsigned(3 + 2 + ctx.k + (ctx.k + config.w - 1) / config.w);
  r.tree_levels = compress_level_count(r.tree_inputs, 3);
  r.iteration_levels = r.pp_gen_levels + r.tree_levels;

  for (const auto& stage : schedule.stages) {
    r.stage_levels.push_back(unsigned(stage.size()));
    if (stage.size() > r.iteration_levels) r.stages_within_budget = false;
  }

  if (r.epilogue_fitted)
    r.notes.push_back(
        "epilogue cycle count is a fitted constant, not derived from the "
        "adder structure");
  r.notes.push_back(
      "final summation and digit extraction are counted as one level "
      "(the carry chain is assumed to fit the cycle)");
  if (ctx.k == 16 && ctx.t == 4 && config.w_prime == 6)
    r.notes.push_back(
        "quotient encode feeds 3*ceil(k*t/w') = 33 compressor inputs; a "
        "34-input first level would leave one input unused");
  return r;
}

struct HwRun {
  MmmResult result;
  CycleReport cycles;
  std::vector<HwStepRecord> trace;
};

inline HwRun hw_run(const MontgomeryContext& ctx, const Natural& a,
                    const Natural& b, const HwConfig& config = {}) {
  if (a >= ctx.modulus || b >= ctx.modulus)
    throw ParameterError("operands must be below the modulus");

  StageSchedule schedule =
      config.schedule ? *config.schedule : default_schedule(ctx, config.w_prime);
  validate_schedule(schedule, ctx.t);
  HwTables tables = build_hw_tables(ctx, config);
  HwState st = hw_init(ctx, schedule, tables, config);

  const DigitVector ad = to_digits(a, ctx);
  const std::size_t rounds = ctx.num_digits + ctx.t;

  HwRun run;
  run.trace.reserve(rounds);
  for (std::size_t i = 0; i < rounds; ++i)
    run.trace.push_back(
        hw_step(st, ctx, b, ad.digits[i], tables, schedule, config));

  run.result.pre_reduction = st.residue.value();
  run.result.output = final_reduce(run.result.pre_reduction, ctx.modulus);
  run.result.quotients.k = ctx.k;
  for (std::size_t i = ctx.t; i < rounds; ++i)
    run.result.quotients.digits.push_back(run.trace[i].q_consumed);

  run.cycles = level_budget_report(ctx, config);
  return run;
}

}  // namespace drmmm::hw
