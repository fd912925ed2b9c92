// Command-line front end: mul, verify, tables, analyze, trace.
//
// Exit codes: 0 success (or all checks passed), 1 verification failures,
// 2 usage/parameter/runtime errors. Errors print as `error:<code>: <text>`
// on stderr. All output is deterministic for a fixed --seed.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "drmmm/drmmm.hpp"

namespace {

using namespace drmmm;

struct GlobalOpts {
  std::uint64_t seed = 1;
  bool json = false;
};

std::vector<std::size_t> parse_list(const std::string& text,
                                    const char* what) {
  std::vector<std::size_t> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t pos = 0;
      unsigned long v = std::stoul(item, &pos);
      if (pos != item.size() || v == 0) throw std::invalid_argument(item);
      out.push_back(v);
    } catch (const std::exception&) {
      throw ParseError(std::string(what) + " list has a bad entry '" + item +
                       "'");
    }
  }
  if (out.empty()) throw ParseError(std::string(what) + " list is empty");
  return out;
}

// Operands use the same canonical form as vector files: lowercase hex, no
// leading zeros.
Natural parse_operand(const std::string& text, const char* what) {
  if (!is_canonical_hex(text))
    throw ParseError(std::string(what) + " must be canonical lowercase hex: '" +
                     text + "'");
  return parse_hex(text);
}

Rational parse_rational(const std::string& text, const char* what) {
  Rational r;
  if (r.set_str(text, 10) != 0)
    throw ParseError(std::string(what) + " is not a rational: '" + text + "'");
  r.canonicalize();
  if (r < 0) throw ParameterError(std::string(what) + " must be >= 0");
  return r;
}

// ---------------------------------------------------------------- mul

struct MulOpts {
  std::string m, a, b;
  unsigned k = 0, t = 1;
  std::string mode = "drmmm";
  bool corrected = false;
  unsigned w = 6, w_prime = 6;
};

Natural run_engine(const std::string& mode, const MontgomeryContext& ctx,
                   const Natural& a, const Natural& b,
                   const hw::HwConfig& config) {
  if (mode == "classical") return classical_mmm(ctx, a, b).output;
  if (mode == "drmmm") return drmmm_mul(ctx, a, b).result.output;
  if (mode == "hw") return hw::hw_run(ctx, a, b, config).result.output;
  throw ParameterError("unknown mode '" + mode + "'");
}

int cmd_mul(const MulOpts& o, const GlobalOpts& g) {
  MontgomeryContext ctx = make_context(parse_operand(o.m, "-M"), o.k, o.t);
  Natural a = parse_operand(o.a, "-A"), b = parse_operand(o.b, "-B");
  hw::HwConfig config;
  config.w = o.w;
  config.w_prime = o.w_prime;

  Natural mont = run_engine(o.mode, ctx, a, b, config);
  Json out;
  out["mode"] = o.mode;
  out["montgomery"] = to_hex(mont);
  if (o.corrected) {
    Natural r_mod = pow2(ctx.k * ctx.num_digits) % ctx.modulus;
    Natural r2 = modmul_oracle(r_mod, r_mod, ctx.modulus);
    out["corrected"] = to_hex(run_engine(o.mode, ctx, mont, r2, config));
  }
  if (g.json) {
    std::cout << out.dump() << "\n";
  } else {
    std::cout << out["montgomery"].get<std::string>() << "\n";
    if (o.corrected) std::cout << out["corrected"].get<std::string>() << "\n";
  }
  return 0;
}

// ---------------------------------------------------------------- verify

struct VerifyOpts {
  std::size_t trials = 100;
  std::string widths = "8,16,64,256";
  std::string kset = "2,4,8,16";
  std::string tset = "1,2,4";
  std::string vectors;      // when set, run file vectors instead of random
  std::string fault = "none";  // none | mprime | carry
};

struct VerifyStats {
  std::size_t pass = 0, fail = 0;
  std::vector<std::string> failures;

  void ok() { ++pass; }
  void bad(const std::string& msg) {
    ++fail;
    if (failures.size() < 20) failures.push_back(msg);
  }
};

void verify_one(const MontgomeryContext& ctx, const Natural& a,
                const Natural& b, const hw::HwConfig& config,
                unsigned k1, unsigned k2) {
  // Independent route: plain modular product times the inverse of R.
  Natural r_to_d = pow2(ctx.k * ctx.num_digits) % ctx.modulus;
  Natural r_inv;
  if (mpz_invert(r_inv.get_mpz_t(), r_to_d.get_mpz_t(),
                 ctx.modulus.get_mpz_t()) == 0)
    throw InternalError("R not invertible (modulus not odd?)");
  Natural direct = modmul_oracle(modmul_oracle(a, b, ctx.modulus), r_inv,
                                 ctx.modulus);

  MmmResult cls = classical_mmm(ctx, a, b);
  if (cls.output != direct) throw InternalError("classical != direct oracle");

  DrmmmRun dr = drmmm_mul(ctx, a, b);
  if (dr.result.output != cls.output || dr.result.pre_reduction != cls.pre_reduction)
    throw InternalError("drmmm != classical");
  if (dr.result.quotients.digits != cls.quotients.digits)
    throw InternalError("drmmm quotient stream != classical");

  hw::HwRun hr = hw::hw_run(ctx, a, b, config);
  if (hr.result.output != cls.output ||
      hr.result.pre_reduction != cls.pre_reduction)
    throw InternalError("hw != classical");

  if (!check_quotient_consistency(ctx.modulus, a, b, k1, k2))
    throw InternalError("quotient folds disagree across radices");
}

int cmd_verify_vectors(const VerifyOpts& o, const GlobalOpts& g) {
  std::vector<VectorRecord> records = load_vector_file(o.vectors);
  VerifyStats st;
  for (std::size_t n = 0; n < records.size(); ++n) {
    const VectorRecord& rec = records[n];
    try {
      MontgomeryContext ctx = make_context(rec.m, rec.k, rec.t);
      verify_one(ctx, rec.a, rec.b, {}, 2, 4);
      if (rec.expected) {
        Natural got = classical_mmm(ctx, rec.a, rec.b).output;
        if (got != *rec.expected)
          throw InternalError("output " + to_hex(got) + " != expected " +
                              to_hex(*rec.expected));
      }
      st.ok();
    } catch (const Error& e) {
      st.bad("vector " + std::to_string(n) + ": [" + e.code() + "] " +
             e.what());
    }
  }
  if (g.json) {
    Json out = {{"vectors", records.size()},
                {"pass", st.pass},
                {"fail", st.fail},
                {"failures", st.failures}};
    std::cout << out.dump() << "\n";
  } else {
    for (const std::string& f : st.failures) std::cout << "FAIL " << f << "\n";
    std::cout << "pass " << st.pass << " fail " << st.fail << "\n";
  }
  return st.fail ? 1 : 0;
}

int cmd_verify(const VerifyOpts& o, const GlobalOpts& g) {
  if (!o.vectors.empty()) return cmd_verify_vectors(o, g);
  if (o.fault != "none" && o.fault != "mprime" && o.fault != "carry")
    throw ParameterError("--inject-fault must be none, mprime or carry");

  auto widths = parse_list(o.widths, "width");
  auto kset = parse_list(o.kset, "k");
  auto tset = parse_list(o.tset, "t");
  for (std::size_t w : widths)
    if (w < 2) throw ParameterError("widths must be >= 2 bits");

  RandomSource rng(g.seed);
  static constexpr unsigned radix_pool[4] = {2, 4, 8, 16};
  VerifyStats st;

  for (std::size_t n = 0; n < o.trials; ++n) {
    const std::size_t width = widths[n % widths.size()];
    const unsigned k = unsigned(kset[(n / widths.size()) % kset.size()]);
    const unsigned t =
        unsigned(tset[(n / (widths.size() * kset.size())) % tset.size()]);

    const Natural m = rng.odd_with_bit_length(width);
    const Natural a = rng.below(m);
    const Natural b = rng.below(m);
    unsigned k1 = radix_pool[rng.next_u64() % 4];
    unsigned k2 = k1;
    while (k2 == k1) k2 = radix_pool[rng.next_u64() % 4];

    try {
      MontgomeryContext ctx = make_context(m, k, t);
      hw::HwConfig config;
      if (o.fault == "mprime") {
        // A plausible-looking but wrong inverse: still odd, off by two.
        ctx.m_prime_wide =
            low_bits(ctx.m_prime_wide + 2, ctx.window_product_bits());
      } else if (o.fault == "carry") {
        config.fault_flip_carry = true;
      }
      verify_one(ctx, a, b, config, k1, k2);
      st.ok();
    } catch (const Error& e) {
      std::ostringstream msg;
      msg << "trial " << n << " (width " << width << ", k " << k << ", t " << t
          << "): [" << e.code() << "] " << e.what();
      st.bad(msg.str());
    }
  }

  if (g.json) {
    Json out = {{"trials", o.trials},
                {"pass", st.pass},
                {"fail", st.fail},
                {"failures", st.failures}};
    std::cout << out.dump() << "\n";
  } else {
    for (const std::string& f : st.failures) std::cout << "FAIL " << f << "\n";
    std::cout << "pass " << st.pass << " fail " << st.fail << "\n";
  }
  return st.fail ? 1 : 0;
}

// ---------------------------------------------------------------- tables

struct TablesOpts {
  std::string m;
  unsigned w = 6;
  std::string kind = "im";
  std::string format = "hex";
  unsigned k = 0, t = 1;
  bool carry_inits = false;
};

int cmd_tables(const TablesOpts& o, const GlobalOpts& g) {
  if (o.carry_inits) {
    hw::CarryLutInits inits = hw::carry_lut_inits();
    if (g.json) {
      Json out = {{"c_l", hw::format_init_word(Natural(inits.init_low), 6)},
                  {"c_m", hw::format_init_word(Natural(inits.init_high), 6)}};
      std::cout << out.dump() << "\n";
    } else {
      std::cout << hw::format_init_word(Natural(inits.init_low), 6) << "\n"
                << hw::format_init_word(Natural(inits.init_high), 6) << "\n";
    }
    return 0;
  }

  if (o.m.empty()) throw ParameterError("tables needs -M (or --carry-inits)");
  if (o.format != "hex" && o.format != "init")
    throw ParameterError("--format must be hex or init");
  Natural m = parse_operand(o.m, "-M");

  hw::EncodingTable table;
  if (o.kind == "im") {
    table = hw::build_multiple_table(m, o.w, hw::TableKind::im);
  } else if (o.kind == "imprime") {
    if (o.k == 0) throw ParameterError("kind imprime needs -k and -t");
    table = hw::build_encoding_table(make_context(m, o.k, o.t), o.w,
                                     hw::TableKind::im_prime);
  } else if (o.kind == "merged") {
    // Merged tables only exist for k = 4, so -k may be omitted.
    unsigned k = o.k ? o.k : 4;
    table = hw::build_encoding_table(make_context(m, k, o.t), o.w,
                                     hw::TableKind::merged);
  } else {
    throw ParameterError("--kind must be im, imprime or merged");
  }

  std::vector<std::string> lines;
  if (o.format == "hex") {
    for (const Natural& e : table.entries) lines.push_back(to_hex(e));
  } else {
    hw::LutInitMatrix matrix = hw::lut_init_matrix(table);
    for (const Natural& row : matrix.rows)
      lines.push_back(hw::format_init_word(row, table.window_bits));
  }
  if (g.json) {
    Json out = {{"kind", o.kind}, {"w", o.w}, {"format", o.format},
                {"lines", lines}};
    std::cout << out.dump() << "\n";
  } else {
    for (const std::string& l : lines) std::cout << l << "\n";
  }
  return 0;
}

// ---------------------------------------------------------------- analyze

struct AnalyzeOpts {
  std::size_t nm = 0;
  unsigned k = 0, t = 0;
  std::string tm = "1", ta = "1", tred = "0";
  unsigned w = 6, w_prime = 6;
  int epilogue = -1;  // <0: fitted default
};

int cmd_analyze(const AnalyzeOpts& o, const GlobalOpts& g) {
  if (o.nm < 2) throw ParameterError("--nm must be >= 2");
  // A synthetic full-width modulus: level/cycle accounting only depends on
  // the bit length, never on the value.
  Natural m = pow2(o.nm) - 1;
  MontgomeryContext ctx = make_context(m, o.k, o.t);

  hw::HwConfig config;
  config.w = o.w;
  config.w_prime = o.w_prime;
  if (o.epilogue >= 0) config.epilogue_cycles = unsigned(o.epilogue);
  hw::CycleReport rep = hw::level_budget_report(ctx, config);

  LatencyParams lat;
  lat.t_mul = parse_rational(o.tm, "--tm");
  lat.t_add = parse_rational(o.ta, "--ta");
  lat.t_reduce = parse_rational(o.tred, "--tred");

  const std::size_t d = ctx.num_digits;
  Rational serial = latency_serial(lat, d);
  Rational proposed = latency_proposed(lat, d, ctx.t);
  Rational gain = latency_gain(lat, d, long(ctx.t));
  Rational bound = dependence_bound(ctx.modulus_bits, ctx.k);

  // Level counts feed the t_max estimate, in units of one LUT level.
  const std::size_t kt = ctx.window_product_bits();
  const std::size_t n0 = 3 * ((kt + o.w_prime - 1) / o.w_prime);
  const unsigned qpath_levels = 2 + hw::compress_level_count(n0, 2);
  LatencyParams levels;
  levels.t_update = long(rep.iteration_levels);
  levels.t_qpath = long(qpath_levels);
  unsigned t_max = estimate_t_max(levels);

  if (g.json) {
    Json out;
    out["modulus_bits"] = ctx.modulus_bits;
    out["k"] = ctx.k;
    out["t"] = ctx.t;
    out["d"] = d;
    out["iterations"] = rep.iterations;
    out["epilogue_cycles"] = rep.epilogue_cycles;
    out["epilogue_fitted"] = rep.epilogue_fitted;
    out["total_cycles"] = rep.total_cycles;
    out["serial_latency"] = serial.get_str();
    out["proposed_latency"] = proposed.get_str();
    out["latency_gain"] = gain.get_str();
    out["dependence_bound"] = bound.get_str();
    out["tree_inputs"] = rep.tree_inputs;
    out["iteration_levels"] = rep.iteration_levels;
    out["stage_levels"] = rep.stage_levels;
    out["stages_within_budget"] = rep.stages_within_budget;
    out["estimated_t_max"] = t_max;
    out["qpath_levels"] = qpath_levels;
    out["notes"] = rep.notes;
    std::cout << out.dump() << "\n";
    return 0;
  }

  std::cout << "modulus bits " << ctx.modulus_bits << "\n"
            << "k " << ctx.k << "\n"
            << "t " << ctx.t << "\n"
            << "d " << d << "\n"
            << "iterations " << rep.iterations << "\n"
            << "epilogue cycles " << rep.epilogue_cycles
            << (rep.epilogue_fitted ? " (fitted)" : "") << "\n"
            << "total cycles " << rep.total_cycles << "\n"
            << "serial latency " << serial.get_str() << "\n"
            << "proposed latency " << proposed.get_str() << "\n"
            << "latency gain " << gain.get_str() << "\n"
            << "dependence bound " << bound.get_str() << "\n"
            << "update path levels " << rep.iteration_levels << " ("
            << rep.tree_inputs << " tree inputs, " << rep.tree_levels
            << " tree levels + " << rep.pp_gen_levels << " pp-gen)\n";
  std::cout << "stage levels";
  for (unsigned s : rep.stage_levels) std::cout << " " << s;
  std::cout << (rep.stages_within_budget ? " (within budget)"
                                         : " (OVER budget)")
            << "\n"
            << "estimated t_max " << t_max << " (quotient path " << qpath_levels
            << " levels, update " << rep.iteration_levels << " levels)\n";
  for (const std::string& note : rep.notes)
    std::cout << "note: " << note << "\n";
  return 0;
}

// ---------------------------------------------------------------- trace

struct TraceOpts {
  std::string m, a, b;
  unsigned k = 0, t = 1;
  std::string mode = "hw";
  std::string out = "-";
  unsigned w = 6, w_prime = 6;
};

int cmd_trace(const TraceOpts& o, const GlobalOpts&) {
  MontgomeryContext ctx = make_context(parse_operand(o.m, "-M"), o.k, o.t);
  Natural a = parse_operand(o.a, "-A"), b = parse_operand(o.b, "-B");

  Json doc;
  if (o.mode == "classical") {
    doc = make_trace_classical(ctx, a, b);
  } else if (o.mode == "drmmm") {
    doc = make_trace_drmmm(ctx, a, b);
  } else if (o.mode == "hw") {
    hw::HwConfig config;
    config.w = o.w;
    config.w_prime = o.w_prime;
    doc = make_trace_hw(ctx, a, b, config);
  } else {
    throw ParameterError("unknown mode '" + o.mode + "'");
  }

  if (o.out == "-") {
    std::cout << doc.dump(2) << "\n";
  } else {
    std::ofstream f(o.out);
    if (!f) throw IoError("cannot open trace output " + o.out);
    f << doc.dump(2) << "\n";
    if (!f) throw IoError("write to " + o.out + " failed");
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"different-radix Montgomery modular multiplication tools"};
  app.require_subcommand(1);

  GlobalOpts g;
  app.add_option("--seed", g.seed, "RNG seed for randomized commands")
      ->capture_default_str();
  app.add_flag("--json", g.json, "machine-readable output");

  MulOpts mul;
  CLI::App* c_mul = app.add_subcommand("mul", "one modular multiplication");
  c_mul->add_option("-M", mul.m, "modulus, hex")->required();
  c_mul->add_option("-A", mul.a, "left operand, hex")->required();
  c_mul->add_option("-B", mul.b, "right operand, hex")->required();
  c_mul->add_option("-k", mul.k, "radix exponent")->required();
  c_mul->add_option("-t", mul.t, "pipeline depth")->capture_default_str();
  c_mul->add_option("--mode", mul.mode, "classical | drmmm | hw")
      ->capture_default_str();
  c_mul->add_flag("--corrected", mul.corrected,
                  "also print the corrected product A*B mod M");
  c_mul->add_option("--w", mul.w, "iM table window width")
      ->capture_default_str();
  c_mul->add_option("--w-prime", mul.w_prime, "iM' table window width")
      ->capture_default_str();

  VerifyOpts ver;
  CLI::App* c_ver = app.add_subcommand("verify", "differential verification");
  c_ver->add_option("--trials", ver.trials, "random trials to run")
      ->capture_default_str();
  c_ver->add_option("--widths", ver.widths, "modulus bit widths, comma list")
      ->capture_default_str();
  c_ver->add_option("--kset", ver.kset, "radix exponents, comma list")
      ->capture_default_str();
  c_ver->add_option("--tset", ver.tset, "pipeline depths, comma list")
      ->capture_default_str();
  c_ver->add_option("--vectors", ver.vectors,
                    "JSON-lines vector file (replaces random trials)");
  c_ver->add_option("--inject-fault", ver.fault,
                    "none | mprime | carry; a faulted build must fail")
      ->capture_default_str();

  TablesOpts tab;
  CLI::App* c_tab = app.add_subcommand("tables", "encoding tables and INITs");
  c_tab->add_option("-M", tab.m, "modulus, hex");
  c_tab->add_option("-w", tab.w, "window width (4..6)")->capture_default_str();
  c_tab->add_option("--kind", tab.kind, "im | imprime | merged")
      ->capture_default_str();
  c_tab->add_option("--format", tab.format, "hex | init")
      ->capture_default_str();
  c_tab->add_option("-k", tab.k, "radix exponent (imprime/merged)");
  c_tab->add_option("-t", tab.t, "pipeline depth (imprime)")
      ->capture_default_str();
  c_tab->add_flag("--carry-inits", tab.carry_inits,
                  "print the two carry LUT INIT words");

  AnalyzeOpts ana;
  CLI::App* c_ana = app.add_subcommand("analyze", "latency and cycle model");
  c_ana->add_option("--nm", ana.nm, "modulus bit width")->required();
  c_ana->add_option("-k", ana.k, "radix exponent")->required();
  c_ana->add_option("-t", ana.t, "pipeline depth")->required();
  c_ana->add_option("--tm", ana.tm, "multiplier latency, rational")
      ->capture_default_str();
  c_ana->add_option("--ta", ana.ta, "adder latency, rational")
      ->capture_default_str();
  c_ana->add_option("--tred", ana.tred, "reduction latency, rational")
      ->capture_default_str();
  c_ana->add_option("--w", ana.w, "iM table window width")
      ->capture_default_str();
  c_ana->add_option("--w-prime", ana.w_prime, "iM' table window width")
      ->capture_default_str();
  c_ana->add_option("--epilogue", ana.epilogue,
                    "override the fitted epilogue cycle count");

  TraceOpts tra;
  CLI::App* c_tra = app.add_subcommand("trace", "per-iteration JSON trace");
  c_tra->add_option("-M", tra.m, "modulus, hex")->required();
  c_tra->add_option("-A", tra.a, "left operand, hex")->required();
  c_tra->add_option("-B", tra.b, "right operand, hex")->required();
  c_tra->add_option("-k", tra.k, "radix exponent")->required();
  c_tra->add_option("-t", tra.t, "pipeline depth")->capture_default_str();
  c_tra->add_option("--mode", tra.mode, "classical | drmmm | hw")
      ->capture_default_str();
  c_tra->add_option("--out", tra.out, "output path, - for stdout")
      ->capture_default_str();
  c_tra->add_option("--w", tra.w, "iM table window width")
      ->capture_default_str();
  c_tra->add_option("--w-prime", tra.w_prime, "iM' table window width")
      ->capture_default_str();

  int rc = 0;
  c_mul->callback([&] { rc = cmd_mul(mul, g); });
  c_ver->callback([&] { rc = cmd_verify(ver, g); });
  c_tab->callback([&] { rc = cmd_tables(tab, g); });
  c_ana->callback([&] { rc = cmd_analyze(ana, g); });
  c_tra->callback([&] { rc = cmd_trace(tra, g); });

  // Let --seed/--json appear after the subcommand name too.
  for (CLI::App* sub : {c_mul, c_ver, c_tab, c_ana, c_tra})
    sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;  // help exits clean, usage errors exit 2
  } catch (const Error& e) {
    std::cerr << "error:" << e.code() << ": " << e.what() << "\n";
    return 2;
  }
  return rc;
}
