#pragma once

#include <cstdint>

#include "drmmm/context.hpp"

namespace drmmm {

/// Abstract timing parameters, all exact rationals:
///   t_mul    - one digit-by-vector multiplier pass
///   t_add    - one wide addition
///   t_reduce - final reduction stage
///   t_update - per-cycle latency of the accumulator update path
///   t_qpath  - total latency of the quotient-digit computation
struct LatencyParams {
  Rational t_mul = 1;
  Rational t_add = 1;
  Rational t_reduce = 0;
  Rational t_update = 0;
  Rational t_qpath = 0;
};

namespace detail {

inline Rational rat(std::size_t n) { return Rational(static_cast<unsigned long>(n)); }

inline std::size_t ceil_div(std::size_t a, std::size_t b) {
  return (a + b - 1) / b;
}

}  // namespace detail

/// Serial schedule: every iteration performs two dependent multiplies and the
/// update, so the critical path per iteration is 3*t_mul + 2*t_add.
inline Rational latency_serial(const LatencyParams& p, std::size_t d) {
  Rational per_iter = 3 * p.t_mul + 2 * p.t_add;
  return detail::rat(d) * per_iter + p.t_reduce;
}

/// Pipelined schedule: the quotient path is hidden, each of the d + t + 1
/// issue slots costs one multiplier pass plus two additions.
inline Rational latency_proposed(const LatencyParams& p, std::size_t d,
                                 unsigned t) {
  Rational per_iter = p.t_mul + 2 * p.t_add;
  return detail::rat(d + t + 1) * per_iter + p.t_reduce;
}

/// latency_serial - latency_proposed, in closed form:
///   2*d*t_mul - (t + 1)*(t_mul + 2*t_add)
/// `t` is signed so the t = -1 degeneracy (gain of the full 2*d*t_mul) is
/// expressible.
inline Rational latency_gain(const LatencyParams& p, std::size_t d, long t) {
  return 2 * detail::rat(d) * p.t_mul -
         Rational(t + 1) * (p.t_mul + 2 * p.t_add);
}

/// Largest useful pipeline depth: the smallest t with t_qpath <= (t-1)*t_update,
/// i.e. 1 + ceil(t_qpath / t_update).
inline unsigned estimate_t_max(const LatencyParams& p) {
  if (p.t_update <= 0)
    throw ParameterError("t_update must be positive");
  if (p.t_qpath < 0) throw ParameterError("t_qpath must be non-negative");
  Rational q = p.t_qpath / p.t_update;
  q.canonicalize();
  Natural steps;
  mpz_cdiv_q(steps.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
  return 1 + static_cast<unsigned>(steps.get_ui());
}

/// Fraction of iteration i's work that must wait for iteration i-1. In the
/// square, same-width case this collapses to i / (i + 1).
struct DependenceDegree {
  std::size_t i = 0;
  Rational value;
};

inline DependenceDegree dependence_degree(std::size_t i,
                                          const MontgomeryContext& ctx) {
  if (i >= ctx.num_digits)
    throw ParameterError("iteration index out of range");
  DependenceDegree d;
  d.i = i;
  d.value = i == 0 ? Rational(0)
                   : detail::rat(i) / detail::rat(i + 1);
  return d;
}

/// General form for mixed operand widths:
///   (i*k + bits_m) / ((i+1)*k + bits_b), and 0 at i = 0.
inline Rational dependence_degree_general(std::size_t i, unsigned k,
                                          std::size_t bits_b,
                                          std::size_t bits_m) {
  if (k == 0) throw ParameterError("k must be positive");
  if (i == 0) return 0;
  return detail::rat(i * k + bits_m) / detail::rat((i + 1) * k + bits_b);
}

/// Upper bound over all iterations: 1 - 1/ceil(bits_m / k). Shrinking k (more
/// iterations) pushes the bound toward 1.
inline Rational dependence_bound(std::size_t bits_m, unsigned k) {
  if (k == 0 || bits_m == 0)
    throw ParameterError("bits and k must be positive");
  std::size_t d = detail::ceil_div(bits_m, k);
  return 1 - Rational(1) / detail::rat(d);
}

}  // namespace drmmm
