#pragma once

// Test-only helpers: subprocess capture and an independent result oracle.

#include <cstdio>
#include <string>
#include <sys/wait.h>

#include "drmmm/classical.hpp"

namespace testsupport {

struct CmdResult {
  int status = -1;
  std::string output;  // stdout and stderr interleaved
};

inline CmdResult run_cmd(const std::string& cmd) {
  CmdResult res;
  FILE* pipe = popen((cmd + " 2>&1").c_str(), "r");
  if (!pipe) return res;
  char buf[4096];
  std::size_t n;
  while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) res.output.append(buf, n);
  int rc = pclose(pipe);
  res.status = WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
  return res;
}

/// A*B*2^(-k*d) mod M through GMP's own inverse, sharing no code with the
/// digit-serial implementations.
inline drmmm::Natural direct_montgomery(const drmmm::Natural& a,
                                        const drmmm::Natural& b,
                                        const drmmm::Natural& m, unsigned k,
                                        std::size_t d) {
  drmmm::Natural r = drmmm::pow2(std::size_t(k) * d) % m;
  drmmm::Natural r_inv;
  if (mpz_invert(r_inv.get_mpz_t(), r.get_mpz_t(), m.get_mpz_t()) == 0)
    throw drmmm::InternalError("R not invertible");
  return drmmm::modmul_oracle(drmmm::modmul_oracle(a, b, m), r_inv, m);
}

}  // namespace testsupport
