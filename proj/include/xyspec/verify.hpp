#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace xyspec {

struct VerifyOptions {
  std::uint64_t seed = 20070310;
  int trials = 40;
  int kmax = 4;
  bool inject_fault = false;  // corrupt one coupling mid-harness; the residual
                              // family must catch it
};

struct VerifyResult {
  std::string family;
  bool pass = false;
  std::string detail;
};

/// Randomized property families over all module invariants. Deterministic
/// for a fixed seed.
std::vector<VerifyResult> run_verify(const VerifyOptions& opts);

/// Prints one PASS/FAIL line per family plus a summary; returns the process
/// exit code (0 iff everything passed).
int print_verify_report(std::ostream& out, const std::vector<VerifyResult>& results,
                        const VerifyOptions& opts);

}  // namespace xyspec
