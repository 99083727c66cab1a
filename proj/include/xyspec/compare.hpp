#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "xyspec/solver.hpp"

namespace xyspec {

/// One shared chain/ring eigenvalue with its projection check result.
struct CommonPair {
  double value = 0.0;
  std::size_t chain_line = 0;  // index into the chain system's lines
  std::size_t ring_line = 0;
  double projection_residual = 0.0;
  double projection_scale = 1.0;
};

struct ComparisonReport {
  std::vector<CommonPair> common;
  std::vector<std::size_t> chain_only;  // boundary lines (k-1 of them)
  std::vector<std::size_t> ring_only;   // symmetric-mode lines (2k of them)
  std::vector<double> identity_rel_err;
  double identity_max_rel_err = 0.0;
  double projection_max_err = 0.0;
};

struct ProjectionResult {
  double residual = 0.0;
  double scale = 1.0;
};

/// Truncates the ring line's sine-form canonical vector to the chain length
/// and compares with the chain canonical vector after matching one scalar
/// (which the closed forms pin to exactly 1).
ProjectionResult projection_check(const SpectralLine& chain_line,
                                  const SpectralLine& ring_line,
                                  std::size_t chain_sites);

/// Greedy nearest matching of chain bulk lines against ring doublets within
/// tol; leftovers are classified by origin tag. Projection residuals are
/// filled for every common pair when vectors are present.
ComparisonReport spectrum_partition(const EigenSystem& chain, const EigenSystem& ring,
                                    double tol);

/// Relative residuals of the chain/ring determinant identity at the given
/// shifts. Chain side via the tridiagonal recurrence, ring side via the
/// oracle eigenvalue product. Throws OverflowRisk past 1e280.
std::vector<double> determinant_identity_residual(const PeriodicParameters& params,
                                                  std::size_t n,
                                                  std::span<const double> lambda_samples);

/// Deterministic eigenvalue-avoiding sample shifts in
/// [min eig - 1, max eig + 1].
std::vector<double> identity_sample_points(const PeriodicParameters& params, std::size_t n,
                                           std::size_t count, std::uint64_t seed);

/// Full comparison for a chain with k*n-1 sites against the ring with 2*k*n
/// sites: partition, projections, and the determinant identity at `samples`
/// random shifts.
ComparisonReport compare_chain_ring(const PeriodicParameters& params, std::size_t n,
                                    std::size_t samples, std::uint64_t seed);

/// Stable-field-order JSON rendering of a report.
std::string normalize_report(const ComparisonReport& report);

}  // namespace xyspec
