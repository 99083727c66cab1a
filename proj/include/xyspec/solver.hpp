#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "xyspec/model.hpp"

namespace xyspec {

enum class Origin {
  Bulk,       // shared with the doubled ring; sine-profile u_(k)
  Boundary,   // eigenvalue of H_{1,k-1}; u_(k) = 0 (chain only)
  Symmetric,  // ring mode at l = 0 or l = m/2, multiplicity one
  Unknown,    // oracle output, classification not inferred
};
const char* origin_name(Origin o);

/// One eigenvalue with its canonical (unnormalized) eigenvector(s), exactly
/// in the closed-form normalization (bare sine/cosine profiles).
struct SpectralLine {
  double value = 0.0;
  int multiplicity = 1;
  int mode = 0;  // j for chain bulk, l for ring modes, position for boundary
  int band = 0;  // index within the reduced-block spectrum at that mode
  Origin origin = Origin::Unknown;
  std::vector<std::vector<double>> vectors;  // one per multiplicity when built
};

struct EigenSystem {
  PeriodicParameters params;
  bool ring = false;
  std::size_t sites = 0;
  bool closed_form = true;  // method tag: closed-form vs oracle
  std::vector<SpectralLine> lines;  // sorted by value ascending

  std::size_t total_multiplicity() const;
};

struct SolveOptions {
  bool vectors = true;
  double residual_tol = 1e-9;  // scaled by ||H||_F ||u||_2
};

/// ||H u - lambda u||_2 on the structured matrix.
double residual_norm(const ModelMatrix& M, std::span<const double> u, double lambda);

/// Rebuild the chain/ring matrix an eigensystem refers to.
ModelMatrix system_matrix(const EigenSystem& es);

/// Eigenvalues expanded by multiplicity, ascending.
std::vector<double> sorted_values(const EigenSystem& es);

// Closed-form solvers. Each produces canonical eigenvectors and validates
// them against the residual tolerance, falling back to oracle vectors only
// when a degeneracy guard trips.
EigenSystem homogeneous_chain(double omega, double coupling, std::size_t sites,
                              const SolveOptions& opts = {});
EigenSystem homogeneous_ring(double omega, double coupling, std::size_t sites,
                             const SolveOptions& opts = {});
EigenSystem alternating_chain(double omega1, double omega2, double d1, double d2,
                              std::size_t n, const SolveOptions& opts = {});  // 2n-1 sites
EigenSystem alternating_ring(double omega1, double omega2, double d1, double d2,
                             std::size_t n, const SolveOptions& opts = {});  // 2n sites
EigenSystem periodic_chain(const PeriodicParameters& params, std::size_t n,
                           const SolveOptions& opts = {});  // k*n - 1 sites
EigenSystem periodic_ring(const PeriodicParameters& params, std::size_t m,
                          const SolveOptions& opts = {});  // k*m sites

/// Brute-force reference: dense Jacobi decomposition with multiplicities
/// inferred by clustering at 1e-7 * (1 + ||H||_F).
EigenSystem oracle_eigensystem(const ChainModel& model);
EigenSystem oracle_eigensystem(const RingModel& model);

}  // namespace xyspec
