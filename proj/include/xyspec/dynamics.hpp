#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "xyspec/solver.hpp"

namespace xyspec {

/// Sampled one-magnon amplitudes G_pq(t) for a chain and its doubled ring.
struct PropagatorSeries {
  std::vector<double> times;
  std::vector<Complex> chain_amp;
  std::vector<Complex> ring_amp;
  std::vector<double> abs_diff;
  double divergence_time = 0.0;  // +inf when the threshold is never crossed
};

/// Orthonormal spectral basis from canonical lines: vectors are normalized
/// and Gram-Schmidt is applied inside each multiplicity-2 line. Throws
/// NonOrthogonalBasis if the resulting Gram matrix deviates from identity by
/// more than 1e-8.
struct SpectralBasis {
  std::vector<double> values;
  std::vector<std::vector<double>> vectors;
};
SpectralBasis orthonormal_basis(const EigenSystem& es);

/// G_pq(t) = sum_i phi_i(p) phi_i(q) e^{-i lambda_i t}; sites are 1-based.
std::vector<Complex> propagator(const EigenSystem& es, std::size_t p, std::size_t q,
                                std::span<const double> times);

/// Amplitude tracks G_pp for two systems on a uniform grid over [0, t_max]
/// with `steps` intervals, and the first sampled time at which they differ
/// by more than the threshold.
PropagatorSeries divergence_series(const EigenSystem& a, const EigenSystem& b,
                                   std::size_t p, double threshold, double t_max,
                                   std::size_t steps);

/// Chain with k*n-1 sites against the ring with 2*k*n sites, site p well
/// inside the chain (pass p = 0 for the default, the middle site).
PropagatorSeries boundary_divergence(const PeriodicParameters& params, std::size_t n,
                                     std::size_t p, double threshold, double t_max,
                                     std::size_t steps);

}  // namespace xyspec
