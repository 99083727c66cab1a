#include "xyspec/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace xyspec {

namespace {

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

}  // namespace

SpectralBasis orthonormal_basis(const EigenSystem& es) {
  SpectralBasis basis;
  for (const auto& line : es.lines) {
    if (line.vectors.size() != static_cast<std::size_t>(line.multiplicity))
      throw NonOrthogonalBasis("orthonormal_basis: eigensystem carries no vectors");
    std::vector<std::vector<double>> local;
    for (const auto& v : line.vectors) {
      std::vector<double> w = v;
      for (const auto& prev : local) {
        const double c = dot(w, prev);
        for (std::size_t i = 0; i < w.size(); ++i) w[i] -= c * prev[i];
      }
      const double nrm = std::sqrt(dot(w, w));
      if (nrm == 0.0) throw NonOrthogonalBasis("orthonormal_basis: dependent vectors in a line");
      for (double& x : w) x /= nrm;
      local.push_back(std::move(w));
    }
    for (auto& w : local) {
      basis.values.push_back(line.value);
      basis.vectors.push_back(std::move(w));
    }
  }

  double defect = 0.0;
  for (std::size_t i = 0; i < basis.vectors.size(); ++i)
    for (std::size_t j = i; j < basis.vectors.size(); ++j) {
      const double g = dot(basis.vectors[i], basis.vectors[j]);
      defect = std::max(defect, std::fabs(g - (i == j ? 1.0 : 0.0)));
    }
  if (defect > 1e-8)
    throw NonOrthogonalBasis("orthonormal_basis: Gram matrix deviates from identity by " +
                             std::to_string(defect));
  return basis;
}

std::vector<Complex> propagator(const EigenSystem& es, std::size_t p, std::size_t q,
                                std::span<const double> times) {
  if (p < 1 || p > es.sites || q < 1 || q > es.sites)
    throw DimensionMismatch("propagator: site index out of range (sites are 1-based)");
  const SpectralBasis basis = orthonormal_basis(es);
  std::vector<Complex> out(times.size());
  for (std::size_t ti = 0; ti < times.size(); ++ti) {
    Complex g = 0.0;
    for (std::size_t i = 0; i < basis.values.size(); ++i) {
      const double w = basis.vectors[i][p - 1] * basis.vectors[i][q - 1];
      g += w * std::polar(1.0, -basis.values[i] * times[ti]);
    }
    out[ti] = g;
  }
  return out;
}

PropagatorSeries divergence_series(const EigenSystem& a, const EigenSystem& b,
                                   std::size_t p, double threshold, double t_max,
                                   std::size_t steps) {
  if (steps < 1) throw InvalidParameter("divergence_series: need at least one step");
  PropagatorSeries series;
  series.times.resize(steps + 1);
  for (std::size_t i = 0; i <= steps; ++i)
    series.times[i] = t_max * static_cast<double>(i) / static_cast<double>(steps);
  series.chain_amp = propagator(a, p, p, series.times);
  series.ring_amp = propagator(b, p, p, series.times);
  series.abs_diff.resize(series.times.size());
  series.divergence_time = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < series.times.size(); ++i) {
    series.abs_diff[i] = std::abs(series.chain_amp[i] - series.ring_amp[i]);
    if (series.abs_diff[i] > threshold && std::isinf(series.divergence_time))
      series.divergence_time = series.times[i];
  }
  return series;
}

PropagatorSeries boundary_divergence(const PeriodicParameters& params, std::size_t n,
                                     std::size_t p, double threshold, double t_max,
                                     std::size_t steps) {
  params.validate();
  const std::size_t chain_sites = static_cast<std::size_t>(params.k) * n - 1;
  if (p == 0) p = (chain_sites + 1) / 2;  // default: the middle site
  if (p < 1 || p > chain_sites)
    throw InvalidParameter("boundary_divergence: probe site outside the chain");
  const auto chain = periodic_chain(params, n);
  const auto ring = periodic_ring(params, 2 * n);
  return divergence_series(chain, ring, p, threshold, t_max, steps);
}

}  // namespace xyspec
