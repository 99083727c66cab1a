#include <doctest.h>

#include <cmath>
#include <complex>
#include <vector>

#include "xyspec/dynamics.hpp"
#include "xyspec/rng.hpp"

using namespace xyspec;

TEST_CASE("propagator at t = 0 is the identity") {
  Rng rng(1818);
  const PeriodicParameters p = rng.params(2);
  const auto es = periodic_chain(p, 3);
  const std::vector<double> t0{0.0};
  for (std::size_t q = 1; q <= es.sites; ++q) {
    const auto g = propagator(es, 3, q, t0);
    CHECK(std::abs(g[0] - (q == 3 ? 1.0 : 0.0)) <= 1e-12);
  }
}

TEST_CASE("single-site chain evolves with the bare phase") {
  const double omega = 0.45;
  const auto es = homogeneous_chain(omega, 1.0, 1);
  std::vector<double> times;
  for (int i = 0; i <= 10; ++i) times.push_back(0.3 * i);
  const auto g = propagator(es, 1, 1, times);
  for (std::size_t i = 0; i < times.size(); ++i)
    CHECK(std::abs(g[i] - std::polar(1.0, -2.0 * omega * times[i])) <= 1e-12);
}

TEST_CASE("homogeneous ring propagator is translation invariant") {
  const auto es = homogeneous_ring(0.3, 1.1, 6);
  const std::vector<double> times{0.4, 1.3, 2.9};
  const auto ref = propagator(es, 1, 3, times);
  for (std::size_t shift = 1; shift < 6; ++shift) {
    const std::size_t pp = 1 + shift, qq = (2 + shift) % 6 + 1;
    const auto g = propagator(es, pp, qq, times);
    for (std::size_t i = 0; i < times.size(); ++i)
      CHECK(std::abs(std::abs(g[i]) - std::abs(ref[i])) <= 1e-10);
  }
}

TEST_CASE("propagator built from the oracle matches the closed form") {
  Rng rng(1919);
  const PeriodicParameters p = rng.params(2);
  const auto closed = periodic_ring(p, 4);
  const auto oracle = oracle_eigensystem(RingModel{p, 4});
  std::vector<double> times;
  for (int i = 0; i <= 16; ++i) times.push_back(0.25 * i);
  const auto a = propagator(closed, 2, 5, times);
  const auto b = propagator(oracle, 2, 5, times);
  for (std::size_t i = 0; i < times.size(); ++i) CHECK(std::abs(a[i] - b[i]) <= 1e-8);
}

TEST_CASE("unitarity of the one-magnon evolution") {
  Rng rng(2020);
  const PeriodicParameters p = rng.params(3);
  for (const bool ring : {false, true}) {
    const EigenSystem es = ring ? periodic_ring(p, 4) : periodic_chain(p, 4);
    const SpectralBasis basis = orthonormal_basis(es);
    const std::size_t probe = es.sites / 2;
    for (const double t : {0.0, 0.7, 2.3}) {
      double total = 0.0;
      for (std::size_t q = 1; q <= es.sites; ++q) {
        Complex g = 0.0;
        for (std::size_t i = 0; i < basis.values.size(); ++i)
          g += basis.vectors[i][probe - 1] * basis.vectors[i][q - 1] *
               std::polar(1.0, -basis.values[i] * t);
        total += std::norm(g);
      }
      CHECK(std::fabs(total - 1.0) <= 1e-9);
    }
  }
}

TEST_CASE("boundary divergence") {
  Rng rng(2121);
  const PeriodicParameters p = rng.params(2);
  double dmax = 0.0;
  for (const double d : p.coupling) dmax = std::max(dmax, std::fabs(d));
  const std::size_t n = 16;
  const std::size_t chain_sites = 2 * n - 1;
  const std::size_t probe = (chain_sites + 1) / 2;

  SUBCASE("divergence time respects the ballistic bound") {
    const double t_max = static_cast<double>(chain_sites) / dmax;
    const auto series = boundary_divergence(p, n, 0, 1e-3, t_max, 256);
    REQUIRE(std::isfinite(series.divergence_time));
    const double dist = std::min(probe - 1, chain_sites - probe);
    CHECK(series.divergence_time >= 0.5 * static_cast<double>(dist) / (2.0 * dmax));
  }
  SUBCASE("an unreachable threshold reports +inf") {
    const auto series = boundary_divergence(p, n, 0, 2.1, 3.0, 64);
    CHECK(std::isinf(series.divergence_time));
  }
  SUBCASE("chain against itself never diverges") {
    const auto chain = periodic_chain(p, 6);
    const auto series = divergence_series(chain, chain, 5, 1e-12, 20.0, 128);
    CHECK(std::isinf(series.divergence_time));
    for (const double d : series.abs_diff) CHECK(d == 0.0);
  }
}

TEST_CASE("short-time agreement inside the ballistic horizon") {
  Rng rng(2222);
  const PeriodicParameters p = rng.params(1);
  const std::size_t m = 16;
  double dmax = std::fabs(p.coupling[0]);
  const std::size_t chain_sites = m - 1;
  const double horizon = 0.25 * static_cast<double>(chain_sites) / (2.0 * dmax);
  const auto series = boundary_divergence(p, m, 0, 1e30, horizon, 64);
  for (const double d : series.abs_diff) CHECK(d <= 1e-6);
}

TEST_CASE("degenerate lines are rejected by the Gram check") {
  const auto base = homogeneous_chain(0.0, 1.0, 3);
  EigenSystem broken = base;
  broken.lines[0].multiplicity = 2;
  broken.lines[0].vectors.push_back(broken.lines[0].vectors[0]);
  CHECK_THROWS_AS(orthonormal_basis(broken), NonOrthogonalBasis);
}
