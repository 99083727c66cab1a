#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "xyspec/compare.hpp"
#include "xyspec/rng.hpp"

using namespace xyspec;

TEST_CASE("spectrum partition for the homogeneous pair") {
  // chain with 3 sites vs ring with 8: common {2 cos(pi j / 4)}, ring-only {+-2}
  const PeriodicParameters p{1, {0.0}, {1.0}};
  const auto chain = periodic_chain(p, 4);
  const auto ring = periodic_ring(p, 8);
  const auto rep = spectrum_partition(chain, ring, 1e-8 * (1.0 + system_matrix(ring).frobenius()));

  REQUIRE(rep.common.size() == 3);
  std::vector<double> common;
  for (const auto& c : rep.common) common.push_back(c.value);
  std::sort(common.begin(), common.end());
  const double r2 = std::sqrt(2.0);
  CHECK(common[0] == doctest::Approx(-r2));
  CHECK(common[1] == doctest::Approx(0.0).scale(1.0));
  CHECK(common[2] == doctest::Approx(r2));

  CHECK(rep.chain_only.empty());
  REQUIRE(rep.ring_only.size() == 2);
  std::vector<double> leftovers;
  for (const std::size_t i : rep.ring_only) leftovers.push_back(ring.lines[i].value);
  std::sort(leftovers.begin(), leftovers.end());
  CHECK(leftovers[0] == doctest::Approx(-2.0));
  CHECK(leftovers[1] == doctest::Approx(2.0));
}

TEST_CASE("partition counts follow (k(n-1), k-1, 2k)") {
  Rng rng(1414);
  SUBCASE("alternating example") {
    const PeriodicParameters p = rng.params(2);
    const auto rep = compare_chain_ring(p, 3, 0, 1);
    CHECK(rep.common.size() == 4);
    CHECK(rep.chain_only.size() == 1);
    CHECK(rep.ring_only.size() == 4);
  }
  SUBCASE("random sweep") {
    for (int trial = 0; trial < 8; ++trial) {
      const int k = rng.range(1, 4);
      const std::size_t n = static_cast<std::size_t>(rng.range(2, 6));
      const PeriodicParameters p = rng.params(k);
      const auto rep = compare_chain_ring(p, n, 0, 7);
      CHECK(rep.common.size() == static_cast<std::size_t>(k) * (n - 1));
      CHECK(rep.chain_only.size() == static_cast<std::size_t>(k) - 1);
      CHECK(rep.ring_only.size() == 2 * static_cast<std::size_t>(k));
    }
  }
}

TEST_CASE("determinant identity") {
  SUBCASE("homogeneous, shifts across [-5, 5]") {
    const PeriodicParameters p{1, {0.0}, {1.0}};
    // eigenvalues live in {2cos(pi j/4)} and {2cos(pi l/4)}; step 0.37 avoids them
    std::vector<double> lams;
    for (double lam = -4.9; lam <= 5.0; lam += 0.37) lams.push_back(lam);
    for (const double e : determinant_identity_residual(p, 4, lams)) CHECK(e <= 1e-8);
  }
  SUBCASE("degenerate alternating parameters still satisfy the identity") {
    const PeriodicParameters p{2, {0.4, 0.4}, {1.1, 1.1}};
    const auto pts = identity_sample_points(p, 3, 20, 99);
    for (const double e : determinant_identity_residual(p, 3, pts)) CHECK(e <= 1e-8);
  }
  SUBCASE("leading behavior at |lambda| = 1e3") {
    Rng rng(1515);
    const PeriodicParameters p = rng.params(3);
    const std::vector<double> lams{-1e3, 1e3};
    for (const double e : determinant_identity_residual(p, 3, lams)) CHECK(e <= 1e-10);
  }
  SUBCASE("overflow guard") {
    const PeriodicParameters p{1, {0.0}, {2.0}};
    const std::vector<double> lams{1e40};
    CHECK_THROWS_AS(determinant_identity_residual(p, 6, lams), OverflowRisk);
  }
}

TEST_CASE("projection of ring sine vectors onto the chain") {
  SUBCASE("sine entries coincide for the homogeneous pair") {
    const PeriodicParameters p{1, {0.0}, {1.0}};
    const auto rep = compare_chain_ring(p, 3, 0, 1);
    for (const auto& c : rep.common) {
      CHECK(c.projection_residual <= 1e-12);
      CHECK(c.projection_scale == doctest::Approx(1.0).epsilon(1e-12));
    }
  }
  SUBCASE("random alternating parameters") {
    Rng rng(1616);
    for (int trial = 0; trial < 5; ++trial) {
      const PeriodicParameters p = rng.params(2);
      const std::size_t n = static_cast<std::size_t>(rng.range(2, 6));
      const auto rep = compare_chain_ring(p, n, 0, 3);
      CHECK(rep.common.size() == 2 * (n - 1));
      for (const auto& c : rep.common) {
        CHECK(c.projection_residual <= 1e-9);
        CHECK(std::fabs(c.projection_scale - 1.0) <= 1e-9);
      }
    }
  }
  SUBCASE("the m-th coordinate of the ring sine component is exactly zero") {
    Rng rng(1717);
    const PeriodicParameters p = rng.params(3);
    const std::size_t m = 6;
    const auto ring = periodic_ring(p, m);
    for (const auto& line : ring.lines) {
      if (line.multiplicity != 2) continue;
      const auto uk = extract_component(std::span<const double>(line.vectors[1]), 3, 3);
      CHECK(uk[m - 1] == 0.0);
    }
  }
}

TEST_CASE("report serialization is stable") {
  const PeriodicParameters p{2, {0.25, -0.5}, {1.0, 1.5}};
  const auto rep = compare_chain_ring(p, 2, 4, 42);
  const std::string a = normalize_report(rep);
  const std::string b = normalize_report(compare_chain_ring(p, 2, 4, 42));
  CHECK(a == b);
  CHECK(a.find("\"common\"") != std::string::npos);
  CHECK(a.find("\"identity_max_rel_err\"") != std::string::npos);
  CHECK(a.find("\"projection_max_err\"") != std::string::npos);
}

TEST_CASE("partition failure is reported with the offending eigenvalue") {
  // a ring with wrong parameters cannot host the chain spectrum
  const PeriodicParameters p{2, {0.3, -0.4}, {1.0, 0.7}};
  PeriodicParameters other = p;
  other.omega[0] += 0.5;
  const auto chain = periodic_chain(p, 3);
  const auto ring = periodic_ring(other, 6);
  CHECK_THROWS_AS(spectrum_partition(chain, ring, 1e-8), MatchFailure);
}
