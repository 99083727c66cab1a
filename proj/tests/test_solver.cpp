#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "xyspec/rng.hpp"
#include "xyspec/solver.hpp"

using namespace xyspec;

namespace {

double max_delta(const std::vector<double>& a, const std::vector<double>& b) {
  REQUIRE(a.size() == b.size());
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, std::fabs(a[i] - b[i]));
  return worst;
}

double norm2(const std::vector<double>& u) {
  double s = 0.0;
  for (double x : u) s += x * x;
  return std::sqrt(s);
}

void check_residuals(const EigenSystem& es, double tol) {
  const ModelMatrix M = system_matrix(es);
  const double fro = M.frobenius();
  for (const auto& line : es.lines) {
    REQUIRE(line.vectors.size() == static_cast<std::size_t>(line.multiplicity));
    for (const auto& u : line.vectors)
      CHECK(residual_norm(M, u, line.value) <= tol * std::max(fro, 1.0) * norm2(u));
  }
}

}  // namespace

TEST_CASE("homogeneous chain") {
  SUBCASE("three sites, frozen spectrum") {
    const auto es = homogeneous_chain(0.0, 1.0, 3);
    const auto v = sorted_values(es);
    const double r2 = std::sqrt(2.0);
    CHECK(v[0] == doctest::Approx(-r2).epsilon(1e-14));
    CHECK(v[1] == doctest::Approx(0.0).scale(1.0).epsilon(1e-14));
    CHECK(v[2] == doctest::Approx(r2).epsilon(1e-14));
  }
  SUBCASE("single site") {
    const auto es = homogeneous_chain(5.0, 1.0, 1);
    CHECK(es.lines.size() == 1);
    CHECK(es.lines[0].value == doctest::Approx(10.0));
  }
  SUBCASE("residuals across random draws") {
    Rng rng(111);
    for (int t = 0; t < 5; ++t)
      check_residuals(homogeneous_chain(rng.uniform(-1, 1), rng.coupling(),
                                        static_cast<std::size_t>(rng.range(1, 12))),
                      1e-9);
  }
}

TEST_CASE("homogeneous ring") {
  SUBCASE("four sites") {
    const auto es = homogeneous_ring(0.0, 1.0, 4);
    const auto v = sorted_values(es);
    const std::vector<double> want{-2.0, 0.0, 0.0, 2.0};
    for (std::size_t i = 0; i < 4; ++i)
      CHECK(v[i] == doctest::Approx(want[i]).scale(1.0).epsilon(1e-15));
  }
  SUBCASE("odd size has no antisymmetric mode") {
    const auto es = homogeneous_ring(0.3, -0.7, 5);
    CHECK(es.total_multiplicity() == 5);
    for (const auto& l : es.lines) CHECK(2 * l.mode < 5);
  }
  SUBCASE("all-ones eigenvector has row-sum residual at rounding level") {
    const auto es = homogeneous_ring(0.37, 1.21, 6);
    const ModelMatrix M = system_matrix(es);
    for (const auto& line : es.lines)
      if (line.mode == 0)
        CHECK(residual_norm(M, line.vectors[0], line.value) <= 1e-14 * M.frobenius());
  }
}

TEST_CASE("alternating chain") {
  SUBCASE("unit couplings reduce to the homogeneous three-site chain") {
    const auto es = alternating_chain(0.0, 0.0, 1.0, 1.0, 2);
    const auto v = sorted_values(es);
    const double r2 = std::sqrt(2.0);
    CHECK(v[0] == doctest::Approx(-r2));
    CHECK(v[1] == doctest::Approx(0.0).scale(1.0));
    CHECK(v[2] == doctest::Approx(r2));
  }
  SUBCASE("kernel eigenvector is the printed geometric sequence") {
    const auto es = alternating_chain(0.4, -0.1, 1.0, 2.0, 3);
    const SpectralLine* boundary = nullptr;
    for (const auto& l : es.lines)
      if (l.origin == Origin::Boundary) boundary = &l;
    REQUIRE(boundary != nullptr);
    CHECK(boundary->value == doctest::Approx(0.8));
    const auto u1 = extract_component(std::span<const double>(boundary->vectors[0]), 1, 2);
    CHECK(u1[0] == doctest::Approx(1.0));
    CHECK(u1[1] == doctest::Approx(-0.5));
    CHECK(u1[2] == doctest::Approx(0.25));
    const auto u2 = extract_component(std::span<const double>(boundary->vectors[0]), 2, 2);
    for (const double x : u2) CHECK(x == 0.0);
    // L_chain u_(1) = 0: D1 x_i + D2 x_{i+1}
    for (std::size_t i = 0; i + 1 < u1.size(); ++i)
      CHECK(1.0 * u1[i] + 2.0 * u1[i + 1] == doctest::Approx(0.0).scale(1.0));
  }
  SUBCASE("random parameters match the oracle") {
    Rng rng(222);
    for (int t = 0; t < 5; ++t) {
      const double w1 = rng.uniform(-1, 1), w2 = rng.uniform(-1, 1);
      const double d1 = rng.coupling(), d2 = rng.coupling();
      const std::size_t n = static_cast<std::size_t>(rng.range(2, 7));
      const auto es = alternating_chain(w1, w2, d1, d2, n);
      const auto oracle = oracle_eigensystem(ChainModel{es.params, es.sites});
      CHECK(max_delta(sorted_values(es), sorted_values(oracle)) <= 1e-9);
      check_residuals(es, 1e-9);
    }
  }
}

TEST_CASE("alternating ring") {
  SUBCASE("four sites with unit couplings") {
    const auto es = alternating_ring(0.0, 0.0, 1.0, 1.0, 2);
    CHECK(sorted_values(es) == std::vector<double>{-2.0, 0.0, 0.0, 2.0});
  }
  SUBCASE("corner product positivity keeps 2w1 out of the spectrum") {
    Rng rng(333);
    for (int t = 0; t < 10; ++t) {
      const double d1 = rng.coupling(), d2 = rng.coupling();
      const std::size_t n = static_cast<std::size_t>(rng.range(2, 8));
      for (std::size_t l = 0; l < n; ++l) {
        const double c = std::cos(2.0 * std::acos(-1.0) * static_cast<double>(l) / static_cast<double>(n));
        const Complex q = std::polar(1.0, 2.0 * std::acos(-1.0) * static_cast<double>(l) / static_cast<double>(n));
        const Complex prod = (d2 / q + d1) * (d1 + d2 * q);
        CHECK(prod.imag() == doctest::Approx(0.0).scale(1.0));
        CHECK(prod.real() == doctest::Approx(d1 * d1 + d2 * d2 + 2 * d1 * d2 * c).epsilon(1e-12));
        if (std::fabs(d1) != std::fabs(d2)) CHECK(prod.real() > 0.0);
      }
    }
  }
  SUBCASE("residuals") {
    Rng rng(444);
    for (int t = 0; t < 5; ++t) {
      const auto es = alternating_ring(rng.uniform(-1, 1), rng.uniform(-1, 1), rng.coupling(),
                                       rng.coupling(), static_cast<std::size_t>(rng.range(2, 7)));
      check_residuals(es, 1e-9);
      const auto oracle = oracle_eigensystem(RingModel{es.params, es.sites / 2});
      CHECK(max_delta(sorted_values(es), sorted_values(oracle)) <= 1e-9);
    }
  }
}

TEST_CASE("periodic ring") {
  SUBCASE("k=1 specializes to the homogeneous ring") {
    Rng rng(555);
    const PeriodicParameters p = rng.params(1);
    const auto a = sorted_values(periodic_ring(p, 6));
    const auto b = sorted_values(homogeneous_ring(p.omega[0], p.coupling[0], 6));
    CHECK(max_delta(a, b) <= 1e-12);
  }
  SUBCASE("k=2 specializes to the alternating ring") {
    Rng rng(666);
    for (int t = 0; t < 5; ++t) {
      const PeriodicParameters p = rng.params(2);
      const std::size_t n = static_cast<std::size_t>(rng.range(2, 7));
      const auto a = sorted_values(periodic_ring(p, n));
      const auto b =
          sorted_values(alternating_ring(p.omega[0], p.omega[1], p.coupling[0], p.coupling[1], n));
      CHECK(max_delta(a, b) <= 1e-10);
    }
  }
  SUBCASE("k=3, m=4: oracle match and multiplicity audit") {
    Rng rng(777);
    const PeriodicParameters p = rng.params(3);
    const auto es = periodic_ring(p, 4);
    const auto oracle = oracle_eigensystem(RingModel{p, 4});
    CHECK(sorted_values(es).size() == 12);
    CHECK(max_delta(sorted_values(es), sorted_values(oracle)) <= 1e-9);
    int singles_l0 = 0, singles_l2 = 0, doubles_l1 = 0;
    for (const auto& l : es.lines) {
      if (l.mode == 0 && l.multiplicity == 1) ++singles_l0;
      if (l.mode == 2 && l.multiplicity == 1) ++singles_l2;
      if (l.mode == 1 && l.multiplicity == 2) ++doubles_l1;
    }
    CHECK(singles_l0 == 3);
    CHECK(singles_l2 == 3);
    CHECK(doubles_l1 == 3);
    check_residuals(es, 1e-9);
  }
}

TEST_CASE("periodic chain") {
  SUBCASE("k=1 specializes to the homogeneous chain") {
    Rng rng(888);
    const PeriodicParameters p = rng.params(1);
    const auto a = sorted_values(periodic_chain(p, 7));
    const auto b = sorted_values(homogeneous_chain(p.omega[0], p.coupling[0], 6));
    CHECK(max_delta(a, b) <= 1e-12);
    // no boundary lines at k=1
    for (const auto& l : periodic_chain(p, 7).lines) CHECK(l.origin == Origin::Bulk);
  }
  SUBCASE("k=2 has its boundary line at 2*omega1 and matches the dedicated solver") {
    Rng rng(999);
    for (int t = 0; t < 5; ++t) {
      const PeriodicParameters p = rng.params(2);
      const std::size_t n = static_cast<std::size_t>(rng.range(2, 7));
      const auto es = periodic_chain(p, n);
      const auto ded =
          sorted_values(alternating_chain(p.omega[0], p.omega[1], p.coupling[0], p.coupling[1], n));
      CHECK(max_delta(sorted_values(es), ded) <= 1e-10);
      int boundary = 0;
      for (const auto& l : es.lines)
        if (l.origin == Origin::Boundary) {
          ++boundary;
          CHECK(l.value == doctest::Approx(2.0 * p.omega[0]).epsilon(1e-12));
        }
      CHECK(boundary == 1);
    }
  }
  SUBCASE("k=3, n=3: six bulk plus two boundary lines against the oracle") {
    Rng rng(1010);
    const PeriodicParameters p = rng.params(3);
    const auto es = periodic_chain(p, 3);
    const auto oracle = oracle_eigensystem(ChainModel{p, 8});
    CHECK(max_delta(sorted_values(es), sorted_values(oracle)) <= 1e-9);
    int bulk = 0, boundary = 0;
    for (const auto& l : es.lines) {
      if (l.origin == Origin::Bulk) ++bulk;
      if (l.origin == Origin::Boundary) ++boundary;
    }
    CHECK(bulk == 6);
    CHECK(boundary == 2);
    check_residuals(es, 1e-9);
    // boundary lines carry a vanishing u_(k) component
    for (const auto& l : es.lines)
      if (l.origin == Origin::Boundary)
        for (const double x : extract_component(std::span<const double>(l.vectors[0]), 3, 3))
          CHECK(x == 0.0);
  }
}

TEST_CASE("oracle eigensystem") {
  SUBCASE("trace identity") {
    Rng rng(1111);
    const PeriodicParameters p = rng.params(3);
    const auto es = oracle_eigensystem(ChainModel{p, 8});
    double sum = 0.0, want = 0.0;
    for (const double v : sorted_values(es)) sum += v;
    for (std::size_t i = 1; i <= 8; ++i) want += 2.0 * p.omega_at_site(i);
    CHECK(sum == doctest::Approx(want).epsilon(1e-12));
  }
  SUBCASE("two-site homogeneous chain") {
    const double w = 0.3, d = 1.4;
    const auto es = oracle_eigensystem(ChainModel{PeriodicParameters{1, {w}, {d}}, 2});
    const auto v = sorted_values(es);
    CHECK(v[0] == doctest::Approx(2 * w - d).epsilon(1e-12));
    CHECK(v[1] == doctest::Approx(2 * w + d).epsilon(1e-12));
  }
  SUBCASE("doublets are clustered on rings") {
    Rng rng(1212);
    const PeriodicParameters p = rng.params(2);
    const auto es = oracle_eigensystem(RingModel{p, 5});
    std::vector<int> mults;
    for (const auto& l : es.lines) mults.push_back(l.multiplicity);
    std::sort(mults.begin(), mults.end());
    CHECK(std::count(mults.begin(), mults.end(), 2) == 4);  // l = 1..4 pair up
    CHECK(std::count(mults.begin(), mults.end(), 1) == 2);  // l = 0 modes
  }
}

TEST_CASE("a corrupted coupling is caught by the residual check") {
  Rng rng(1313);
  const PeriodicParameters p = rng.params(3);
  const auto es = periodic_chain(p, 4);
  PeriodicParameters bad = p;
  bad.coupling[1] = -bad.coupling[1];
  EigenSystem probe = es;
  probe.params = bad;
  const ModelMatrix M = system_matrix(probe);
  const double fro = M.frobenius();
  double worst = 0.0;
  for (const auto& line : es.lines)
    for (const auto& u : line.vectors)
      worst = std::max(worst, residual_norm(M, u, line.value) / (std::max(fro, 1.0) * norm2(u)));
  CHECK(worst > 1e-3);
}
