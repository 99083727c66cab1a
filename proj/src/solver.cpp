#include "xyspec/solver.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>

namespace xyspec {

namespace {
constexpr double kPi = std::numbers::pi;
}

const char* origin_name(Origin o) {
  switch (o) {
    case Origin::Bulk: return "bulk";
    case Origin::Boundary: return "boundary";
    case Origin::Symmetric: return "symmetric";
    case Origin::Unknown: return "unknown";
  }
  return "unknown";
}

std::size_t EigenSystem::total_multiplicity() const {
  std::size_t s = 0;
  for (const auto& l : lines) s += static_cast<std::size_t>(l.multiplicity);
  return s;
}

double residual_norm(const ModelMatrix& M, std::span<const double> u, double lambda) {
  std::vector<double> y(u.size());
  M.apply(u, y);
  double s = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    const double r = y[i] - lambda * u[i];
    s += r * r;
  }
  return std::sqrt(s);
}

ModelMatrix system_matrix(const EigenSystem& es) {
  if (es.ring)
    return ring_matrix(RingModel{es.params, es.sites / static_cast<std::size_t>(es.params.k)});
  return chain_matrix(ChainModel{es.params, es.sites});
}

std::vector<double> sorted_values(const EigenSystem& es) {
  std::vector<double> v;
  v.reserve(es.sites);
  for (const auto& l : es.lines)
    for (int m = 0; m < l.multiplicity; ++m) v.push_back(l.value);
  std::sort(v.begin(), v.end());
  return v;
}

namespace {

double norm2(std::span<const double> u) {
  double s = 0.0;
  for (double x : u) s += x * x;
  return std::sqrt(s);
}

int origin_rank(Origin o) {
  switch (o) {
    case Origin::Bulk: return 0;
    case Origin::Boundary: return 1;
    case Origin::Symmetric: return 2;
    case Origin::Unknown: return 3;
  }
  return 3;
}

void sort_lines(std::vector<SpectralLine>& lines) {
  std::stable_sort(lines.begin(), lines.end(), [](const SpectralLine& a, const SpectralLine& b) {
    if (a.value != b.value) return a.value < b.value;
    if (a.origin != b.origin) return origin_rank(a.origin) < origin_rank(b.origin);
    if (a.mode != b.mode) return a.mode < b.mode;
    return a.band < b.band;
  });
}

// Canonical component profiles of the closed-form eigenvectors.
std::vector<double> sine_profile(std::size_t len, double step) {
  std::vector<double> u(len);
  for (std::size_t s = 1; s <= len; ++s) u[s - 1] = std::sin(step * static_cast<double>(s));
  return u;
}
std::vector<double> cosine_profile(std::size_t len, double step) {
  std::vector<double> u(len);
  for (std::size_t s = 1; s <= len; ++s) u[s - 1] = std::cos(step * static_cast<double>(s));
  // the canonical cosine form ends in exactly 1
  if (len > 0) u[len - 1] = 1.0;
  return u;
}
// ring sine form: final entry printed as exactly 0
std::vector<double> ring_sine_profile(std::size_t len, double step) {
  std::vector<double> u = sine_profile(len, step);
  if (len > 0) u[len - 1] = 0.0;
  return u;
}
std::vector<double> ones_profile(std::size_t len) { return std::vector<double>(len, 1.0); }
std::vector<double> alternating_profile(std::size_t len) {
  std::vector<double> u(len);
  for (std::size_t s = 0; s < len; ++s) u[s] = (s % 2 == 0) ? 1.0 : -1.0;
  return u;
}

double partial_coupling_product(const PeriodicParameters& p, int lo, int hi) {
  // D_lo * ... * D_hi, empty product = 1
  double prod = 1.0;
  for (int i = lo; i <= hi; ++i) prod *= p.coupling[static_cast<std::size_t>(i) - 1];
  return prod;
}

// Components u_(1..k-1) from u_(k) by the closed-form transfer coefficients.
// `front` must be R_chain^t u_(k) (zero-padded) for the chain or T_m^t u_(k)
// (cyclic) for the ring; `plain` is Q_chain^t u_(k) resp. u_(k) itself.
std::vector<std::vector<double>> transfer_components(const PeriodicParameters& p,
                                                     double lambda,
                                                     const std::vector<double>& front,
                                                     const std::vector<double>& plain,
                                                     const std::vector<double>& uk) {
  const int k = p.k;
  const double den = block_char(p, 1, k - 1, lambda);
  const double sign_k = (k % 2 == 0) ? 1.0 : -1.0;
  const double dk = p.coupling.back();
  std::vector<std::vector<double>> comps;
  comps.reserve(static_cast<std::size_t>(k));
  for (int j = 1; j < k; ++j) {
    const double a = partial_coupling_product(p, 1, j - 1) * block_char(p, j + 1, k - 1, lambda) * dk;
    const double b = sign_k * block_char(p, 1, j - 1, lambda) * partial_coupling_product(p, j, k - 1);
    const double sign_j = (j % 2 == 0) ? 1.0 : -1.0;
    std::vector<double> c(front.size());
    for (std::size_t i = 0; i < c.size(); ++i)
      c[i] = (sign_j / den) * (a * front[i] + b * plain[i]);
    comps.push_back(std::move(c));
  }
  comps.push_back(uk);
  return comps;
}

// Null singular direction of K = alpha*Q + beta*R, the (n-1) x n bidiagonal
// map (Kx)_i = alpha x_i + beta x_{i+1}. Uses the smallest eigenvector of
// K^t K: dense Jacobi at small n, inverse iteration on the tridiagonal form
// beyond that.
std::vector<double> kernel_direction(double alpha, double beta, std::size_t n) {
  if (n == 1) return {1.0};
  SymTridiag ktk;
  ktk.diag.resize(n);
  ktk.offdiag.resize(n - 1);
  for (std::size_t a = 0; a < n; ++a) {
    double d = 0.0;
    if (a + 1 < n) d += alpha * alpha;
    if (a > 0) d += beta * beta;
    ktk.diag[a] = d;
  }
  for (std::size_t a = 0; a + 1 < n; ++a) ktk.offdiag[a] = alpha * beta;

  std::vector<double> x(n);
  if (n <= 128) {
    HermitianDense M(n);
    for (std::size_t a = 0; a < n; ++a) M.at(a, a) = ktk.diag[a];
    for (std::size_t a = 0; a + 1 < n; ++a) {
      M.at(a, a + 1) = ktk.offdiag[a];
      M.at(a + 1, a) = ktk.offdiag[a];
    }
    const auto eig = hermitian_eig(M);
    for (std::size_t a = 0; a < n; ++a) x[a] = eig.vectors[0][a].real();
  } else {
    // inverse iteration with shift 0; K^t K is PSD with a one-dimensional
    // kernel, so two passes are ample
    std::vector<double> b(n, 1.0);
    b[0] = 1.25;  // avoid an exactly symmetric start
    const double floor_pivot = 1e-300;
    for (int pass = 0; pass < 2; ++pass) {
      std::vector<double> c(n), d(n);
      double piv = ktk.diag[0];
      if (std::fabs(piv) < floor_pivot) piv = floor_pivot;
      c[0] = ktk.offdiag[0] / piv;
      d[0] = b[0] / piv;
      for (std::size_t i = 1; i < n; ++i) {
        piv = ktk.diag[i] - ktk.offdiag[i - 1] * c[i - 1];
        if (std::fabs(piv) < floor_pivot) piv = floor_pivot;
        if (i + 1 < n) c[i] = ktk.offdiag[i] / piv;
        d[i] = (b[i] - ktk.offdiag[i - 1] * d[i - 1]) / piv;
      }
      x[n - 1] = d[n - 1];
      for (std::size_t i = n - 1; i-- > 0;) x[i] = d[i] - c[i] * x[i + 1];
      const double nx = norm2(x);
      for (std::size_t i = 0; i < n; ++i) x[i] /= nx;
      b = x;
    }
  }
  // deterministic sign: first entry of significant magnitude is positive
  double peak = 0.0;
  for (double v : x) peak = std::max(peak, std::fabs(v));
  for (double v : x) {
    if (std::fabs(v) > 0.5 * peak) {
      if (v < 0.0)
        for (double& w : x) w = -w;
      break;
    }
  }
  return x;
}

void validate_line(const ModelMatrix& M, SpectralLine& line, double tol, double fro) {
  for (const auto& u : line.vectors) {
    const double r = residual_norm(M, u, line.value);
    if (r > tol * std::max(fro, 1.0) * norm2(u))
      throw DegenerateParameters("closed-form eigenvector failed residual validation at lambda = " +
                                 std::to_string(line.value));
  }
}

std::vector<double> real_part_checked(const std::vector<Complex>& v) {
  std::vector<double> out(v.size());
  double worst = 0.0, scale = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    out[i] = v[i].real();
    worst = std::max(worst, std::fabs(v[i].imag()));
    scale = std::max(scale, std::abs(v[i]));
  }
  if (worst > 1e-10 * std::max(scale, 1e-300))
    throw Error("expected a real eigenvector of a real symmetric matrix");
  return out;
}

EigenSystem oracle_impl(const ModelMatrix& M, const PeriodicParameters& params, bool ring) {
  const std::size_t n = M.order();
  if (n > 4096) throw InvalidParameter("oracle limited to 4096 sites");
  const auto eig = hermitian_eig(M.dense());
  const double tol_cluster = 1e-7 * (1.0 + M.frobenius());

  EigenSystem es;
  es.params = params;
  es.ring = ring;
  es.sites = n;
  es.closed_form = false;
  std::size_t i = 0;
  int mode = 0;
  while (i < n) {
    std::size_t j = i + 1;
    while (j < n && eig.values[j] - eig.values[j - 1] <= tol_cluster) ++j;
    SpectralLine line;
    line.multiplicity = static_cast<int>(j - i);
    double mean = 0.0;
    for (std::size_t c = i; c < j; ++c) {
      mean += eig.values[c];
      line.vectors.push_back(real_part_checked(eig.vectors[c]));
    }
    line.value = mean / static_cast<double>(j - i);
    line.mode = mode++;
    line.origin = Origin::Unknown;
    es.lines.push_back(std::move(line));
    i = j;
  }
  return es;
}

}  // namespace

EigenSystem oracle_eigensystem(const ChainModel& model) {
  return oracle_impl(chain_matrix(model), model.params, false);
}

EigenSystem oracle_eigensystem(const RingModel& model) {
  return oracle_impl(ring_matrix(model), model.params, true);
}

EigenSystem homogeneous_chain(double omega, double coupling, std::size_t sites,
                              const SolveOptions& opts) {
  if (coupling == 0.0) throw InvalidParameter("homogeneous_chain: coupling must be nonzero");
  if (sites < 1) throw InvalidParameter("homogeneous_chain: need at least one site");
  PeriodicParameters p{1, {omega}, {coupling}};
  EigenSystem es{p, false, sites, true, {}};
  const double step = kPi / static_cast<double>(sites + 1);
  for (std::size_t j = 1; j <= sites; ++j) {
    SpectralLine line;
    line.value = 2.0 * omega + 2.0 * coupling * std::cos(step * static_cast<double>(j));
    line.mode = static_cast<int>(j);
    line.origin = Origin::Bulk;
    if (opts.vectors) line.vectors.push_back(sine_profile(sites, step * static_cast<double>(j)));
    es.lines.push_back(std::move(line));
  }
  sort_lines(es.lines);
  if (opts.vectors) {
    const ModelMatrix M = system_matrix(es);
    const double fro = M.frobenius();
    for (auto& line : es.lines) validate_line(M, line, opts.residual_tol, fro);
  }
  return es;
}

EigenSystem homogeneous_ring(double omega, double coupling, std::size_t sites,
                             const SolveOptions& opts) {
  if (coupling == 0.0) throw InvalidParameter("homogeneous_ring: coupling must be nonzero");
  if (sites < 2) throw InvalidParameter("homogeneous_ring: need at least two sites");
  PeriodicParameters p{1, {omega}, {coupling}};
  EigenSystem es{p, true, sites, true, {}};
  const double step = 2.0 * kPi / static_cast<double>(sites);
  for (std::size_t j = 0; 2 * j <= sites; ++j) {
    SpectralLine line;
    line.value = 2.0 * omega + 2.0 * coupling * std::cos(step * static_cast<double>(j));
    line.mode = static_cast<int>(j);
    if (j == 0 || 2 * j == sites) {
      line.origin = Origin::Symmetric;
      line.multiplicity = 1;
      if (opts.vectors)
        line.vectors.push_back(j == 0 ? ones_profile(sites) : alternating_profile(sites));
    } else {
      line.origin = Origin::Bulk;
      line.multiplicity = 2;
      if (opts.vectors) {
        line.vectors.push_back(cosine_profile(sites, step * static_cast<double>(j)));
        line.vectors.push_back(ring_sine_profile(sites, step * static_cast<double>(j)));
      }
    }
    es.lines.push_back(std::move(line));
  }
  sort_lines(es.lines);
  if (opts.vectors) {
    const ModelMatrix M = system_matrix(es);
    const double fro = M.frobenius();
    for (auto& line : es.lines) validate_line(M, line, opts.residual_tol, fro);
  }
  return es;
}

namespace {

// u_(1) = L^t u_(2) / (lambda - 2 w1) for the alternating models; ring=true
// wraps cyclically (L_ring), otherwise pads with zeros (L_chain).
std::vector<double> alternating_first_component(const std::vector<double>& u2, double d1,
                                                double d2, double denom, std::size_t n,
                                                bool ring) {
  std::vector<double> u1(n);
  for (std::size_t i = 1; i <= n; ++i) {
    const double cur = (i <= u2.size()) ? u2[i - 1] : 0.0;
    double prevv;
    if (i > 1)
      prevv = u2[i - 2];
    else
      prevv = ring ? u2[n - 1] : 0.0;
    u1[i - 1] = (d1 * cur + d2 * prevv) / denom;
  }
  return u1;
}

}  // namespace

EigenSystem alternating_chain(double omega1, double omega2, double d1, double d2,
                              std::size_t n, const SolveOptions& opts) {
  if (d1 * d2 == 0.0) throw InvalidParameter("alternating_chain: couplings must be nonzero");
  if (n < 2) throw InvalidParameter("alternating_chain: need n >= 2");
  PeriodicParameters p{2, {omega1, omega2}, {d1, d2}};
  const std::size_t sites = 2 * n - 1;
  EigenSystem es{p, false, sites, true, {}};

  // boundary line at 2*omega1; u_(1) spans ker L_chain
  {
    SpectralLine line;
    line.value = 2.0 * omega1;
    line.mode = 0;
    line.origin = Origin::Boundary;
    if (opts.vectors) {
      std::vector<double> u1(n);
      double v = 1.0;
      for (std::size_t i = 0; i < n; ++i) {
        u1[i] = v;
        v *= -d1 / d2;
      }
      line.vectors.push_back(
          assemble_from_components<double>({u1, std::vector<double>(n - 1, 0.0)}, 2, sites));
    }
    es.lines.push_back(std::move(line));
  }

  for (std::size_t j = 1; j < n; ++j) {
    const double rj =
        d1 * d1 + d2 * d2 + 2.0 * d1 * d2 * std::cos(kPi * static_cast<double>(j) / static_cast<double>(n));
    const double mid = omega1 + omega2;
    const double disc = std::sqrt((omega1 - omega2) * (omega1 - omega2) + rj);
    for (int band = 0; band < 2; ++band) {
      SpectralLine line;
      line.value = band == 0 ? mid - disc : mid + disc;
      line.mode = static_cast<int>(j);
      line.band = band;
      line.origin = Origin::Bulk;
      if (opts.vectors) {
        const auto u2 = sine_profile(n - 1, kPi * static_cast<double>(j) / static_cast<double>(n));
        const auto u1 =
            alternating_first_component(u2, d1, d2, line.value - 2.0 * omega1, n, false);
        line.vectors.push_back(assemble_from_components<double>({u1, u2}, 2, sites));
      }
      es.lines.push_back(std::move(line));
    }
  }
  sort_lines(es.lines);
  if (opts.vectors) {
    const ModelMatrix M = system_matrix(es);
    const double fro = M.frobenius();
    for (auto& line : es.lines) validate_line(M, line, opts.residual_tol, fro);
  }
  return es;
}

EigenSystem alternating_ring(double omega1, double omega2, double d1, double d2,
                             std::size_t n, const SolveOptions& opts) {
  if (d1 * d2 == 0.0) throw InvalidParameter("alternating_ring: couplings must be nonzero");
  if (n < 2) throw InvalidParameter("alternating_ring: need n >= 2");
  PeriodicParameters p{2, {omega1, omega2}, {d1, d2}};
  const std::size_t sites = 2 * n;
  EigenSystem es{p, true, sites, true, {}};
  const double guard = 1e-10 * (1.0 + std::fabs(2.0 * omega1) + 2.0 * (std::fabs(d1) + std::fabs(d2)));

  for (std::size_t j = 0; 2 * j <= n; ++j) {
    const double theta = 2.0 * kPi * static_cast<double>(j) / static_cast<double>(n);
    const double rj = d1 * d1 + d2 * d2 + 2.0 * d1 * d2 * std::cos(theta);
    const double mid = omega1 + omega2;
    const double disc = std::sqrt((omega1 - omega2) * (omega1 - omega2) + rj);
    const bool symmetric = (j == 0 || 2 * j == n);
    for (int band = 0; band < 2; ++band) {
      SpectralLine line;
      line.value = band == 0 ? mid - disc : mid + disc;
      line.mode = static_cast<int>(j);
      line.band = band;
      line.origin = symmetric ? Origin::Symmetric : Origin::Bulk;
      line.multiplicity = symmetric ? 1 : 2;
      if (opts.vectors) {
        const double denom = line.value - 2.0 * omega1;
        std::vector<std::vector<double>> u2s;
        if (j == 0)
          u2s.push_back(ones_profile(n));
        else if (2 * j == n)
          u2s.push_back(alternating_profile(n));
        else {
          u2s.push_back(cosine_profile(n, theta));
          u2s.push_back(ring_sine_profile(n, theta));
        }
        if (std::fabs(denom) < guard) {
          // r_j = 0 edge (|D1| = |D2| at q = +-1): 2*omega1 enters the
          // spectrum after all. L_ring maps the q-profile to
          // (D1 + D2 q) * profile = 0 there, so the 0/0 limit of the transfer
          // formula puts the profile into one component and zeroes the other;
          // when both roots coincide the two bands take opposite components.
          // Residual validation follows.
          const bool second_of_pair = band == 1 && disc < guard;
          for (const auto& u2 : u2s) {
            std::vector<double> zero(n, 0.0);
            line.vectors.push_back(assemble_from_components<double>(
                second_of_pair ? std::vector<std::vector<double>>{zero, u2}
                               : std::vector<std::vector<double>>{u2, zero},
                2, sites));
          }
        } else {
          for (const auto& u2 : u2s) {
            const auto u1 = alternating_first_component(u2, d1, d2, denom, n, true);
            line.vectors.push_back(assemble_from_components<double>({u1, u2}, 2, sites));
          }
        }
      }
      es.lines.push_back(std::move(line));
    }
  }
  sort_lines(es.lines);
  if (opts.vectors) {
    const ModelMatrix M = system_matrix(es);
    const double fro = M.frobenius();
    for (auto& line : es.lines) validate_line(M, line, opts.residual_tol, fro);
  }
  return es;
}

namespace {

struct PeriodicChainContext {
  const PeriodicParameters& p;
  std::size_t n;
  std::size_t sites;
  ModelMatrix M;
  double fro;
  std::optional<EigenDecomposition> oracle;  // built lazily for fallbacks

  const EigenDecomposition& oracle_eig() {
    if (!oracle) oracle = hermitian_eig(M.dense());
    return *oracle;
  }

  std::vector<double> oracle_vector(double lambda) {
    const auto& eig = oracle_eig();
    std::size_t best = 0;
    for (std::size_t i = 1; i < eig.values.size(); ++i)
      if (std::fabs(eig.values[i] - lambda) < std::fabs(eig.values[best] - lambda)) best = i;
    return real_part_checked(eig.vectors[best]);
  }
};

}  // namespace

EigenSystem periodic_chain(const PeriodicParameters& params, std::size_t n,
                           const SolveOptions& opts) {
  params.validate();
  if (n < 2) throw InvalidParameter("periodic_chain: need n >= 2");
  const int k = params.k;
  const std::size_t sites = static_cast<std::size_t>(k) * n - 1;
  EigenSystem es{params, false, sites, true, {}};

  PeriodicChainContext ctx{params, n, sites,
                           chain_matrix(ChainModel{params, sites}), 0.0, std::nullopt};
  ctx.fro = ctx.M.frobenius();
  const SymTridiag guard_block = build_block(params, 1, k - 1);
  const SymTridiag inner_block = k >= 2 ? build_block(params, 2, k - 1) : SymTridiag{};

  // bulk: for each j the k roots of the secular equation are the eigenvalues
  // of the reduced block at corner phase e^{i pi j / n}
  for (std::size_t j = 1; j < n; ++j) {
    const double theta = kPi * static_cast<double>(j) / static_cast<double>(n);
    const auto block_eig = hermitian_eig(build_hk(params, std::polar(1.0, theta)));
    for (int band = 0; band < k; ++band) {
      SpectralLine line;
      line.value = block_eig.values[static_cast<std::size_t>(band)];
      line.mode = static_cast<int>(j);
      line.band = band;
      line.origin = Origin::Bulk;
      if (opts.vectors) {
        const double den = block_char(params, 1, k - 1, line.value);
        bool ok = std::fabs(den) > singular_shift_guard(guard_block, line.value);
        if (ok) {
          const auto uk = sine_profile(n - 1, theta);
          std::vector<double> front(n, 0.0), plain(n, 0.0);
          for (std::size_t i = 0; i + 1 < n; ++i) {
            front[i + 1] = uk[i];  // R_chain^t: pad in front
            plain[i] = uk[i];      // Q_chain^t: pad at the back
          }
          auto comps = transfer_components(params, line.value, front, plain, uk);
          auto u = assemble_from_components<double>(comps, k, sites);
          if (residual_norm(ctx.M, u, line.value) <=
              opts.residual_tol * std::max(ctx.fro, 1.0) * norm2(u))
            line.vectors.push_back(std::move(u));
          else
            ok = false;
        }
        if (!ok) line.vectors.push_back(ctx.oracle_vector(line.value));
      }
      es.lines.push_back(std::move(line));
    }
  }

  // boundary: the k-1 eigenvalues of H_{1,k-1}, u_(k) = 0
  if (k >= 2) {
    HermitianDense Hb(static_cast<std::size_t>(k - 1));
    for (int a = 0; a < k - 1; ++a) Hb.at(a, a) = guard_block.diag[static_cast<std::size_t>(a)];
    for (int a = 0; a + 2 < k; ++a) {
      Hb.at(a, a + 1) = guard_block.offdiag[static_cast<std::size_t>(a)];
      Hb.at(a + 1, a) = guard_block.offdiag[static_cast<std::size_t>(a)];
    }
    const auto bdry = hermitian_eig(Hb);
    for (int b = 0; b < k - 1; ++b) {
      SpectralLine line;
      line.value = bdry.values[static_cast<std::size_t>(b)];
      line.mode = b;
      line.origin = Origin::Boundary;
      if (opts.vectors) {
        const double inner_det = block_char(params, 2, k - 1, line.value);
        bool ok = k == 2 || std::fabs(inner_det) > singular_shift_guard(inner_block, line.value);
        if (ok) {
          const double alpha = ((k - 1) % 2 == 0 ? 1.0 : -1.0) * partial_coupling_product(params, 1, k - 1);
          const double beta = -inner_det * params.coupling.back();
          const auto u1 = kernel_direction(alpha, beta, n);
          std::vector<std::vector<double>> comps(static_cast<std::size_t>(k));
          comps[0] = u1;
          for (int j = 2; j < k; ++j) {
            const double c = ((j - 1) % 2 == 0 ? 1.0 : -1.0) *
                             partial_coupling_product(params, 1, j - 1) *
                             block_char(params, j + 1, k - 1, line.value) / inner_det;
            auto& cj = comps[static_cast<std::size_t>(j) - 1];
            cj.resize(n);
            for (std::size_t i = 0; i < n; ++i) cj[i] = c * u1[i];
          }
          comps[static_cast<std::size_t>(k) - 1] = std::vector<double>(n - 1, 0.0);
          auto u = assemble_from_components<double>(comps, k, sites);
          if (residual_norm(ctx.M, u, line.value) <=
              opts.residual_tol * std::max(ctx.fro, 1.0) * norm2(u))
            line.vectors.push_back(std::move(u));
          else
            ok = false;
        }
        if (!ok) line.vectors.push_back(ctx.oracle_vector(line.value));
      }
      es.lines.push_back(std::move(line));
    }
  }

  sort_lines(es.lines);
  return es;
}

EigenSystem periodic_ring(const PeriodicParameters& params, std::size_t m,
                          const SolveOptions& opts) {
  params.validate();
  if (m < 2) throw InvalidParameter("periodic_ring: need m >= 2");
  const int k = params.k;
  const std::size_t sites = static_cast<std::size_t>(k) * m;
  EigenSystem es{params, true, sites, true, {}};

  const ModelMatrix M = ring_matrix(RingModel{params, m});
  const double fro = M.frobenius();
  const SymTridiag guard_block = build_block(params, 1, k - 1);

  for (std::size_t l = 0; 2 * l <= m; ++l) {
    const double theta = 2.0 * kPi * static_cast<double>(l) / static_cast<double>(m);
    const Complex q = std::polar(1.0, theta);
    const auto block_eig = hermitian_eig(build_hk(params, q));
    const bool symmetric = (l == 0 || 2 * l == m);
    for (int band = 0; band < k; ++band) {
      SpectralLine line;
      line.value = block_eig.values[static_cast<std::size_t>(band)];
      line.mode = static_cast<int>(l);
      line.band = band;
      line.origin = symmetric ? Origin::Symmetric : Origin::Bulk;
      line.multiplicity = symmetric ? 1 : 2;
      if (opts.vectors) {
        const double den = block_char(params, 1, k - 1, line.value);
        bool ok = std::fabs(den) > singular_shift_guard(guard_block, line.value);
        if (ok) {
          std::vector<std::vector<double>> uks;
          if (l == 0)
            uks.push_back(ones_profile(m));
          else if (2 * l == m)
            uks.push_back(alternating_profile(m));
          else {
            uks.push_back(cosine_profile(m, theta));
            uks.push_back(ring_sine_profile(m, theta));
          }
          std::vector<std::vector<double>> built;
          for (const auto& uk : uks) {
            const auto front = shift_matrix_transpose_apply(std::span<const double>(uk));
            auto comps = transfer_components(params, line.value, front, uk, uk);
            auto u = assemble_from_components<double>(comps, k, sites);
            if (residual_norm(M, u, line.value) >
                opts.residual_tol * std::max(fro, 1.0) * norm2(u)) {
              ok = false;
              break;
            }
            built.push_back(std::move(u));
          }
          if (ok) line.vectors = std::move(built);
        }
        if (!ok) {
          // eigenvector of the reduced block lifted to the invariant
          // subspace: u_{sk+t} = mu_t q^s, realified
          const auto& mu = block_eig.vectors[static_cast<std::size_t>(band)];
          std::vector<Complex> u(sites);
          Complex qs = 1.0;
          for (std::size_t s = 0; s < m; ++s) {
            for (int t = 0; t < k; ++t) u[s * static_cast<std::size_t>(k) + static_cast<std::size_t>(t)] = mu[static_cast<std::size_t>(t)] * qs;
            qs *= q;
          }
          std::vector<std::vector<double>> built;
          if (symmetric) {
            built.push_back(real_part_checked(u));
          } else {
            std::vector<double> re(sites), im(sites);
            for (std::size_t i = 0; i < sites; ++i) {
              re[i] = u[i].real();
              im[i] = u[i].imag();
            }
            built = {std::move(re), std::move(im)};
          }
          for (const auto& v : built)
            if (residual_norm(M, v, line.value) >
                opts.residual_tol * std::max(fro, 1.0) * norm2(v))
              throw DegenerateParameters(
                  "periodic_ring: eigenvector construction failed residual validation");
          line.vectors = std::move(built);
        }
      }
      es.lines.push_back(std::move(line));
    }
  }

  sort_lines(es.lines);
  return es;
}

}  // namespace xyspec
