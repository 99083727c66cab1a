#include "xyspec/compare.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include <json.hpp>

namespace xyspec {

ProjectionResult projection_check(const SpectralLine& chain_line,
                                  const SpectralLine& ring_line,
                                  std::size_t chain_sites) {
  if (chain_line.vectors.size() != 1)
    throw ShapeMismatch("projection_check: chain line must carry one canonical vector");
  // the sine-form representative is the second vector of a ring doublet
  if (ring_line.vectors.size() < static_cast<std::size_t>(ring_line.multiplicity) ||
      ring_line.multiplicity != 2)
    throw ShapeMismatch("projection_check: ring line must be a doublet with stored vectors");
  const auto& u = chain_line.vectors[0];
  const auto& v = ring_line.vectors[1];
  if (u.size() != chain_sites || v.size() <= chain_sites)
    throw ShapeMismatch("projection_check: vector lengths do not match the model pair");

  double peak = 0.0;
  for (double x : u) peak = std::max(peak, std::fabs(x));
  std::size_t anchor = 0;
  while (anchor < u.size() && std::fabs(u[anchor]) <= 0.5 * peak) ++anchor;
  const double scale = v[anchor] / u[anchor];

  double worst = 0.0;
  for (std::size_t i = 0; i < chain_sites; ++i)
    worst = std::max(worst, std::fabs(v[i] - scale * u[i]));
  return {worst, scale};
}

ComparisonReport spectrum_partition(const EigenSystem& chain, const EigenSystem& ring,
                                    double tol) {
  const std::size_t k = static_cast<std::size_t>(chain.params.k);
  if (ring.sites != 2 * (chain.sites + 1))
    throw ShapeMismatch("spectrum_partition: ring must have 2kn sites for a chain with kn-1");

  struct Ref {
    double value;
    std::size_t line;
  };
  std::vector<Ref> bulk, doublets;
  for (std::size_t i = 0; i < chain.lines.size(); ++i)
    if (chain.lines[i].origin == Origin::Bulk) bulk.push_back({chain.lines[i].value, i});
  for (std::size_t i = 0; i < ring.lines.size(); ++i)
    if (ring.lines[i].multiplicity == 2) doublets.push_back({ring.lines[i].value, i});
  std::stable_sort(bulk.begin(), bulk.end(), [](const Ref& a, const Ref& b) { return a.value < b.value; });
  std::stable_sort(doublets.begin(), doublets.end(), [](const Ref& a, const Ref& b) { return a.value < b.value; });

  ComparisonReport rep;
  std::vector<bool> used(doublets.size(), false);
  for (const Ref& c : bulk) {
    // nearest unconsumed ring doublet
    std::size_t best = doublets.size();
    double best_gap = tol;
    for (std::size_t i = 0; i < doublets.size(); ++i) {
      if (used[i]) continue;
      const double gap = std::fabs(doublets[i].value - c.value);
      if (gap <= best_gap) {
        best = i;
        best_gap = gap;
      }
    }
    if (best == doublets.size())
      throw MatchFailure("spectrum_partition: chain bulk eigenvalue " + std::to_string(c.value) +
                         " has no ring partner within tolerance");
    used[best] = true;
    CommonPair pair;
    pair.value = c.value;
    pair.chain_line = c.line;
    pair.ring_line = doublets[best].line;
    if (!chain.lines[c.line].vectors.empty() && !ring.lines[pair.ring_line].vectors.empty()) {
      const auto proj = projection_check(chain.lines[c.line], ring.lines[pair.ring_line], chain.sites);
      pair.projection_residual = proj.residual;
      pair.projection_scale = proj.scale;
      rep.projection_max_err = std::max(rep.projection_max_err, proj.residual);
    }
    rep.common.push_back(pair);
  }

  for (std::size_t i = 0; i < chain.lines.size(); ++i)
    if (chain.lines[i].origin != Origin::Bulk) rep.chain_only.push_back(i);
  for (std::size_t i = 0; i < doublets.size(); ++i)
    if (!used[i])
      throw MatchFailure("spectrum_partition: unmatched ring doublet at " +
                         std::to_string(doublets[i].value));
  for (std::size_t i = 0; i < ring.lines.size(); ++i)
    if (ring.lines[i].multiplicity != 2) rep.ring_only.push_back(i);

  const std::size_t n = (chain.sites + 1) / k;
  if (rep.common.size() != k * (n - 1) || rep.chain_only.size() != k - 1 ||
      rep.ring_only.size() != 2 * k)
    throw MatchFailure("spectrum_partition: partition counts deviate from (k(n-1), k-1, 2k)");
  return rep;
}

namespace {

double checked(double x, const char* side) {
  if (!std::isfinite(x) || std::fabs(x) > 1e280)
    throw OverflowRisk(std::string("determinant_identity_residual: ") + side +
                       " exceeds the overflow budget; reduce n");
  return x;
}

}  // namespace

std::vector<double> determinant_identity_residual(const PeriodicParameters& params,
                                                  std::size_t n,
                                                  std::span<const double> lambda_samples) {
  params.validate();
  const int k = params.k;
  const std::size_t chain_sites = static_cast<std::size_t>(k) * n - 1;
  const ChainModel chain{params, chain_sites};
  const RingModel ring{params, 2 * n};
  const SymTridiag chain_T = build_chain(chain);
  const auto ring_eig = hermitian_eig(ring_matrix(ring).dense());
  const SymTridiag corner_T = build_block(params, 1, k - 1);
  const double dk = params.coupling.back();
  const double prod_d = params.coupling_product();

  std::vector<double> out;
  out.reserve(lambda_samples.size());
  for (const double lam : lambda_samples) {
    const double chain_det = tridiag_char(chain_T, lam);
    const double p_lam = block_char(params, 1, k, lam) - block_char(params, 2, k - 1, lam) * dk * dk;
    const double lhs = checked(chain_det * chain_det * (p_lam - 2.0 * prod_d) * (p_lam + 2.0 * prod_d),
                               "chain side");
    double ring_det = 1.0;
    for (const double mu : ring_eig.values) ring_det *= (mu - lam);
    const double corner_det = tridiag_char(corner_T, lam);
    const double rhs = checked(ring_det * corner_det * corner_det, "ring side");
    out.push_back(std::fabs(lhs - rhs) / std::max({std::fabs(lhs), std::fabs(rhs), 1e-300}));
  }
  return out;
}

std::vector<double> identity_sample_points(const PeriodicParameters& params, std::size_t n,
                                           std::size_t count, std::uint64_t seed) {
  SolveOptions vo;
  vo.vectors = false;
  const auto chain = periodic_chain(params, n, vo);
  const auto ring = periodic_ring(params, 2 * n, vo);
  auto values = sorted_values(chain);
  const auto rv = sorted_values(ring);
  values.insert(values.end(), rv.begin(), rv.end());
  std::sort(values.begin(), values.end());
  const double lo = values.front() - 1.0;
  const double hi = values.back() + 1.0;

  std::mt19937_64 gen(seed);
  const auto unit = [&gen]() { return static_cast<double>(gen() >> 11) * 0x1.0p-53; };
  // keep well clear of the spectrum: a shift at distance g from an oracle
  // eigenvalue costs ~1e-14/g relative error in one product factor
  const double margin = 1e-4 * (1.0 + hi - lo);
  std::vector<double> out;
  while (out.size() < count) {
    const double lam = lo + (hi - lo) * unit();
    bool clear = true;
    for (const double v : values)
      if (std::fabs(lam - v) < margin) {
        clear = false;
        break;
      }
    if (clear) out.push_back(lam);
  }
  return out;
}

ComparisonReport compare_chain_ring(const PeriodicParameters& params, std::size_t n,
                                    std::size_t samples, std::uint64_t seed) {
  const auto chain = periodic_chain(params, n);
  const auto ring = periodic_ring(params, 2 * n);
  const double tol = 1e-8 * (1.0 + system_matrix(ring).frobenius());
  ComparisonReport rep = spectrum_partition(chain, ring, tol);
  if (samples > 0) {
    const auto pts = identity_sample_points(params, n, samples, seed);
    rep.identity_rel_err = determinant_identity_residual(params, n, pts);
    for (const double e : rep.identity_rel_err)
      rep.identity_max_rel_err = std::max(rep.identity_max_rel_err, e);
  }
  return rep;
}

std::string normalize_report(const ComparisonReport& report) {
  nlohmann::ordered_json j;
  j["common"] = nlohmann::ordered_json::array();
  for (const auto& c : report.common) {
    nlohmann::ordered_json e;
    e["value"] = c.value;
    e["chain_line"] = c.chain_line;
    e["ring_line"] = c.ring_line;
    e["projection_residual"] = c.projection_residual;
    e["projection_scale"] = c.projection_scale;
    j["common"].push_back(e);
  }
  j["chain_only"] = report.chain_only;
  j["ring_only"] = report.ring_only;
  j["identity_max_rel_err"] = report.identity_max_rel_err;
  j["projection_max_err"] = report.projection_max_err;
  return j.dump(2) + "\n";
}

}  // namespace xyspec
