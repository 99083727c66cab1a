// Command-line front end: spectra, eigenvectors, chain/ring comparison,
// one-magnon dynamics, and the randomized verification suite.

#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "xyspec/compare.hpp"
#include "xyspec/dynamics.hpp"
#include "xyspec/solver.hpp"
#include "xyspec/verify.hpp"

namespace {

using namespace xyspec;

std::string num17(double x) {
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

constexpr std::size_t kOracleCap = 4096;
constexpr std::size_t kClosedCap = 1000000;

struct SpectrumArgs {
  std::string model = "chain";
  std::string params_path;
  std::size_t sites = 0;
  std::size_t cells = 0;
  std::string method = "closed";
  std::string format = "csv";
};

// closed-form system for the requested geometry; n/m derived from sites/cells
EigenSystem closed_system(const PeriodicParameters& p, const std::string& model,
                          std::size_t sites, std::size_t cells, bool want_vectors) {
  SolveOptions opts;
  opts.vectors = want_vectors;
  const std::size_t k = static_cast<std::size_t>(p.k);
  if (model == "chain") {
    if (sites == 0) throw InvalidParameter("chain model needs --sites");
    if (p.k == 1) return periodic_chain(p, sites + 1, opts);
    if ((sites + 1) % k != 0 || sites + 1 < 2 * k)
      throw InvalidParameter("closed-form k-periodic chains need N = k*n - 1 sites with n >= 2 (k = " +
                             std::to_string(p.k) + ")");
    return periodic_chain(p, (sites + 1) / k, opts);
  }
  if (cells == 0) {
    if (sites == 0) throw InvalidParameter("ring model needs --cells (or --sites = k*cells)");
    if (sites % k != 0)
      throw InvalidParameter("ring sites must be a multiple of k; pass --cells instead");
    cells = sites / k;
  }
  return periodic_ring(p, cells, opts);
}

EigenSystem oracle_system(const PeriodicParameters& p, const std::string& model,
                          std::size_t sites, std::size_t cells) {
  if (model == "chain") {
    if (sites == 0) throw InvalidParameter("chain model needs --sites");
    return oracle_eigensystem(ChainModel{p, sites});
  }
  if (cells == 0) {
    if (sites == 0 || sites % static_cast<std::size_t>(p.k) != 0)
      throw InvalidParameter("ring model needs --cells");
    cells = sites / static_cast<std::size_t>(p.k);
  }
  return oracle_eigensystem(RingModel{p, cells});
}

int cmd_spectrum(const SpectrumArgs& a) {
  const PeriodicParameters p = load_parameters(a.params_path);
  const std::size_t n_sites = a.model == "chain" ? a.sites : a.cells * static_cast<std::size_t>(p.k);
  if ((a.method == "oracle" || a.method == "both") && n_sites > kOracleCap)
    throw InvalidParameter("oracle method is limited to " + std::to_string(kOracleCap) + " sites");
  if (n_sites > kClosedCap)
    throw InvalidParameter("closed-form method is limited to " + std::to_string(kClosedCap) + " sites");
  const bool vectors = false;

  std::optional<EigenSystem> closed, oracle;
  if (a.method == "closed" || a.method == "both")
    closed = closed_system(p, a.model, a.sites, a.cells, vectors);
  if (a.method == "oracle" || a.method == "both")
    oracle = oracle_system(p, a.model, a.sites, a.cells);

  double max_delta = 0.0;
  if (closed && oracle) {
    const auto cv = sorted_values(*closed);
    const auto ov = sorted_values(*oracle);
    for (std::size_t i = 0; i < cv.size(); ++i)
      max_delta = std::max(max_delta, std::fabs(cv[i] - ov[i]));
  }
  const EigenSystem& es = closed ? *closed : *oracle;

  if (a.format == "json") {
    nlohmann::ordered_json j;
    j["model"] = a.model;
    j["sites"] = es.sites;
    j["method"] = es.closed_form ? "closed" : "oracle";
    j["lines"] = nlohmann::ordered_json::array();
    for (const auto& l : es.lines) {
      nlohmann::ordered_json e;
      e["value"] = l.value;
      e["multiplicity"] = l.multiplicity;
      e["mode"] = l.mode;
      e["band"] = l.band;
      e["origin"] = origin_name(l.origin);
      j["lines"].push_back(e);
    }
    if (closed && oracle) j["max_delta_vs_oracle"] = max_delta;
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << "value,multiplicity,mode,band,origin\n";
    for (const auto& l : es.lines)
      std::cout << num17(l.value) << ',' << l.multiplicity << ',' << l.mode << ',' << l.band << ','
                << origin_name(l.origin) << "\n";
    if (closed && oracle) std::cout << "# max_delta_vs_oracle " << num17(max_delta) << "\n";
  }
  return 0;
}

int cmd_eigvecs(const SpectrumArgs& a, std::size_t index, bool orthonormal) {
  const PeriodicParameters p = load_parameters(a.params_path);
  const std::size_t n_sites = a.model == "chain" ? a.sites : a.cells * static_cast<std::size_t>(p.k);
  if (n_sites > kOracleCap)
    throw InvalidParameter("eigenvector output is limited to " + std::to_string(kOracleCap) + " sites");
  EigenSystem es = a.method == "oracle" ? oracle_system(p, a.model, a.sites, a.cells)
                                        : closed_system(p, a.model, a.sites, a.cells, true);
  if (index >= es.lines.size())
    throw InvalidParameter("line index " + std::to_string(index) + " out of range (0.." +
                           std::to_string(es.lines.size() - 1) + ")");
  const SpectralLine& line = es.lines[index];
  std::vector<std::vector<double>> vecs = line.vectors;
  if (orthonormal) {
    // normalized, Gram-Schmidt within the line
    for (std::size_t i = 0; i < vecs.size(); ++i) {
      for (std::size_t j = 0; j < i; ++j) {
        double c = 0.0;
        for (std::size_t s = 0; s < vecs[i].size(); ++s) c += vecs[i][s] * vecs[j][s];
        for (std::size_t s = 0; s < vecs[i].size(); ++s) vecs[i][s] -= c * vecs[j][s];
      }
      double nrm = 0.0;
      for (const double x : vecs[i]) nrm += x * x;
      nrm = std::sqrt(nrm);
      for (double& x : vecs[i]) x /= nrm;
    }
  }
  std::cout << "# value " << num17(line.value) << " multiplicity " << line.multiplicity
            << " mode " << line.mode << " band " << line.band << " origin "
            << origin_name(line.origin) << "\n";
  std::cout << "site";
  for (std::size_t v = 1; v <= vecs.size(); ++v) std::cout << ",v" << v;
  std::cout << "\n";
  for (std::size_t s = 0; s < es.sites; ++s) {
    std::cout << s + 1;
    for (const auto& v : vecs) std::cout << ',' << num17(v[s]);
    std::cout << "\n";
  }
  return 0;
}

int cmd_compare(const std::string& params_path, std::size_t n, std::size_t samples,
                std::uint64_t seed, const std::string& format) {
  const PeriodicParameters p = load_parameters(params_path);
  const ComparisonReport rep = compare_chain_ring(p, n, samples, seed);
  if (format == "csv") {
    std::cout << "value,chain_line,ring_line,projection_residual,projection_scale\n";
    for (const auto& c : rep.common)
      std::cout << num17(c.value) << ',' << c.chain_line << ',' << c.ring_line << ','
                << num17(c.projection_residual) << ',' << num17(c.projection_scale) << "\n";
    std::cout << "# identity_max_rel_err " << num17(rep.identity_max_rel_err) << "\n";
    std::cout << "# projection_max_err " << num17(rep.projection_max_err) << "\n";
  } else {
    std::cout << normalize_report(rep);
  }
  double worst_scale = 0.0;
  for (const auto& c : rep.common)
    worst_scale = std::max(worst_scale, std::fabs(c.projection_scale - 1.0));
  const bool ok = rep.identity_max_rel_err <= 1e-8 && rep.projection_max_err <= 1e-9 &&
                  worst_scale <= 1e-9;
  return ok ? 0 : 1;
}

int cmd_dynamics(const std::string& params_path, std::size_t n, std::size_t site,
                 double tmax, std::size_t steps, double threshold, bool control) {
  const PeriodicParameters p = load_parameters(params_path);
  const std::size_t chain_sites = static_cast<std::size_t>(p.k) * n - 1;
  if (2 * chain_sites + 2 > kOracleCap)
    throw InvalidParameter("dynamics is limited to " + std::to_string(kOracleCap / 2) + " ring sites");
  if (tmax <= 0.0) {
    double dmax = 0.0;
    for (const double d : p.coupling) dmax = std::max(dmax, std::fabs(d));
    tmax = static_cast<double>(chain_sites) / (2.0 * dmax);
  }
  PropagatorSeries series;
  if (control) {
    const auto chain = periodic_chain(p, n);
    const std::size_t probe = site == 0 ? (chain_sites + 1) / 2 : site;
    series = divergence_series(chain, chain, probe, threshold, tmax, steps);
  } else {
    series = boundary_divergence(p, n, site, threshold, tmax, steps);
  }
  std::cout << "t,re_chain,im_chain,re_ring,im_ring,abs_diff\n";
  for (std::size_t i = 0; i < series.times.size(); ++i)
    std::cout << num17(series.times[i]) << ',' << num17(series.chain_amp[i].real()) << ','
              << num17(series.chain_amp[i].imag()) << ',' << num17(series.ring_amp[i].real())
              << ',' << num17(series.ring_amp[i].imag()) << ',' << num17(series.abs_diff[i])
              << "\n";
  std::cout << "# divergence_time " << num17(series.divergence_time) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact spectra and one-magnon dynamics of k-periodic XY chains and rings"};
  app.require_subcommand(1);

  SpectrumArgs sa;
  auto* spectrum = app.add_subcommand("spectrum", "Eigenvalues of a chain or ring model");
  spectrum->add_option("--model", sa.model, "chain|ring")->check(CLI::IsMember({"chain", "ring"}));
  spectrum->add_option("--params", sa.params_path, "parameter JSON file")->required();
  spectrum->add_option("--sites", sa.sites, "number of sites (chain)");
  spectrum->add_option("--cells", sa.cells, "number of cells (ring; sites = k*cells)");
  spectrum->add_option("--method", sa.method, "closed|oracle|both")
      ->check(CLI::IsMember({"closed", "oracle", "both"}));
  spectrum->add_option("--format", sa.format, "csv|json")->check(CLI::IsMember({"csv", "json"}));

  SpectrumArgs va;
  std::size_t vec_index = 0;
  bool orthonormal = false;
  auto* eigvecs = app.add_subcommand("eigvecs", "Eigenvectors of one spectral line");
  eigvecs->add_option("--model", va.model, "chain|ring")->check(CLI::IsMember({"chain", "ring"}));
  eigvecs->add_option("--params", va.params_path, "parameter JSON file")->required();
  eigvecs->add_option("--sites", va.sites, "number of sites (chain)");
  eigvecs->add_option("--cells", va.cells, "number of cells (ring)");
  eigvecs->add_option("--method", va.method, "closed|oracle")
      ->check(CLI::IsMember({"closed", "oracle"}));
  eigvecs->add_option("--index", vec_index, "line index, 0-based in ascending order")->required();
  auto* ortho_flag = eigvecs->add_flag("--orthonormal", orthonormal, "emit an orthonormal basis of the line");
  eigvecs->add_flag("--canonical", "emit the canonical closed-form vectors (default)")
      ->excludes(ortho_flag);

  std::string cp_params;
  std::size_t cp_n = 3, cp_samples = 20;
  std::uint64_t cp_seed = 20070310;
  std::string cp_format = "json";
  auto* compare = app.add_subcommand("compare", "Chain (kn-1 sites) vs ring (2kn sites) relations");
  compare->add_option("--params", cp_params, "parameter JSON file")->required();
  compare->add_option("--n", cp_n, "cells parameter n (chain gets k*n-1 sites)")
      ->check(CLI::Range(static_cast<std::size_t>(2), static_cast<std::size_t>(100000)));
  compare->add_option("--samples", cp_samples, "number of identity sample shifts");
  compare->add_option("--seed", cp_seed, "seed for sample shifts");
  compare->add_option("--format", cp_format, "json|csv")->check(CLI::IsMember({"json", "csv"}));

  std::string dy_params;
  std::size_t dy_n = 16, dy_site = 0, dy_steps = 512;
  double dy_tmax = 0.0, dy_threshold = 1e-3;
  bool dy_control = false;
  auto* dynamics = app.add_subcommand("dynamics", "Chain vs ring propagator divergence");
  dynamics->add_option("--params", dy_params, "parameter JSON file")->required();
  dynamics->add_option("--n", dy_n, "cells parameter n")->check(CLI::Range(2, 100000));
  dynamics->add_option("--site", dy_site, "probe site, 1-based (default: middle of the chain)");
  dynamics->add_option("--tmax", dy_tmax, "time horizon (default: ballistic estimate)");
  dynamics->add_option("--steps", dy_steps, "grid intervals");
  dynamics->add_option("--threshold", dy_threshold, "divergence threshold on |delta G|");
  dynamics->add_flag("--control", dy_control, "run chain vs chain instead of chain vs ring");

  VerifyOptions vo;
  auto* verify = app.add_subcommand("verify", "Randomized property suite over all invariants");
  verify->add_option("--seed", vo.seed, "RNG seed");
  verify->add_option("--trials", vo.trials, "instances per family")->check(CLI::Range(1, 100000));
  verify->add_option("--kmax", vo.kmax, "largest period")->check(CLI::Range(1, 16));
  verify->add_flag("--inject-fault", vo.inject_fault)->group("");

  try {
    app.parse(argc, argv);
    if (spectrum->parsed()) return cmd_spectrum(sa);
    if (eigvecs->parsed()) return cmd_eigvecs(va, vec_index, orthonormal);
    if (compare->parsed()) return cmd_compare(cp_params, cp_n, cp_samples, cp_seed, cp_format);
    if (dynamics->parsed())
      return cmd_dynamics(dy_params, dy_n, dy_site, dy_tmax, dy_steps, dy_threshold, dy_control);
    if (verify->parsed()) return print_verify_report(std::cout, run_verify(vo), vo);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const InvalidParameter& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const DimensionMismatch& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
