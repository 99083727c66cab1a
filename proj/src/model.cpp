#include "xyspec/model.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace xyspec {

void PeriodicParameters::validate() const {
  if (k < 1) throw InvalidParameter("k must be a positive integer");
  if (omega.size() != static_cast<std::size_t>(k))
    throw InvalidParameter("omega has " + std::to_string(omega.size()) +
                           " entries, expected k = " + std::to_string(k));
  if (coupling.size() != static_cast<std::size_t>(k))
    throw InvalidParameter("coupling has " + std::to_string(coupling.size()) +
                           " entries, expected k = " + std::to_string(k));
  for (std::size_t i = 0; i < coupling.size(); ++i) {
    if (coupling[i] == 0.0)
      throw InvalidParameter("coupling[" + std::to_string(i) + "] is zero; all couplings must be nonzero");
    if (!std::isfinite(coupling[i]))
      throw InvalidParameter("coupling[" + std::to_string(i) + "] is not finite");
  }
  for (std::size_t i = 0; i < omega.size(); ++i)
    if (!std::isfinite(omega[i]))
      throw InvalidParameter("omega[" + std::to_string(i) + "] is not finite");
}

double PeriodicParameters::omega_at_site(std::size_t site1) const {
  return omega[(site1 - 1) % static_cast<std::size_t>(k)];
}

double PeriodicParameters::coupling_at_bond(std::size_t bond1) const {
  return coupling[(bond1 - 1) % static_cast<std::size_t>(k)];
}

double PeriodicParameters::coupling_product() const {
  double p = 1.0;
  for (double d : coupling) p *= d;
  return p;
}

SymTridiag build_chain(const ChainModel& model) {
  model.params.validate();
  if (model.sites < 1) throw InvalidParameter("chain needs at least one site");
  SymTridiag T;
  T.diag.resize(model.sites);
  T.offdiag.resize(model.sites - 1);
  for (std::size_t i = 1; i <= model.sites; ++i)
    T.diag[i - 1] = 2.0 * model.params.omega_at_site(i);
  for (std::size_t i = 1; i < model.sites; ++i)
    T.offdiag[i - 1] = model.params.coupling_at_bond(i);
  return T;
}

ModelMatrix chain_matrix(const ChainModel& model) {
  return ModelMatrix{build_chain(model), 0.0};
}

ModelMatrix ring_matrix(const RingModel& model) {
  model.params.validate();
  if (model.cells < 2) throw InvalidParameter("ring needs at least two cells");
  ChainModel open{model.params, model.sites()};
  return ModelMatrix{build_chain(open), model.params.coupling.back()};
}

HermitianDense build_ring(const RingModel& model) {
  return ring_matrix(model).dense();
}

SymTridiag build_block(const PeriodicParameters& params, int i, int j) {
  params.validate();
  if (i < 1 || j > params.k || j < i - 1)
    throw DimensionMismatch("build_block: need 1 <= i, j <= k and j >= i-1");
  SymTridiag T;
  if (j < i) return T;
  const std::size_t p = static_cast<std::size_t>(j - i + 1);
  T.diag.resize(p);
  T.offdiag.resize(p - 1);
  for (std::size_t a = 0; a < p; ++a) T.diag[a] = 2.0 * params.omega[i - 1 + a];
  for (std::size_t a = 0; a + 1 < p; ++a) T.offdiag[a] = params.coupling[i - 1 + a];
  return T;
}

double block_char(const PeriodicParameters& params, int i, int j, double lambda) {
  if (j == i - 2) return 0.0;  // p_{-1} of the recurrence
  if (j == i - 1) return 1.0;  // p_0
  return tridiag_char(build_block(params, i, j), lambda);
}

HermitianDense build_hk(const PeriodicParameters& params, Complex q) {
  params.validate();
  if (std::fabs(std::abs(q) - 1.0) > 1e-12)
    throw InvalidParameter("build_hk: corner phase must satisfy |q| = 1");
  const std::size_t k = static_cast<std::size_t>(params.k);
  HermitianDense M(k);
  for (std::size_t a = 0; a < k; ++a) M.at(a, a) = 2.0 * params.omega[a];
  for (std::size_t a = 0; a + 1 < k; ++a) {
    M.at(a, a + 1) = params.coupling[a];
    M.at(a + 1, a) = params.coupling[a];
  }
  // corner phases accumulate onto the tridiagonal part (they coincide with it
  // for k <= 2)
  const double dk = params.coupling[k - 1];
  M.at(0, k - 1) += dk * std::conj(q);
  M.at(k - 1, 0) += dk * q;
  return M;
}

std::size_t component_length(std::size_t n_sites, int residue, int k) {
  if (residue < 1 || residue > k) throw DimensionMismatch("component_length: residue out of range");
  const std::size_t r = static_cast<std::size_t>(residue);
  const std::size_t kk = static_cast<std::size_t>(k);
  return n_sites >= r ? 1 + (n_sites - r) / kk : 0;
}

void ModelMatrix::apply(std::span<const double> x, std::span<double> y) const {
  const std::size_t n = order();
  if (x.size() != n || y.size() != n) throw DimensionMismatch("ModelMatrix::apply: size mismatch");
  for (std::size_t i = 0; i < n; ++i) {
    double s = tri.diag[i] * x[i];
    if (i > 0) s += tri.offdiag[i - 1] * x[i - 1];
    if (i + 1 < n) s += tri.offdiag[i] * x[i + 1];
    y[i] = s;
  }
  if (corner != 0.0 && n >= 2) {
    y[0] += corner * x[n - 1];
    y[n - 1] += corner * x[0];
  }
}

double ModelMatrix::frobenius() const {
  double s = 0.0;
  for (double d : tri.diag) s += d * d;
  for (double e : tri.offdiag) s += 2.0 * e * e;
  s += 2.0 * corner * corner;
  return std::sqrt(s);
}

HermitianDense ModelMatrix::dense() const {
  const std::size_t n = order();
  HermitianDense M(n);
  for (std::size_t i = 0; i < n; ++i) M.at(i, i) = tri.diag[i];
  for (std::size_t i = 0; i + 1 < n; ++i) {
    M.at(i, i + 1) = tri.offdiag[i];
    M.at(i + 1, i) = tri.offdiag[i];
  }
  if (corner != 0.0 && n >= 2) {
    M.at(0, n - 1) += corner;
    M.at(n - 1, 0) += corner;
  }
  return M;
}

PeriodicParameters parse_parameters(const std::string& json_text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    throw InvalidParameter(std::string("parameter file is not valid JSON: ") + e.what());
  }
  if (!j.is_object() || !j.contains("k") || !j.contains("omega") || !j.contains("coupling"))
    throw InvalidParameter("parameter file must be an object with keys k, omega, coupling");
  PeriodicParameters p;
  try {
    p.k = j.at("k").get<int>();
    p.omega = j.at("omega").get<std::vector<double>>();
    p.coupling = j.at("coupling").get<std::vector<double>>();
  } catch (const nlohmann::json::exception& e) {
    throw InvalidParameter(std::string("parameter file has wrong field types: ") + e.what());
  }
  p.validate();
  return p;
}

PeriodicParameters load_parameters(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidParameter("cannot open parameter file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_parameters(buf.str());
}

}  // namespace xyspec
