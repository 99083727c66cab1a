#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "xyspec/linalg.hpp"

namespace xyspec {

/// One period of Larmor frequencies omega_1..omega_k and nearest-neighbor
/// couplings D_1..D_k. Couplings must all be nonzero.
struct PeriodicParameters {
  int k = 1;
  std::vector<double> omega;
  std::vector<double> coupling;

  void validate() const;  // throws InvalidParameter, naming the offending entry
  double omega_at_site(std::size_t site1) const;     // 1-based site, cycles mod k
  double coupling_at_bond(std::size_t bond1) const;  // 1-based bond (site, site+1)
  double coupling_product() const;                   // D_1 * ... * D_k
};

/// Open chain with `sites` spins; matrix is tridiagonal.
struct ChainModel {
  PeriodicParameters params;
  std::size_t sites = 1;
};

/// Closed ring of `cells` full periods (k*cells sites); matrix is the chain
/// matrix plus corner couplings D_k.
struct RingModel {
  PeriodicParameters params;
  std::size_t cells = 2;
  std::size_t sites() const { return cells * static_cast<std::size_t>(params.k); }
};

SymTridiag build_chain(const ChainModel& model);
HermitianDense build_ring(const RingModel& model);

/// Block H_{i,j} with coefficients 2w_i..2w_j, D_i..D_{j-1} (1-based,
/// 1 <= i, j <= k, j >= i-1; j = i-1 gives the empty matrix).
SymTridiag build_block(const PeriodicParameters& params, int i, int j);

/// det(H_{i,j} - lambda*I) extended by the recurrence boundary values:
/// 1 for j = i-1 and 0 for j = i-2.
double block_char(const PeriodicParameters& params, int i, int j, double lambda);

/// Reduced k x k block H_k(q): tridiagonal part H_{1,k} plus corner phases
/// D_k/q (top right) and D_k*q (bottom left), |q| = 1. For k = 1 the corner
/// terms land on the single diagonal entry: H_1(q) = [2w_1 + D_1(q + 1/q)].
HermitianDense build_hk(const PeriodicParameters& params, Complex q);

/// Length of component u_(j) of a vector with n_sites coordinates.
std::size_t component_length(std::size_t n_sites, int residue, int k);

/// u_(j) = (u_j, u_{j+k}, u_{j+2k}, ...), residue 1-based in 1..k.
template <class T>
std::vector<T> extract_component(std::span<const T> u, int residue, int k) {
  if (residue < 1 || residue > k) throw DimensionMismatch("extract_component: residue out of range");
  std::vector<T> out;
  for (std::size_t i = static_cast<std::size_t>(residue) - 1; i < u.size();
       i += static_cast<std::size_t>(k))
    out.push_back(u[i]);
  return out;
}

/// Inverse of extract_component over all residues.
template <class T>
std::vector<T> assemble_from_components(const std::vector<std::vector<T>>& components,
                                        int k, std::size_t n_sites) {
  if (components.size() != static_cast<std::size_t>(k))
    throw DimensionMismatch("assemble_from_components: expected one component per residue");
  std::vector<T> u(n_sites);
  for (int j = 1; j <= k; ++j) {
    const auto& c = components[static_cast<std::size_t>(j) - 1];
    if (c.size() != component_length(n_sites, j, k))
      throw DimensionMismatch("assemble_from_components: component " + std::to_string(j) +
                              " has wrong length");
    std::size_t i = static_cast<std::size_t>(j) - 1;
    for (const T& x : c) {
      u[i] = x;
      i += static_cast<std::size_t>(k);
    }
  }
  return u;
}

/// Cyclic shift (T_N v)_i = v_{i+1 mod N}, applied without forming T_N.
template <class T>
std::vector<T> shift_matrix_apply(std::span<const T> v) {
  std::vector<T> out(v.size());
  if (v.empty()) return out;
  for (std::size_t i = 0; i + 1 < v.size(); ++i) out[i] = v[i + 1];
  out[v.size() - 1] = v[0];
  return out;
}

/// (T_N^t v)_i = v_{i-1 mod N}.
template <class T>
std::vector<T> shift_matrix_transpose_apply(std::span<const T> v) {
  std::vector<T> out(v.size());
  if (v.empty()) return out;
  out[0] = v[v.size() - 1];
  for (std::size_t i = 1; i < v.size(); ++i) out[i] = v[i - 1];
  return out;
}

/// Chain or ring matrix in structured form: tridiagonal part plus an optional
/// corner coupling. Solvers and residual checks work on this; dense() exists
/// for the oracle.
struct ModelMatrix {
  SymTridiag tri;
  double corner = 0.0;  // D_k for rings, 0 for chains
  std::size_t order() const { return tri.order(); }
  void apply(std::span<const double> x, std::span<double> y) const;  // y = M x
  double frobenius() const;
  HermitianDense dense() const;
};

ModelMatrix chain_matrix(const ChainModel& model);
ModelMatrix ring_matrix(const RingModel& model);

/// Parameter file: {"k": int, "omega": [k reals], "coupling": [k reals]}.
PeriodicParameters parse_parameters(const std::string& json_text);
PeriodicParameters load_parameters(const std::string& path);

}  // namespace xyspec
