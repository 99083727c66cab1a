#pragma once

#include <cstddef>
#include <vector>

#include "xyspec/common.hpp"

namespace xyspec {

/// Symmetric tridiagonal matrix, stored as its diagonal and off-diagonal.
/// order() == 0 denotes the empty matrix (determinant 1 by convention).
struct SymTridiag {
  std::vector<double> diag;
  std::vector<double> offdiag;  // size order()-1, empty when order() <= 1

  std::size_t order() const { return diag.size(); }
  bool well_formed() const {
    return diag.empty() ? offdiag.empty() : offdiag.size() == diag.size() - 1;
  }
};

/// Dense Hermitian matrix, row-major complex storage.
struct HermitianDense {
  std::size_t n = 0;
  std::vector<Complex> a;

  HermitianDense() = default;
  explicit HermitianDense(std::size_t order) : n(order), a(order * order) {}

  Complex& at(std::size_t i, std::size_t j) { return a[i * n + j]; }
  const Complex& at(std::size_t i, std::size_t j) const { return a[i * n + j]; }
  double frobenius() const;
  /// Largest |a_ij - conj(a_ji)| over all pairs.
  double hermiticity_defect() const;
};

/// Full spectrum, values ascending, vectors[i] paired with values[i].
struct EigenDecomposition {
  std::vector<double> values;
  std::vector<std::vector<Complex>> vectors;
};

/// det(T - lambda*I) via the three-term recurrence
///   p_s = (d_s - lambda) p_{s-1} - e_{s-1}^2 p_{s-2},  p_{-1} = 0, p_0 = 1.
/// Returns 1 for the empty matrix.
double tridiag_char(const SymTridiag& T, double lambda);

/// Same recurrence with power-of-two rescaling applied whenever an iterate
/// exceeds 1e150, so large orders cannot overflow mid-recurrence.
struct ScaledDet {
  double mantissa = 1.0;
  long exponent = 0;  // base-2
  double value() const;  // mantissa * 2^exponent (may overflow to inf)
};
ScaledDet tridiag_char_scaled(const SymTridiag& T, double lambda);

/// Full eigendecomposition of a Hermitian matrix by cyclic Jacobi rotations.
/// tol scales the Hermiticity check; convergence runs to 1e-14*||M||_F on the
/// off-diagonal mass, with a hard limit of 100 sweeps.
/// Throws NonHermitianInput or NoConvergence.
EigenDecomposition hermitian_eig(const HermitianDense& M, double tol = 1e-12);

/// Degeneracy guard for divisions by det(T - lambda*I):
///   1e-10 * (1+|lambda|)^p * prod_i max(1, |row i| mass).
double singular_shift_guard(const SymTridiag& T, double lambda);

/// Entry (t, s), 1-based, of (T - lambda*I)^{-1}, evaluated through the
/// cofactor expressions
///   P_{t,s} = (-1)^{s+t} det(T_{1..s-1}-x) e_s...e_{t-1} det(T_{t+1..p}-x)
///             / det(T-x),   t > s,
/// and the corresponding diagonal form. Throws SingularShift when
/// |det(T - lambda*I)| falls below singular_shift_guard().
double inverse_tridiag_entry(const SymTridiag& T, double lambda,
                             std::size_t t, std::size_t s);

}  // namespace xyspec
