#include "xyspec/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace xyspec {

double HermitianDense::frobenius() const {
  double s = 0.0;
  for (const Complex& z : a) s += std::norm(z);
  return std::sqrt(s);
}

double HermitianDense::hermiticity_defect() const {
  double worst = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j)
      worst = std::max(worst, std::abs(at(i, j) - std::conj(at(j, i))));
  return worst;
}

double tridiag_char(const SymTridiag& T, double lambda) {
  return tridiag_char_scaled(T, lambda).value();
}

double ScaledDet::value() const { return std::ldexp(mantissa, static_cast<int>(exponent)); }

ScaledDet tridiag_char_scaled(const SymTridiag& T, double lambda) {
  // p_{-1} = 0, p_0 = 1; both iterates share one scale exponent.
  double prev = 0.0;   // p_{s-2}
  double cur = 1.0;    // p_{s-1}
  long ex = 0;
  const std::size_t p = T.order();
  for (std::size_t s = 0; s < p; ++s) {
    const double e = s > 0 ? T.offdiag[s - 1] : 0.0;
    const double next = (T.diag[s] - lambda) * cur - e * e * prev;
    prev = cur;
    cur = next;
    const double mag = std::max(std::fabs(prev), std::fabs(cur));
    if (mag > 1e150) {
      int sh = 0;
      std::frexp(mag, &sh);
      prev = std::ldexp(prev, -sh);
      cur = std::ldexp(cur, -sh);
      ex += sh;
    }
  }
  return {cur, ex};
}

namespace {

// One two-sided unitary rotation in the (p, q) plane zeroing A[p][q].
// J[p][p] = c, J[p][q] = -conj(s), J[q][p] = s, J[q][q] = c with c real,
// c^2 + |s|^2 = 1; A <- J^H A J, V <- V J.
void jacobi_rotate(HermitianDense& A, std::vector<Complex>& V, std::size_t p,
                   std::size_t q) {
  const std::size_t n = A.n;
  const Complex apq = A.at(p, q);
  const double g = std::abs(apq);
  if (g == 0.0) return;

  const Complex phase = apq / g;
  const double app = A.at(p, p).real();
  const double aqq = A.at(q, q).real();
  const double tau = (aqq - app) / (2.0 * g);
  // smaller-magnitude root of t^2 - 2 tau t - 1 = 0, in the cancellation-free
  // reciprocal form
  const double t = (tau >= 0.0) ? -1.0 / (tau + std::sqrt(tau * tau + 1.0))
                                : 1.0 / (-tau + std::sqrt(tau * tau + 1.0));
  const double c = 1.0 / std::sqrt(1.0 + t * t);
  const Complex s = (t * c) * std::conj(phase);

  // column update: col_p <- c*col_p + s*col_q, col_q <- -conj(s)*col_p + c*col_q
  for (std::size_t r = 0; r < n; ++r) {
    const Complex arp = A.at(r, p);
    const Complex arq = A.at(r, q);
    A.at(r, p) = c * arp + s * arq;
    A.at(r, q) = -std::conj(s) * arp + c * arq;
  }
  // row update with J^H: row_p <- c*row_p + conj(s)*row_q, row_q <- -s*row_p + c*row_q
  for (std::size_t r = 0; r < n; ++r) {
    const Complex apr = A.at(p, r);
    const Complex aqr = A.at(q, r);
    A.at(p, r) = c * apr + std::conj(s) * aqr;
    A.at(q, r) = -s * apr + c * aqr;
  }
  A.at(p, q) = 0.0;
  A.at(q, p) = 0.0;
  A.at(p, p) = Complex(A.at(p, p).real(), 0.0);
  A.at(q, q) = Complex(A.at(q, q).real(), 0.0);

  for (std::size_t r = 0; r < n; ++r) {
    const Complex vrp = V[r * n + p];
    const Complex vrq = V[r * n + q];
    V[r * n + p] = c * vrp + s * vrq;
    V[r * n + q] = -std::conj(s) * vrp + c * vrq;
  }
}

double offdiag_norm(const HermitianDense& A) {
  double s = 0.0;
  for (std::size_t i = 0; i < A.n; ++i)
    for (std::size_t j = i + 1; j < A.n; ++j) s += std::norm(A.at(i, j));
  return std::sqrt(2.0 * s);
}

}  // namespace

EigenDecomposition hermitian_eig(const HermitianDense& M, double tol) {
  if (M.a.size() != M.n * M.n)
    throw DimensionMismatch("hermitian_eig: storage does not match order");
  const std::size_t n = M.n;
  const double fro = M.frobenius();
  if (M.hermiticity_defect() > tol * std::max(1.0, fro))
    throw NonHermitianInput("hermitian_eig: input is not Hermitian within tolerance");

  HermitianDense A(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      A.at(i, j) = 0.5 * (M.at(i, j) + std::conj(M.at(j, i)));

  std::vector<Complex> V(n * n, Complex(0.0, 0.0));
  for (std::size_t i = 0; i < n; ++i) V[i * n + i] = 1.0;

  const double stop = 1e-14 * std::max(fro, 1e-300);
  constexpr int kMaxSweeps = 100;
  bool converged = n < 2;
  for (int sweep = 0; sweep < kMaxSweeps && !converged; ++sweep) {
    if (offdiag_norm(A) <= stop) {
      converged = true;
      break;
    }
    for (std::size_t p = 0; p + 1 < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) jacobi_rotate(A, V, p, q);
  }
  if (!converged && offdiag_norm(A) > stop)
    throw NoConvergence("hermitian_eig: 100 Jacobi sweeps without convergence");

  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    return A.at(a, a).real() < A.at(b, b).real();
  });

  EigenDecomposition out;
  out.values.resize(n);
  out.vectors.assign(n, std::vector<Complex>(n));
  for (std::size_t c = 0; c < n; ++c) {
    out.values[c] = A.at(idx[c], idx[c]).real();
    for (std::size_t r = 0; r < n; ++r) out.vectors[c][r] = V[r * n + idx[c]];
  }
  return out;
}

double singular_shift_guard(const SymTridiag& T, double lambda) {
  const std::size_t p = T.order();
  double prod = 1.0;
  for (std::size_t i = 0; i < p; ++i) {
    double row = std::fabs(T.diag[i]);
    if (i > 0) row += std::fabs(T.offdiag[i - 1]);
    if (i + 1 < p) row += std::fabs(T.offdiag[i]);
    prod *= std::max(1.0, row);
  }
  return 1e-10 * std::pow(1.0 + std::fabs(lambda), static_cast<double>(p)) * prod;
}

namespace {

// det of the principal block rows/cols [lo, hi] (1-based, inclusive) of T - lambda*I;
// 1 for an empty range.
double sub_char(const SymTridiag& T, double lambda, std::size_t lo, std::size_t hi) {
  if (hi + 1 <= lo) return 1.0;
  SymTridiag S;
  S.diag.assign(T.diag.begin() + (lo - 1), T.diag.begin() + hi);
  if (hi > lo) S.offdiag.assign(T.offdiag.begin() + (lo - 1), T.offdiag.begin() + (hi - 1));
  return tridiag_char(S, lambda);
}

}  // namespace

double inverse_tridiag_entry(const SymTridiag& T, double lambda,
                             std::size_t t, std::size_t s) {
  const std::size_t p = T.order();
  if (!T.well_formed() || t < 1 || t > p || s < 1 || s > p)
    throw DimensionMismatch("inverse_tridiag_entry: index out of range");
  const double den = tridiag_char(T, lambda);
  if (std::fabs(den) <= singular_shift_guard(T, lambda))
    throw SingularShift("inverse_tridiag_entry: det(T - lambda I) below degeneracy guard");
  if (t < s) std::swap(t, s);
  if (t == s)
    return sub_char(T, lambda, 1, s - 1) * sub_char(T, lambda, t + 1, p) / den;
  double prod = 1.0;
  for (std::size_t i = s; i < t; ++i) prod *= T.offdiag[i - 1];
  const double sign = ((s + t) % 2 == 0) ? 1.0 : -1.0;
  return sign * sub_char(T, lambda, 1, s - 1) * prod * sub_char(T, lambda, t + 1, p) / den;
}

}  // namespace xyspec
