#pragma once

#include <cmath>
#include <complex>
#include <stdexcept>

#include "ampbench/types.hpp"

namespace ampbench {

/// Coherent state |alpha> truncated to `dim` levels:
/// amplitudes[n] = exp(-|alpha|^2/2) alpha^n / sqrt(n!).
/// The recurrence keeps every intermediate bounded, so large |alpha| merely
/// underflows to zero weight inside the truncation window.
inline FockVector coherent_state(Complex alpha, FockDim dim) {
  Vector amp(dim.d);
  Complex c = std::exp(Complex(-0.5 * std::norm(alpha), 0.0));
  for (int n = 0; n < dim.d; ++n) {
    amp[n] = c;
    c *= alpha / std::sqrt(static_cast<double>(n + 1));
  }
  return FockVector{std::move(amp)};
}

/// Exact overlap <alpha|beta> = exp((-|beta|^2 - |alpha|^2 + 2 conj(alpha) beta)/2).
inline Complex coherent_overlap(Complex alpha, Complex beta) {
  return std::exp(0.5 * (-std::norm(beta) - std::norm(alpha) +
                         2.0 * std::conj(alpha) * beta));
}

/// Thermal state (1-x) sum_n x^n |n><n| truncated to `dim` levels.
/// Trace equals 1 - x^dim.
inline FockOperator thermal_state(double x, FockDim dim) {
  if (x < 0.0 || x >= 1.0)
    throw std::domain_error(
        "thermal_state: parameter must satisfy 0 <= x < 1, got " +
        std::to_string(x));
  Matrix m = Matrix::Zero(dim.d, dim.d);
  double w = 1.0 - x;
  for (int n = 0; n < dim.d; ++n) {
    m(n, n) = w;
    w *= x;
  }
  return FockOperator{std::move(m), true};
}

struct ModeOperators {
  Matrix annihilation;
  Matrix creation;
  Matrix number;
};

/// Single-mode ladder operators: annihilation[n-1, n] = sqrt(n),
/// creation = annihilation^dagger, number = diag(0..dim-1).
inline ModeOperators mode_operators(FockDim dim) {
  if (dim.d < 2)
    throw std::invalid_argument("mode_operators: need dim >= 2");
  Matrix a = Matrix::Zero(dim.d, dim.d);
  Matrix n = Matrix::Zero(dim.d, dim.d);
  for (int k = 1; k < dim.d; ++k) a(k - 1, k) = std::sqrt(static_cast<double>(k));
  for (int k = 0; k < dim.d; ++k) n(k, k) = static_cast<double>(k);
  Matrix adag = a.adjoint();
  return ModeOperators{std::move(a), std::move(adag), std::move(n)};
}

/// Kronecker product with the library's flattened (m, p) index convention:
/// element ((m,p),(n,q)) = A[m,n] * B[p,q].
inline TwoModeOperator tensor_product(const Matrix& a, const Matrix& b) {
  const int da = static_cast<int>(a.rows());
  const int db = static_cast<int>(b.rows());
  Matrix out(da * db, da * db);
  for (int m = 0; m < da; ++m)
    for (int n = 0; n < da; ++n)
      out.block(m * db, n * db, db, db) = a(m, n) * b;
  return TwoModeOperator{std::move(out), da, db};
}

enum class Mode { Output, Input };

/// Partial trace over one mode of a two-mode operator. Preserves the trace.
inline FockOperator partial_trace(const TwoModeOperator& op, Mode keep) {
  const int dm = op.dim_out;
  const int dp = op.dim_in;
  if (keep == Mode::Output) {
    Matrix out = Matrix::Zero(dm, dm);
    for (int m = 0; m < dm; ++m)
      for (int n = 0; n < dm; ++n)
        for (int p = 0; p < dp; ++p) out(m, n) += op.matrix(m * dp + p, n * dp + p);
    return FockOperator{std::move(out), false};
  }
  Matrix out = Matrix::Zero(dp, dp);
  for (int p = 0; p < dp; ++p)
    for (int q = 0; q < dp; ++q)
      for (int m = 0; m < dm; ++m) out(p, q) += op.matrix(m * dp + p, m * dp + q);
  return FockOperator{std::move(out), false};
}

struct UnitaryResult {
  Matrix matrix;
  double unitarity_defect;
};

/// exp(K) for an anti-Hermitian generator K, via eigendecomposition of the
/// Hermitian matrix iK (generators here are normal, so this is exact up to
/// the eigensolver). Rejects inputs with K + K^dagger further than 1e-10
/// from zero.
inline UnitaryResult unitary_from_generator(const Matrix& k) {
  const double scale = std::max(1.0, k.cwiseAbs().maxCoeff());
  const double anti_defect = (k + k.adjoint()).cwiseAbs().maxCoeff();
  if (anti_defect > 1e-10 * scale)
    throw std::invalid_argument(
        "unitary_from_generator: generator is not anti-Hermitian (defect " +
        std::to_string(anti_defect) + ")");
  Matrix h = Complex(0.0, 1.0) * k;
  h = 0.5 * (h + Matrix(h.adjoint()));
  Eigen::SelfAdjointEigenSolver<Matrix> es(h);
  if (es.info() != Eigen::Success)
    throw std::runtime_error("unitary_from_generator: eigensolver failed");
  Vector phases(h.rows());
  for (int j = 0; j < h.rows(); ++j)
    phases[j] = std::exp(Complex(0.0, -es.eigenvalues()[j]));
  Matrix u = es.eigenvectors() * phases.asDiagonal() *
             es.eigenvectors().adjoint();
  const int n = static_cast<int>(u.rows());
  double defect = (u * u.adjoint() - Matrix::Identity(n, n)).cwiseAbs().maxCoeff();
  return UnitaryResult{std::move(u), defect};
}

/// Displacement operator exp(alpha a^dagger - conj(alpha) a) on `dim` levels.
inline Matrix displacement_operator(Complex alpha, FockDim dim) {
  ModeOperators ops = mode_operators(dim.d >= 2 ? dim : FockDim(2));
  Matrix k = alpha * ops.creation - std::conj(alpha) * ops.annihilation;
  return unitary_from_generator(k).matrix;
}

struct DominantEigen {
  double value = 0.0;
  Vector vector;
  int iterations = 0;
};

/// Largest eigenvalue of a Hermitian PSD operator by power iteration.
/// Default start vector: normalized all-ones plus a deterministic
/// perturbation, so the iteration cannot begin orthogonal to the dominant
/// eigenvector. A caller-supplied start (e.g. a vector already known to
/// have a large Rayleigh quotient) is used instead when given; for PSD
/// operators the Rayleigh quotients then never drop below its value.
/// Convergence test: |lambda_{k+1} - lambda_k| < tol * lambda_k.
/// Throws ConvergenceError (carrying the last iterate) at the iteration cap.
template <typename MatrixType>
DominantEigen dominant_eigenvalue(const MatrixType& h, double tol,
                                  int max_iterations = 100000,
                                  const Vector* start = nullptr) {
  const int n = static_cast<int>(h.rows());
  Vector v(n);
  if (start != nullptr) {
    v = *start;
  } else {
    for (int i = 0; i < n; ++i)
      v[i] =
          Complex(1.0 + 0.01 * std::cos(0.7 * i), 0.01 * std::sin(1.3 * i + 0.4));
  }
  v.normalize();

  double lambda_prev = 0.0;
  for (int it = 1; it <= max_iterations; ++it) {
    Vector w = h * v;
    const double wn = w.norm();
    if (wn < 1e-300) return DominantEigen{0.0, v, it};  // (numerically) zero operator
    const double lambda = (v.dot(w)).real();
    if (it > 1 && std::abs(lambda - lambda_prev) <
                      tol * std::max(std::abs(lambda), 1e-300)) {
      v = w / wn;
      return DominantEigen{lambda, std::move(v), it};
    }
    lambda_prev = lambda;
    v = w / wn;
  }
  throw ConvergenceError("dominant_eigenvalue: no convergence after cap",
                         lambda_prev, max_iterations);
}

/// Tr[H^p] by repeated multiplication.
inline double trace_power(const Matrix& h, int p) {
  if (p < 1) throw std::invalid_argument("trace_power: p must be >= 1");
  if (p == 1) return h.trace().real();
  Matrix acc = h;
  for (int k = 1; k < p - 1; ++k) acc = acc * h;
  // last product folded into the trace
  return (acc.cwiseProduct(h.transpose())).sum().real();
}

}  // namespace ampbench
