#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace ampbench {

using Complex = std::complex<double>;
using Vector = Eigen::VectorXcd;
using Matrix = Eigen::MatrixXcd;

/// Truncation dimension of a single-mode Fock space (levels 0..d-1).
struct FockDim {
  int d;
  FockDim(int dim) : d(dim) {
    if (dim < 1)
      throw std::invalid_argument("FockDim: dimension must be >= 1, got " +
                                  std::to_string(dim));
  }
  operator int() const { return d; }
};

/// Pure state on a truncated Fock space. Physically prepared states carry
/// norm <= 1 (truncation only removes weight).
struct FockVector {
  Vector amplitudes;

  int dim() const { return static_cast<int>(amplitudes.size()); }
  double squared_norm() const { return amplitudes.squaredNorm(); }
};

/// Dense operator on a truncated Fock space.
struct FockOperator {
  Matrix matrix;
  bool hermitian = false;

  int dim() const { return static_cast<int>(matrix.rows()); }
  double trace() const { return matrix.trace().real(); }
};

/// Operator on the tensor product of an output mode and an input mode.
/// Index convention, fixed across the whole library: the pair (m, p) with
/// m the output-mode Fock index and p the input-mode Fock index is
/// flattened as m * dim_in + p.
struct TwoModeOperator {
  Matrix matrix;
  int dim_out = 0;
  int dim_in = 0;

  int index(int m, int p) const { return m * dim_in + p; }
  Complex entry(int m, int p, int n, int q) const {
    return matrix(index(m, p), index(n, q));
  }
};

/// Thrown when an iterative solver fails to reach its tolerance. Carries the
/// last iterate so callers can inspect how far the iteration got.
class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& what, double last, int iters)
      : std::runtime_error(what), last_estimate(last), iterations(iters) {}
  double last_estimate;
  int iterations;
};

/// Thrown when a truncated simulation loses more weight than the caller
/// allowed.
class TruncationError : public std::runtime_error {
 public:
  TruncationError(const std::string& what, double d)
      : std::runtime_error(what), deficit(d) {}
  double deficit;
};

/// Thrown when a closed-form expression is evaluated outside the region
/// where its defining integral converges.
class DivergenceError : public std::domain_error {
  using std::domain_error::domain_error;
};

inline bool is_hermitian(const Matrix& m, double tol = 1e-12) {
  return (m - m.adjoint()).cwiseAbs().maxCoeff() <= tol;
}

}  // namespace ampbench
