#pragma once

#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

#include "ampbench/closed_forms.hpp"
#include "ampbench/fock.hpp"
#include "ampbench/types.hpp"

namespace ampbench {

/// Parameters of the two-mode score operator whose operator norm bounds the
/// deterministic fidelity and whose injective cross norm bounds the
/// classical (measure-and-prepare) fidelity.
struct AOperatorSpec {
  double g;
  double lambda;
  double x;
  FockDim dim_out{1};
  FockDim dim_in{1};
};

namespace detail {

inline void validate(const AOperatorSpec& spec) {
  if (!(spec.x > 0.0 && spec.x < 1.0))
    throw std::domain_error("AOperatorSpec: need 0 < x < 1");
  if (!(spec.lambda > 0.0))
    throw std::domain_error("AOperatorSpec: need lambda > 0");
  if (!(spec.g > 0.0)) throw std::domain_error("AOperatorSpec: need g > 0");
}

// Matrix element <m,p|A|n,q> on the support m + q = n + p:
//   lambda g^{m+n} x^{-(p+q)/2} (m+q)!
//   / ((1-x) sqrt(m! n! p! q!) (lambda+1+g^2)^{m+q+1}),
// evaluated in log space (all factors are positive reals).
inline double a_entry(const AOperatorSpec& s, int m, int p, int n, int q) {
  const double sigma = s.lambda + 1.0 + s.g * s.g;
  const double lg =
      std::log(s.lambda) - std::log1p(-s.x) + (m + n) * std::log(s.g) -
      0.5 * (p + q) * std::log(s.x) + std::lgamma(m + q + 1.0) -
      0.5 * (std::lgamma(m + 1.0) + std::lgamma(n + 1.0) +
             std::lgamma(p + 1.0) + std::lgamma(q + 1.0)) -
      (m + q + 1) * std::log(sigma);
  return std::exp(lg);
}

}  // namespace detail

/// Dense construction of the score operator for the thermal ansatz. The
/// selection rule m + q = n + p (the operator conserves the output-input
/// photon-number difference) leaves most entries exactly zero; only the
/// allowed ones are filled. The result is real symmetric, hence Hermitian.
inline TwoModeOperator build_a(const AOperatorSpec& spec) {
  detail::validate(spec);
  const int dm = spec.dim_out.d;
  const int dp = spec.dim_in.d;
  Matrix a = Matrix::Zero(dm * dp, dm * dp);
  for (int delta = -(dp - 1); delta <= dm - 1; ++delta) {
    // states (m, p) with m - p = delta
    for (int p = std::max(0, -delta); p < dp && p + delta < dm; ++p) {
      const int m = p + delta;
      for (int q = std::max(0, -delta); q < dp && q + delta < dm; ++q) {
        const int n = q + delta;
        a(m * dp + p, n * dp + q) = detail::a_entry(spec, m, p, n, q);
      }
    }
  }
  return TwoModeOperator{std::move(a), dm, dp};
}

/// One diagonal block of the score operator: the restriction to the states
/// with fixed output-input difference delta. `states` lists the flattened
/// (m, p) indices the block rows/columns correspond to.
struct ABlock {
  int delta;
  std::vector<int> states;
  Eigen::MatrixXd matrix;
};

inline std::vector<ABlock> a_operator_blocks(const AOperatorSpec& spec) {
  detail::validate(spec);
  const int dm = spec.dim_out.d;
  const int dp = spec.dim_in.d;
  std::vector<ABlock> blocks;
  blocks.reserve(dm + dp - 1);
  for (int delta = -(dp - 1); delta <= dm - 1; ++delta) {
    ABlock block;
    block.delta = delta;
    for (int p = std::max(0, -delta); p < dp && p + delta < dm; ++p)
      block.states.push_back((p + delta) * dp + p);
    const int s = static_cast<int>(block.states.size());
    block.matrix.resize(s, s);
    int i = 0;
    for (int p = std::max(0, -delta); p < dp && p + delta < dm; ++p, ++i) {
      int j = 0;
      for (int q = std::max(0, -delta); q < dp && q + delta < dm; ++q, ++j)
        block.matrix(i, j) =
            detail::a_entry(spec, p + delta, p, q + delta, q);
    }
    blocks.push_back(std::move(block));
  }
  return blocks;
}

struct NormEstimate {
  double value = 0.0;
  int dim_used = 0;
  bool truncation_warning = false;
};

/// Operator norm of the score operator, computed numerically: power
/// iteration on each photon-difference block, maximized over blocks, at
/// adaptively grown truncation. Starts at 30x30 and grows by 10 until the
/// value moves by less than tol/2 (relative); capped at 120x120 with a
/// truncation warning. Converges to the closed form from below.
inline NormEstimate operator_norm_numeric(double g, double lambda, double x,
                                          double tol,
                                          int start_dim = 30,
                                          int max_dim = 120) {
  NormEstimate est;
  double previous = -1.0;
  for (int d = start_dim;; d += 10) {
    if (d > max_dim) {
      est.truncation_warning = true;
      break;
    }
    AOperatorSpec spec{g, lambda, x, FockDim(d), FockDim(d)};
    double value = 0.0;
    for (const ABlock& block : a_operator_blocks(spec))
      value = std::max(
          value, dominant_eigenvalue(block.matrix, 0.1 * tol).value);
    est.value = value;
    est.dim_used = d;
    if (previous >= 0.0 &&
        std::abs(value - previous) < 0.5 * tol * std::max(value, 1e-300))
      break;
    previous = value;
  }
  return est;
}

/// Tr[A^p] at the given truncation, summed over the diagonal blocks.
inline double trace_power_numeric(const AOperatorSpec& spec, int p) {
  if (p < 1) throw std::invalid_argument("trace_power_numeric: p >= 1");
  double total = 0.0;
  for (const ABlock& block : a_operator_blocks(spec))
    total += trace_power(block.matrix, p);
  return total;
}

/// Transposition on the input-mode factor: <m,p|A^T2|n,q> = <m,q|A|n,p>.
inline TwoModeOperator partial_transpose(const TwoModeOperator& a) {
  const int dm = a.dim_out;
  const int dp = a.dim_in;
  Matrix out(dm * dp, dm * dp);
  for (int m = 0; m < dm; ++m)
    for (int p = 0; p < dp; ++p)
      for (int n = 0; n < dm; ++n)
        for (int q = 0; q < dp; ++q)
          out(m * dp + p, n * dp + q) = a.matrix(m * dp + q, n * dp + p);
  return TwoModeOperator{std::move(out), dm, dp};
}

struct CrossNormResult {
  double value = 0.0;
  Vector phi;  // output-mode unit vector
  Vector psi;  // input-mode unit vector
  int restarts_used = 0;
};

namespace detail {

// M(m, n) = sum_{p,q} conj(psi_p) A[(m,p),(n,q)] psi_q
inline Matrix contract_input(const TwoModeOperator& a, const Vector& psi) {
  const int dm = a.dim_out;
  const int dp = a.dim_in;
  Matrix m(dm, dm);
  Matrix b(dm * dp, dm);  // b(., n) = A(., (n, :)) psi
  for (int n = 0; n < dm; ++n)
    b.col(n) = a.matrix.middleCols(n * dp, dp) * psi;
  for (int n = 0; n < dm; ++n) {
    Eigen::Map<const Matrix> view(b.col(n).data(), dp, dm);
    m.col(n) = (psi.adjoint() * view).transpose();
  }
  return m;
}

// N(p, q) = sum_{m,n} conj(phi_m) A[(m,p),(n,q)] phi_n
inline Matrix contract_output(const TwoModeOperator& a, const Vector& phi) {
  const int dm = a.dim_out;
  const int dp = a.dim_in;
  Matrix c = Matrix::Zero(dp, dm * dp);
  for (int m = 0; m < dm; ++m)
    c.noalias() += std::conj(phi[m]) * a.matrix.middleRows(m * dp, dp);
  Matrix ct = c.transpose();
  Matrix n(dp, dp);
  for (int p = 0; p < dp; ++p) {
    Eigen::Map<const Matrix> view(ct.col(p).data(), dp, dm);
    n.row(p) = (view * phi).transpose();
  }
  return n;
}

inline std::pair<double, Vector> top_eigenpair(const Matrix& m) {
  Matrix h = 0.5 * (m + Matrix(m.adjoint()));
  Eigen::SelfAdjointEigenSolver<Matrix> es(h);
  const int last = static_cast<int>(h.rows()) - 1;
  return {es.eigenvalues()[last], es.eigenvectors().col(last)};
}

}  // namespace detail

/// Injective cross norm sup_{|phi|=|psi|=1} <phi psi| A |phi psi> by
/// alternating ascent: contract A against psi, take the top eigenvector as
/// phi, swap roles, repeat. Multiple deterministic random restarts guard
/// against local maxima; the best product pair is returned. The value is a
/// certified lower bound on the cross norm (ascent has no global guarantee).
inline CrossNormResult cross_norm_numeric(const TwoModeOperator& a,
                                          int restarts = 20,
                                          double tol = 1e-10,
                                          int max_sweeps = 500) {
  const int dm = a.dim_out;
  const int dp = a.dim_in;
  CrossNormResult best;
  std::mt19937_64 rng(0x5eedULL);  // fixed: restarts are reproducible
  std::normal_distribution<double> gauss(0.0, 1.0);

  for (int attempt = 0; attempt < restarts; ++attempt) {
    Vector psi(dp);
    if (attempt == 0) {
      psi.setOnes();
    } else {
      for (int i = 0; i < dp; ++i) psi[i] = Complex(gauss(rng), gauss(rng));
    }
    psi.normalize();

    double value = 0.0;
    Vector phi;
    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
      auto [lam_phi, new_phi] = detail::top_eigenpair(detail::contract_input(a, psi));
      phi = new_phi;
      auto [lam_psi, new_psi] = detail::top_eigenpair(detail::contract_output(a, phi));
      psi = new_psi;
      const double previous = value;
      value = lam_psi;
      if (sweep > 0 &&
          std::abs(value - previous) <= tol * std::max(std::abs(value), 1e-300))
        break;
    }
    if (value > best.value) {
      best.value = value;
      best.phi = phi;
      best.psi = psi;
    }
    best.restarts_used = attempt + 1;
  }
  // report the value actually attained by the returned product pair
  if (best.phi.size() > 0) {
    const Matrix m = detail::contract_input(a, best.psi);
    best.value = (best.phi.adjoint() * m * best.phi)(0, 0).real();
  }
  return best;
}

}  // namespace ampbench
