#pragma once

#include <cmath>
#include <functional>
#include <map>
#include <mutex>
#include <stdexcept>

#include <Eigen/Dense>

#include "ampbench/types.hpp"

namespace ampbench {

struct QuadratureRule {
  Eigen::VectorXd nodes;
  Eigen::VectorXd weights;
};

namespace detail {

// Golub-Welsch: nodes are the eigenvalues of the symmetric tridiagonal
// Jacobi matrix of the orthogonal-polynomial recurrence, weights are
// mu0 * (first eigenvector component)^2.
inline QuadratureRule golub_welsch(const Eigen::VectorXd& diag,
                                   const Eigen::VectorXd& subdiag, double mu0) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
  es.computeFromTridiagonal(diag, subdiag, Eigen::ComputeEigenvectors);
  if (es.info() != Eigen::Success)
    throw std::runtime_error("golub_welsch: tridiagonal eigensolver failed");
  const int n = static_cast<int>(diag.size());
  QuadratureRule rule;
  rule.nodes = es.eigenvalues();
  rule.weights.resize(n);
  for (int i = 0; i < n; ++i) {
    const double v0 = es.eigenvectors()(0, i);
    rule.weights[i] = mu0 * v0 * v0;
  }
  return rule;
}

}  // namespace detail

/// Gauss-Laguerre rule: integrates f against exp(-t) on [0, inf).
/// Rules are cached per order; safe to call from several threads.
inline const QuadratureRule& gauss_laguerre(int order) {
  if (order < 1) throw std::invalid_argument("gauss_laguerre: order >= 1");
  static std::mutex mu;
  static std::map<int, QuadratureRule> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(order);
  if (it != cache.end()) return it->second;
  Eigen::VectorXd diag(order), sub(order - 1 > 0 ? order - 1 : 0);
  for (int k = 0; k < order; ++k) diag[k] = 2.0 * k + 1.0;
  for (int k = 0; k + 1 < order; ++k) sub[k] = static_cast<double>(k + 1);
  return cache.emplace(order, detail::golub_welsch(diag, sub, 1.0)).first->second;
}

/// Gauss-Hermite rule: integrates f against exp(-t^2) on (-inf, inf).
inline const QuadratureRule& gauss_hermite(int order) {
  if (order < 1) throw std::invalid_argument("gauss_hermite: order >= 1");
  static std::mutex mu;
  static std::map<int, QuadratureRule> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(order);
  if (it != cache.end()) return it->second;
  Eigen::VectorXd diag = Eigen::VectorXd::Zero(order);
  Eigen::VectorXd sub(order - 1 > 0 ? order - 1 : 0);
  for (int k = 0; k + 1 < order; ++k) sub[k] = std::sqrt(0.5 * (k + 1));
  return cache.emplace(order, detail::golub_welsch(diag, sub, std::sqrt(M_PI)))
      .first->second;
}

struct QuadratureResult {
  double value = 0.0;
  double error_estimate = 0.0;  // |change| under the last order doubling
  bool converged = true;        // false = precision warning
  int order_used = 0;
};

/// Average of a phase-covariant pointwise fidelity over the Gaussian prior:
///   integral_0^inf lambda exp(-lambda u) f(u) du,   u = |alpha|^2.
/// Substituting t = lambda u reduces this to a Gauss-Laguerre sum of
/// f(t/lambda). The order is doubled until the value stops moving (or the
/// cap is hit, which flags the result instead of throwing).
inline QuadratureResult average_fidelity_quadrature(
    const std::function<double(double)>& pointwise, double lambda,
    int order = 64) {
  if (!(lambda > 0.0))
    throw std::domain_error("average_fidelity_quadrature: lambda must be > 0");
  constexpr int kMaxOrder = 1024;
  auto evaluate = [&](int n) {
    const QuadratureRule& rule = gauss_laguerre(n);
    double sum = 0.0;
    for (int i = n - 1; i >= 0; --i)  // small weights first
      sum += rule.weights[i] * pointwise(rule.nodes[i] / lambda);
    return sum;
  };
  QuadratureResult res;
  double value = evaluate(order);
  int n = order;
  while (true) {
    const double refined = evaluate(2 * n);
    res.error_estimate = std::abs(refined - value);
    value = refined;
    n *= 2;
    if (res.error_estimate <= 1e-12 * std::max(1.0, std::abs(value))) break;
    if (2 * n > kMaxOrder) {
      res.converged = false;
      break;
    }
  }
  res.value = value;
  res.order_used = n;
  return res;
}

}  // namespace ampbench
