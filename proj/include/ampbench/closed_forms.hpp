#pragma once

#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>

#include "ampbench/types.hpp"

namespace ampbench {

/// Scenario parameters: target amplitude gain g and Gaussian-prior inverse
/// variance lambda (variance V = 1/lambda, expected photon number 1/lambda).
/// The optional knobs select a concrete channel within the scenario.
struct AmplifierParams {
  double g = 1.0;
  double lambda = 0.0;
  double r = 0.0;   // squeezing parameter, when a squeezer is meant
  double x = 0.0;   // thermal / filter parameter, when one is meant
  int filter_cutoff = 0;
};

inline void require_gain_at_least_one(double g, const char* who) {
  if (!(g >= 1.0))
    throw std::domain_error(std::string(who) +
                            ": gain must satisfy g >= 1, got " + std::to_string(g));
}

inline void require_lambda_nonnegative(double lambda, const char* who) {
  if (!(lambda >= 0.0))
    throw std::domain_error(std::string(who) + ": lambda must be >= 0, got " +
                            std::to_string(lambda));
}

/// Average fidelity of a two-mode squeezer with squeezing r against target
/// gain g under the Gaussian prior:
///   lambda / (lambda cosh^2 r + (g - cosh r)^2).
/// lambda = 0 is rejected: the uniform prior exists only as the limit.
inline double squeezer_fidelity(double g, double lambda, double r) {
  if (!(lambda > 0.0))
    throw std::domain_error(
        "squeezer_fidelity: lambda must be > 0 (the flat prior is a limit, "
        "not a value)");
  if (!(r >= 0.0))
    throw std::domain_error("squeezer_fidelity: r must be >= 0");
  const double ch = std::cosh(r);
  return lambda / (lambda * ch * ch + (g - ch) * (g - ch));
}

struct OptimalSqueezer {
  double fidelity;
  double r;
};

/// Best deterministic fidelity and the squeezing that attains it.
/// Below the critical point lambda <= g-1 the optimum squeezes with
/// cosh r = g/(lambda+1); above it no squeezing wins (r = 0).
inline OptimalSqueezer optimal_squeezer(double g, double lambda) {
  require_gain_at_least_one(g, "optimal_squeezer");
  require_lambda_nonnegative(lambda, "optimal_squeezer");
  if (lambda <= g - 1.0) {
    const double r = std::acosh(g / (lambda + 1.0));
    return OptimalSqueezer{(lambda + 1.0) / (g * g), r};
  }
  return OptimalSqueezer{lambda / (lambda + (g - 1.0) * (g - 1.0)), 0.0};
}

/// Best probabilistic (heralded) fidelity: (lambda+1)/g^2 up to the critical
/// value lambda = g^2 - 1, and exactly 1 beyond it (noiseless amplification).
inline double probabilistic_fidelity(double g, double lambda) {
  require_gain_at_least_one(g, "probabilistic_fidelity");
  require_lambda_nonnegative(lambda, "probabilistic_fidelity");
  if (lambda <= g * g - 1.0) return (lambda + 1.0) / (g * g);
  return 1.0;
}

/// Classical fidelity threshold: the best measure-and-prepare fidelity,
/// (1+lambda)/(1+lambda+g^2), identical for deterministic and heralded
/// protocols.
inline double classical_fidelity_threshold(double g, double lambda) {
  if (!(g > 0.0))
    throw std::domain_error("classical_fidelity_threshold: g must be > 0");
  require_lambda_nonnegative(lambda, "classical_fidelity_threshold");
  return (1.0 + lambda) / (1.0 + lambda + g * g);
}

/// Operator norm of the amplifier score operator for the thermal ansatz with
/// parameter x:
///   2 lambda / ((1-x) (lambda+g^2+1 + sqrt((lambda+g^2+1)^2 - 4 g^2/x))).
/// Valid for 1/(lambda+1) <= x < 1; below that the decomposition behind the
/// formula breaks down and the call is rejected.
inline double a_norm_closed(double g, double lambda, double x) {
  if (!(x > 0.0 && x < 1.0))
    throw std::domain_error("a_norm_closed: need 0 < x < 1, got " +
                            std::to_string(x));
  if (x < 1.0 / (lambda + 1.0))
    throw std::domain_error(
        "a_norm_closed: validity condition x >= 1/(lambda+1) violated (x = " +
        std::to_string(x) + ", 1/(lambda+1) = " +
        std::to_string(1.0 / (lambda + 1.0)) + ")");
  const double s = lambda + g * g + 1.0;
  const double disc = s * s - 4.0 * g * g / x;
  // disc >= 0 is implied by x >= 1/(lambda+1); clamp roundoff at the boundary
  const double root = std::sqrt(std::max(disc, 0.0));
  return 2.0 * lambda / ((1.0 - x) * (s + root));
}

/// Thermal parameter that makes the closed operator norm meet the squeezer
/// bound: g/(lambda+g+(g-1)^2) for lambda > g-1, else 1/(lambda+1).
/// When the formula lands on x = 1 (only at g = 1 or lambda = 0 edges) the
/// value is clamped to 1 - 1e-9, since a thermal state needs x < 1 and the
/// norm is continuous there.
inline double optimal_thermal_x(double g, double lambda) {
  require_gain_at_least_one(g, "optimal_thermal_x");
  require_lambda_nonnegative(lambda, "optimal_thermal_x");
  constexpr double kClampEps = 1e-9;
  double x = (lambda > g - 1.0)
                 ? g / (lambda + g + (g - 1.0) * (g - 1.0))
                 : 1.0 / (lambda + 1.0);
  if (x >= 1.0) x = 1.0 - kClampEps;
  return x;
}

/// Determinant of the circulant quadratic-form matrix of order p with
/// symbol a - b w^n - c w^{-n}, a = lambda+1+g^2, b = g^2, c = 1/x,
/// w = exp(2 pi i / p). Evaluated as the explicit product over the roots of
/// unity; the imaginary residue (roundoff only) is discarded.
inline double gamma_determinant(int p, double g, double lambda, double x) {
  if (p < 1) throw std::invalid_argument("gamma_determinant: p must be >= 1");
  if (!(x > 0.0 && x < 1.0))
    throw std::domain_error("gamma_determinant: need 0 < x < 1");
  const double a = lambda + 1.0 + g * g;
  const double b = g * g;
  const double c = 1.0 / x;
  Complex det(1.0, 0.0);
  for (int n = 0; n < p; ++n) {
    const double theta = 2.0 * M_PI * n / p;
    const Complex w(std::cos(theta), std::sin(theta));
    det *= a - b * w - c * std::conj(w);
  }
  return det.real();
}

/// Closed form for the p-th trace power of the score operator:
///   lambda^p / ((1-x)^p det Gamma_p).
/// A nonpositive determinant signals that the underlying Gaussian integral
/// diverges (for p = 1 this is exactly lambda + 1 <= 1/x).
inline double a_trace_power_closed(int p, double g, double lambda, double x) {
  const double det = gamma_determinant(p, g, lambda, x);
  if (!(det > 0.0))
    throw DivergenceError(
        "a_trace_power_closed: det Gamma_p = " + std::to_string(det) +
        " <= 0, the defining Gaussian integral diverges");
  return std::pow(lambda / (1.0 - x), p) / det;
}

/// Base of the heralding filter's geometric coefficients:
/// (lambda+1)/g in the intermediate regime g-1 < lambda <= g^2-1, g in the
/// noiseless regime lambda > g^2-1. The squeezer regime lambda <= g-1 has no
/// filter and is rejected.
inline double filter_base(double g, double lambda) {
  require_gain_at_least_one(g, "filter_base");
  if (!(lambda > g - 1.0))
    throw std::domain_error(
        "filter_base: lambda <= g-1 is the squeezer regime; no filter applies");
  if (lambda <= g * g - 1.0) return (lambda + 1.0) / g;
  return g;
}

/// Gain/attenuation pair realizing the best measure-and-prepare channel as
/// an attenuation composed with a quantum amplifier of larger gain:
/// g' = sqrt(g^2 + (lambda+1)^2), eta = g/g'. Stated for lambda <= g-1.
struct ClassicalLimitParams {
  double g_prime;
  double eta;
};

inline ClassicalLimitParams classical_limit_params(double g, double lambda) {
  require_gain_at_least_one(g, "classical_limit_params");
  require_lambda_nonnegative(lambda, "classical_limit_params");
  if (lambda > g - 1.0)
    throw std::domain_error(
        "classical_limit_params: relation stated only for lambda <= g-1");
  const double gp = std::sqrt(g * g + (lambda + 1.0) * (lambda + 1.0));
  return ClassicalLimitParams{gp, g / gp};
}

}  // namespace ampbench
