#pragma once

#include <cmath>
#include <complex>
#include <stdexcept>
#include <variant>
#include <vector>

#include "ampbench/closed_forms.hpp"
#include "ampbench/fock.hpp"
#include "ampbench/quadrature.hpp"
#include "ampbench/types.hpp"

namespace ampbench {

struct Squeezer {
  double r;
};
struct Attenuator {
  double eta;
};
struct Filter {
  double x;
  int cutoff;
};
struct MeasurePrepareHeterodyne {
  double c;
};

/// Tagged description of one of the channels the library can simulate.
struct ChannelSpec {
  std::variant<Squeezer, Attenuator, Filter, MeasurePrepareHeterodyne> variant;
  FockDim dim{1};
  FockDim anc_dim{1};
};

namespace detail {

// The two-mode squeezer generator r (a^dag b^dag - a b) conserves the
// photon-number difference m - p, so exp(K) splits into blocks indexed by
// that difference. For a vacuum ancilla only the columns with input (m', 0)
// matter; this returns, per m' = 0..d_sys-1, the vector of amplitudes on
// the states (m' + j, j). Each column is a column of the exact truncated
// unitary (fock-space exp of the truncated generator), computed blockwise.
inline std::vector<Vector> squeezer_vacuum_columns(double r, int d_sys,
                                                   int d_anc) {
  std::vector<Vector> cols(d_sys);
  for (int delta = 0; delta < d_sys; ++delta) {
    const int s = std::min(d_sys - delta, d_anc);
    Matrix gen = Matrix::Zero(s, s);
    for (int j = 0; j + 1 < s; ++j) {
      const double c =
          r * std::sqrt(static_cast<double>(delta + j + 1) * (j + 1));
      gen(j + 1, j) = c;
      gen(j, j + 1) = -c;
    }
    cols[delta] = unitary_from_generator(gen).matrix.col(0);
  }
  return cols;
}

// Beamsplitter generator theta (a b^dag - a^dag b) conserves the total
// photon number m + p. Returns, per total N = 0..d_sys-1, the amplitudes of
// exp(K)(|N> (x) |0>) on the states (m, N - m), m = 0..N (assuming
// d_anc >= d_sys so the whole sector fits).
inline std::vector<Vector> beamsplitter_vacuum_columns(double theta,
                                                       int d_sys) {
  std::vector<Vector> cols(d_sys);
  for (int total = 0; total < d_sys; ++total) {
    const int s = total + 1;  // basis (m, total - m), m ascending
    Matrix gen = Matrix::Zero(s, s);
    for (int m = 1; m < s; ++m) {
      const double c =
          theta * std::sqrt(static_cast<double>(m) * (total - m + 1));
      gen(m - 1, m) = c;
      gen(m, m - 1) = -c;
    }
    cols[total] = unitary_from_generator(gen).matrix.col(total);
  }
  return cols;
}

}  // namespace detail

/// Two-mode squeezing channel: couple rho to a vacuum ancilla with the
/// squeezer unitary exp(r (a^dag b^dag - a b)) and trace the ancilla out.
/// Amplitude gain is cosh r. The unitary is the exact exponential of the
/// truncated generator, so the trace is preserved up to roundoff; the
/// deficit is still checked against `trace_deficit_threshold` as a tripwire.
inline FockOperator apply_squeezer(const FockOperator& rho, double r,
                                   FockDim anc_dim,
                                   double trace_deficit_threshold = 1e-6) {
  if (!(r >= 0.0)) throw std::domain_error("apply_squeezer: r must be >= 0");
  const int d = rho.dim();
  const auto cols = detail::squeezer_vacuum_columns(r, d, anc_dim.d);

  Matrix out = Matrix::Zero(d, d);
  for (int p = 0; p < anc_dim.d; ++p) {
    // Kraus operator for ancilla outcome p: shifts Fock index up by p.
    Vector k = Vector::Zero(d);
    bool any = false;
    for (int m = p; m < d; ++m) {
      const Vector& col = cols[m - p];
      if (p < col.size()) {
        k[m] = col[p];
        any = true;
      }
    }
    if (!any) continue;
    for (int m = p; m < d; ++m)
      for (int n = p; n < d; ++n)
        out(m, n) += k[m] * rho.matrix(m - p, n - p) * std::conj(k[n]);
  }

  const double deficit = std::abs(out.trace().real() - rho.trace());
  if (deficit > trace_deficit_threshold)
    throw TruncationError(
        "apply_squeezer: trace deficit " + std::to_string(deficit) +
            " above threshold",
        deficit);
  return FockOperator{std::move(out), rho.hermitian};
}

/// Per-input fidelity of the squeezer against the target |g alpha>:
///   <g alpha| C_r(|alpha><alpha|) |g alpha>
///   = (1/cosh^2 r) exp(-(g - cosh r)^2 |alpha|^2 / cosh^2 r).
inline double squeezer_fidelity_pointwise(double g, double r, Complex alpha) {
  if (!(r >= 0.0))
    throw std::domain_error("squeezer_fidelity_pointwise: r must be >= 0");
  const double ch = std::cosh(r);
  const double u = std::norm(alpha);
  return std::exp(-(g - ch) * (g - ch) * u / (ch * ch)) / (ch * ch);
}

/// Pure-loss channel |alpha> -> |eta alpha>, realized by a beamsplitter of
/// transmissivity eta^2 with a vacuum ancilla (ancilla dimension equal to
/// the system's) followed by a partial trace.
inline FockOperator apply_attenuator(const FockOperator& rho, double eta) {
  if (!(eta > 0.0 && eta <= 1.0))
    throw std::domain_error("apply_attenuator: need 0 < eta <= 1, got " +
                            std::to_string(eta));
  const int d = rho.dim();
  const double theta = std::acos(std::min(eta, 1.0));
  const auto cols = detail::beamsplitter_vacuum_columns(theta, d);

  Matrix out = Matrix::Zero(d, d);
  for (int p = 0; p < d; ++p) {
    // Kraus operator for p photons lost: shifts Fock index down by p.
    Vector k = Vector::Zero(d);
    bool any = false;
    for (int m = 0; m + p < d; ++m) {
      k[m] = cols[m + p][m];
      any = true;
    }
    if (!any) continue;
    for (int m = 0; m + p < d; ++m)
      for (int n = 0; n + p < d; ++n)
        out(m, n) += k[m] * rho.matrix(m + p, n + p) * std::conj(k[n]);
  }
  return FockOperator{std::move(out), rho.hermitian};
}

struct FilterOutcome {
  FockOperator output;  // unnormalized: Q rho Q
  double success_probability;
};

/// Diagonal heralding filter with geometric coefficients x^n up to the
/// cutoff, scaled so the largest coefficient is 1 (a valid quantum
/// operation, Q^dag Q <= I, for any x > 0). Conditional quantities are
/// invariant under that scaling.
inline FilterOutcome apply_filter(const FockOperator& rho, double x,
                                  int cutoff) {
  if (!(x > 0.0)) throw std::domain_error("apply_filter: x must be > 0");
  if (cutoff < 0 || cutoff >= rho.dim())
    throw std::invalid_argument("apply_filter: need 0 <= cutoff < dim");
  const int d = rho.dim();
  Eigen::VectorXd coeff = Eigen::VectorXd::Zero(d);
  const double top = (x >= 1.0) ? std::pow(x, cutoff) : 1.0;
  for (int n = 0; n <= cutoff; ++n) coeff[n] = std::pow(x, n) / top;

  Matrix out(d, d);
  for (int m = 0; m < d; ++m)
    for (int n = 0; n < d; ++n) out(m, n) = coeff[m] * rho.matrix(m, n) * coeff[n];
  double prob = out.trace().real();
  return FilterOutcome{FockOperator{std::move(out), rho.hermitian}, prob};
}

struct FilterResult {
  double conditional_fidelity;
  double success_probability;
  int cutoff;
};

/// Conditional average fidelity of the heralding filter, by the exact
/// Gaussian double series (no truncation of the mode space):
///   numerator  = lambda sum_{m,n<=cutoff} (g x)^{m+n} (m+n)!/(m! n!)
///                                          / (lambda+1+g^2)^{m+n+1}
///   denominator = lambda sum_{n<=cutoff} x^{2n} / (lambda+1)^{n+1}.
/// The filter's overall scale cancels in the ratio; the reported success
/// probability uses the max-coefficient-1 normalization of apply_filter.
inline FilterResult filter_fidelity_exact(double g, double lambda, double x,
                                          int cutoff) {
  if (!(x > 0.0))
    throw std::domain_error("filter_fidelity_exact: x must be > 0");
  if (cutoff < 0)
    throw std::invalid_argument("filter_fidelity_exact: cutoff must be >= 0");
  if (!(lambda + 1.0 > x * x))
    throw DivergenceError(
        "filter_fidelity_exact: lambda + 1 <= x^2, the normalization series "
        "diverges as the cutoff grows");
  const double s = lambda + 1.0 + g * g;
  const double log_gx = std::log(g * x);
  const double log_s = std::log(s);

  double num = 0.0;
  for (int m = 0; m <= cutoff; ++m)
    for (int n = 0; n <= cutoff; ++n)
      num += std::exp((m + n) * log_gx + std::lgamma(m + n + 1.0) -
                      std::lgamma(m + 1.0) - std::lgamma(n + 1.0) -
                      (m + n + 1) * log_s);
  num *= lambda;

  double den = 0.0;
  for (int n = 0; n <= cutoff; ++n)
    den += std::pow(x * x, n) / std::pow(lambda + 1.0, n + 1);
  den *= lambda;

  // success probability of the max-coefficient-1 filter, averaged over the
  // prior: lambda sum_n ctilde_n^2 / (lambda+1)^{n+1}
  const double top = (x >= 1.0) ? std::pow(x, cutoff) : 1.0;
  double prob = 0.0;
  for (int n = 0; n <= cutoff; ++n) {
    const double cn = std::pow(x, n) / top;
    prob += cn * cn / std::pow(lambda + 1.0, n + 1);
  }
  prob *= lambda;

  return FilterResult{num / den, prob, cutoff};
}

/// Measure-and-prepare channel on a coherent input |beta>: heterodyne the
/// input (outcome density exp(-|ahat - beta|^2) under d^2 ahat / pi) and
/// re-prepare |c ahat>. Evaluated by 2-D Gauss-Hermite quadrature in the
/// real and imaginary parts of the outcome.
inline FockOperator heterodyne_measure_prepare(Complex beta, double c,
                                               FockDim dim,
                                               int quad_order = 48) {
  if (!(c > 0.0))
    throw std::domain_error("heterodyne_measure_prepare: c must be > 0");
  const QuadratureRule& rule = gauss_hermite(quad_order);
  Matrix out = Matrix::Zero(dim.d, dim.d);
  for (int i = 0; i < quad_order; ++i) {
    for (int j = 0; j < quad_order; ++j) {
      const double w = rule.weights[i] * rule.weights[j] / M_PI;
      const Complex ahat = beta + Complex(rule.nodes[i], rule.nodes[j]);
      const Vector v = coherent_state(c * ahat, dim).amplitudes;
      out.noalias() += w * (v * v.adjoint());
    }
  }
  return FockOperator{std::move(out), true};
}

/// Half the trace norm of the (Hermitian-symmetrized) difference.
inline double trace_distance(const FockOperator& a, const FockOperator& b) {
  Matrix diff = a.matrix - b.matrix;
  diff = 0.5 * (diff + Matrix(diff.adjoint()));
  Eigen::SelfAdjointEigenSolver<Matrix> es(diff, Eigen::EigenvaluesOnly);
  return 0.5 * es.eigenvalues().cwiseAbs().sum();
}

/// Numerical check of the decomposition of the optimal measure-and-prepare
/// amplifier into an attenuation (applied to the input) followed by the
/// optimal quantum amplifier of enlarged gain g' = sqrt(g^2 + (lambda+1)^2):
/// builds both channel outputs on |beta> and returns their trace distance.
/// Stated for lambda <= g - 1.
inline double mp_equivalence_trace_distance(double g, double lambda,
                                            Complex beta, FockDim dim,
                                            int quad_order = 48) {
  if (lambda > g - 1.0)
    throw std::domain_error(
        "mp_equivalence_trace_distance: relation stated only for lambda <= "
        "g-1");
  const double c = g / (1.0 + lambda);
  FockOperator mp = heterodyne_measure_prepare(beta, c, dim, quad_order);

  const ClassicalLimitParams clp = classical_limit_params(g, lambda);
  const double r_prime = std::acosh(clp.g_prime / (lambda + 1.0));
  const Vector b = coherent_state(beta, dim).amplitudes;
  FockOperator input{b * b.adjoint(), true};
  FockOperator attenuated = apply_attenuator(input, clp.eta);
  FockOperator amplified = apply_squeezer(attenuated, r_prime, dim);

  return trace_distance(mp, amplified);
}

/// Dispatch a ChannelSpec on a density operator. The measure-and-prepare
/// variant measures the Husimi function of rho at the quadrature nodes.
inline FockOperator apply_channel(const FockOperator& rho,
                                  const ChannelSpec& spec) {
  if (std::holds_alternative<Squeezer>(spec.variant))
    return apply_squeezer(rho, std::get<Squeezer>(spec.variant).r,
                          spec.anc_dim);
  if (std::holds_alternative<Attenuator>(spec.variant))
    return apply_attenuator(rho, std::get<Attenuator>(spec.variant).eta);
  if (std::holds_alternative<Filter>(spec.variant)) {
    const auto& f = std::get<Filter>(spec.variant);
    return apply_filter(rho, f.x, f.cutoff).output;
  }
  const auto& mp = std::get<MeasurePrepareHeterodyne>(spec.variant);
  const int order = 48;
  const QuadratureRule& rule = gauss_hermite(order);
  const int d = rho.dim();
  Matrix out = Matrix::Zero(d, d);
  Vector probe(d);
  for (int i = 0; i < order; ++i)
    for (int j = 0; j < order; ++j) {
      const Complex ahat(rule.nodes[i], rule.nodes[j]);
      // Husimi value with its Gaussian factor stripped: the tensor
      // Gauss-Hermite weight already carries exp(-|ahat|^2), so the probe
      // must be the bare monomial vector ahat^n / sqrt(n!).
      Complex c(1.0, 0.0);
      for (int n = 0; n < d; ++n) {
        probe[n] = c;
        c *= ahat / std::sqrt(static_cast<double>(n + 1));
      }
      const double q = (probe.adjoint() * rho.matrix * probe)(0, 0).real();
      const Vector v = coherent_state(mp.c * ahat, d).amplitudes;
      out.noalias() +=
          (rule.weights[i] * rule.weights[j] / M_PI * q) * (v * v.adjoint());
    }
  return FockOperator{std::move(out), true};
}

}  // namespace ampbench
