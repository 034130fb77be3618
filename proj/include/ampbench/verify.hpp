#pragma once

#include <chrono>
#include <cmath>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "ampbench/a_operator.hpp"
#include "ampbench/channels.hpp"
#include "ampbench/closed_forms.hpp"
#include "ampbench/fock.hpp"
#include "ampbench/montecarlo.hpp"
#include "ampbench/quadrature.hpp"

namespace ampbench {

/// One verification row: pass iff |computed - target| <= tolerance
/// (relative when `relative` is set) and the runtime budget holds.
struct VerifyReport {
  std::string check;
  double target = 0.0;
  double computed = 0.0;
  double tolerance = 0.0;
  bool relative = false;
  bool passed = false;
  double runtime_s = 0.0;
  double runtime_limit_s = 0.0;  // 0 = no budget
  std::string note;
};

struct VerifyOptions {
  double tol = 0.0;  // 0 = per-check default, otherwise overrides
  std::uint64_t seed = 42;
};

namespace detail {

class Stopwatch {
 public:
  Stopwatch() : start_(std::chrono::steady_clock::now()) {}
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                         start_)
        .count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

inline VerifyReport make_report(const std::string& name, double target,
                                double computed, double tol, bool relative,
                                double runtime, double runtime_limit,
                                const std::string& note = "") {
  VerifyReport r;
  r.check = name;
  r.target = target;
  r.computed = computed;
  r.tolerance = tol;
  r.relative = relative;
  const double deviation = std::abs(computed - target);
  const double bound = relative ? tol * std::max(std::abs(target), 1e-300) : tol;
  r.passed = deviation <= bound;
  if (runtime_limit > 0.0 && runtime > runtime_limit) r.passed = false;
  r.runtime_s = runtime;
  r.runtime_limit_s = runtime_limit;
  r.note = note;
  return r;
}

inline double pick_tol(const VerifyOptions& opts, double fallback) {
  return opts.tol > 0.0 ? opts.tol : fallback;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Acceptance criteria. Each returns a single aggregated report; grid checks
// report the worst deviation across the grid.
// ---------------------------------------------------------------------------

/// 1. Headline values at (g=2, lambda=3): CFT exactly 1/2, heralded limit 1,
/// deterministic limit 3/4 (the 85% sometimes quoted for this point does not
/// follow from the branch formula; 0.75 is confirmed independently by the
/// quadrature, operator-norm and Monte-Carlo routes below).
inline VerifyReport criterion_headline(const VerifyOptions& opts) {
  const double tol = detail::pick_tol(opts, 1e-12);
  detail::Stopwatch timer;
  const double dev =
      std::max({std::abs(classical_fidelity_threshold(2.0, 3.0) - 0.5),
                std::abs(probabilistic_fidelity(2.0, 3.0) - 1.0),
                std::abs(optimal_squeezer(2.0, 3.0).fidelity - 0.75)});
  return detail::make_report(
      "headline cft=0.5 f_prob=1 f_det=0.75 at (2,3)", 0.0, dev, tol, false,
      timer.seconds(), 1e-3,
      "f_det(2,3)=0.75 from the branch formula; the 85% figure quoted "
      "elsewhere is documented, not reproduced");
}

/// 2. Gauss-Laguerre average of the pointwise squeezer fidelity agrees with
/// the closed form over a (g, lambda, r) grid.
inline VerifyReport criterion_quadrature(const VerifyOptions& opts) {
  const double tol = detail::pick_tol(opts, 1e-10);
  detail::Stopwatch timer;
  double worst = 0.0;
  for (double g : {1.5, 2.0, 3.0}) {
    for (double lambda : {0.5, 1.0, 2.0, 3.0, 5.0}) {
      const double r_opt = optimal_squeezer(g, lambda).r;
      for (double r : {0.0, 0.3, r_opt}) {
        const double ch = std::cosh(r);
        auto pointwise = [&](double u) {
          return std::exp(-(g - ch) * (g - ch) * u / (ch * ch)) / (ch * ch);
        };
        const double quad =
            average_fidelity_quadrature(pointwise, lambda).value;
        worst = std::max(worst, std::abs(quad - squeezer_fidelity(g, lambda, r)));
      }
    }
  }
  return detail::make_report("quadrature average equals closed form (grid)",
                             0.0, worst, tol, false, timer.seconds(), 1.0);
}

/// 3. Truncated-unitary simulation of the squeezer reproduces the exact
/// per-input fidelity at dims (60, 60).
inline VerifyReport criterion_squeezer_simulation(const VerifyOptions& opts) {
  const double tol = detail::pick_tol(opts, 1e-6);
  detail::Stopwatch timer;
  const FockDim dim(60);
  const double g = 2.0;
  const Complex alphas[] = {{0.3, 0.0},  {-0.5, 0.4}, {0.0, 0.8},
                            {1.2, 0.0},  {0.7, -0.9}, {0.0, 0.0}};
  double worst = 0.0;
  for (double ch : {1.0, 1.5, 2.0}) {
    const double r = std::acosh(ch);
    for (Complex alpha : alphas) {
      const Vector a = coherent_state(alpha, dim).amplitudes;
      FockOperator rho{a * a.adjoint(), true};
      FockOperator out = apply_squeezer(rho, r, dim);
      const Vector target = coherent_state(g * alpha, dim).amplitudes;
      const double fid = (target.adjoint() * out.matrix * target)(0, 0).real();
      worst = std::max(
          worst, std::abs(fid - squeezer_fidelity_pointwise(g, r, alpha)));
    }
  }
  return detail::make_report(
      "simulated squeezer matches pointwise fidelity (60/60)", 0.0, worst,
      tol, false, timer.seconds(), 30.0);
}

/// 4. Numerical operator norm of the score operator at adaptive truncation
/// matches the closed form (relative).
inline VerifyReport criterion_operator_norm(const VerifyOptions& opts) {
  const double tol = detail::pick_tol(opts, 1e-3);
  detail::Stopwatch timer;
  double worst = 0.0;
  std::ostringstream note;
  for (auto [g, lambda] : {std::pair{2.0, 1.0}, {2.0, 3.0}, {3.0, 2.0}}) {
    const double x = optimal_thermal_x(g, lambda);
    const double closed = a_norm_closed(g, lambda, x);
    const NormEstimate est = operator_norm_numeric(g, lambda, x, tol);
    worst = std::max(worst, std::abs(est.value - closed) / closed);
    note << "(" << g << "," << lambda << "):dims=" << est.dim_used << " ";
  }
  return detail::make_report("operator norm matches closed form (relative)",
                             0.0, worst, tol, false, timer.seconds(), 60.0,
                             note.str());
}

/// 5. Trace powers of the built operator match the circulant-determinant
/// closed form for p = 1..5 at (2, 3, 1/3), dims (60, 60).
inline VerifyReport criterion_trace_powers(const VerifyOptions& opts) {
  const double tol = detail::pick_tol(opts, 1e-6);
  detail::Stopwatch timer;
  // trace-power truncation decays like (7/8)^k; dims 70 clears 1e-6 relative
  const AOperatorSpec spec{2.0, 3.0, 1.0 / 3.0, FockDim(70), FockDim(70)};
  double worst = 0.0;
  for (int p = 1; p <= 5; ++p) {
    const double closed = a_trace_power_closed(p, 2.0, 3.0, 1.0 / 3.0);
    const double numeric = trace_power_numeric(spec, p);
    worst = std::max(worst, std::abs(numeric - closed) / closed);
  }
  return detail::make_report(
      "trace powers match circulant closed form p=1..5 (relative)", 0.0,
      worst, tol, false, timer.seconds(), 30.0);
}

/// 6. Alternating-ascent cross norm reaches the classical threshold 1/2 on
/// both the score operator and its input-side partial transpose at
/// (2, 3, x = 1/4), and never exceeds the matching operator norm.
inline VerifyReport criterion_cross_norm(const VerifyOptions& opts) {
  const double tol = detail::pick_tol(opts, 2e-3);
  detail::Stopwatch timer;
  const AOperatorSpec spec{2.0, 3.0, 0.25, FockDim(40), FockDim(40)};
  const TwoModeOperator a = build_a(spec);
  const TwoModeOperator at2 = partial_transpose(a);
  const CrossNormResult ca = cross_norm_numeric(a, 20, 1e-10);
  const CrossNormResult ct = cross_norm_numeric(at2, 20, 1e-10);
  // power iteration warm-started at the ascent's product vector: where the
  // top eigenvalue is nearly degenerate the cold start stalls just below it
  auto product_start = [](const CrossNormResult& res) {
    Vector v(res.phi.size() * res.psi.size());
    for (int m = 0; m < res.phi.size(); ++m)
      for (int p = 0; p < res.psi.size(); ++p)
        v[m * res.psi.size() + p] = res.phi[m] * res.psi[p];
    return v;
  };
  const Vector sa = product_start(ca);
  const Vector st = product_start(ct);
  const double na = dominant_eigenvalue(a.matrix, 1e-10, 100000, &sa).value;
  const double nt = dominant_eigenvalue(at2.matrix, 1e-10, 100000, &st).value;
  double worst = std::max(std::abs(ca.value - 0.5), std::abs(ct.value - 0.5));
  const bool bounded = ca.value <= na + 1e-10 && ct.value <= nt + 1e-10;
  std::ostringstream note;
  note << "cross(A)=" << ca.value << " cross(A_T2)=" << ct.value
       << " opnorm(A)=" << na << " opnorm(A_T2)=" << nt
       << (bounded ? "" : " CROSS NORM EXCEEDS OPERATOR NORM");
  VerifyReport r = detail::make_report(
      "cross norm reaches CFT 0.5 at (2,3,x=1/4) and stays below operator "
      "norm",
      0.0, worst, tol, false, timer.seconds(), 60.0, note.str());
  r.passed = r.passed && bounded;
  return r;
}

/// 7. Heralding-filter fidelity: exponential convergence bound in the
/// noiseless regime, the intermediate-regime limit, and the rank-1 filter
/// reducing exactly to the CFT.
inline VerifyReport criterion_filters(const VerifyOptions& opts) {
  detail::Stopwatch timer;
  bool ok = true;
  std::ostringstream note;

  // noiseless regime (2, 5, x = 2): 1 - F(N) <= 2 (g^2/(lambda+1))^{N+1}
  double worst_bound = 0.0;
  for (int n = 0; n <= 25; ++n) {
    const double f = filter_fidelity_exact(2.0, 5.0, 2.0, n).conditional_fidelity;
    const double bound = 2.0 * std::pow(4.0 / 6.0, n + 1);
    worst_bound = std::max(worst_bound, (1.0 - f) - bound);
  }
  if (worst_bound > 0.0) {
    ok = false;
    note << "exponential bound violated by " << worst_bound << "; ";
  }
  const double f25 = filter_fidelity_exact(2.0, 5.0, 2.0, 25).conditional_fidelity;
  if (!(f25 > 1.0 - 1e-3)) {
    ok = false;
    note << "F(25)=" << f25 << " not above 1-1e-3; ";
  }

  // intermediate regime (2, 2, x = 1.5): F(40) within 1e-4 of 0.75
  const double f40 = filter_fidelity_exact(2.0, 2.0, 1.5, 40).conditional_fidelity;
  const double dev_mid = std::abs(f40 - 0.75);

  // rank-1 filter = CFT, any x inside the convergence domain x^2 < lambda+1
  double dev_rank1 = 0.0;
  for (double x : {0.3, 1.0, 1.9}) {
    const double f0 = filter_fidelity_exact(2.0, 3.0, x, 0).conditional_fidelity;
    dev_rank1 = std::max(dev_rank1, std::abs(f0 - classical_fidelity_threshold(2.0, 3.0)));
  }

  const double tol_mid = detail::pick_tol(opts, 1e-4);
  VerifyReport r = detail::make_report(
      "filter convergence: bound (N<=25), F(40) at (2,2,1.5), rank-1 = CFT",
      0.0, dev_mid, tol_mid, false, timer.seconds(), 5.0, note.str());
  r.passed = r.passed && ok && dev_rank1 <= 1e-12;
  if (dev_rank1 > 1e-12) r.note += " rank-1 deviation " + std::to_string(dev_rank1);
  return r;
}

/// 8. Monte-Carlo estimates agree with the closed forms within four standard
/// errors, with the standard errors themselves small.
inline VerifyReport criterion_montecarlo(const VerifyOptions& opts) {
  detail::Stopwatch timer;
  const Estimate cft_est = mc_cft(2.0, 3.0, 1000000, opts.seed);
  const Estimate sq_est = mc_squeezer(2.0, 3.0, 0.0, 1000000, opts.seed);
  const double cft_target = classical_fidelity_threshold(2.0, 3.0);
  const double sq_target = squeezer_fidelity(2.0, 3.0, 0.0);
  const double pull_cft = std::abs(cft_est.mean - cft_target) / cft_est.stderror;
  const double pull_sq = std::abs(sq_est.mean - sq_target) / sq_est.stderror;
  std::ostringstream note;
  note << "cft=" << cft_est.mean << "+-" << cft_est.stderror
       << " squeezer=" << sq_est.mean << "+-" << sq_est.stderror
       << " seed=" << opts.seed;
  VerifyReport r = detail::make_report(
      "monte-carlo cft and squeezer within 4 stderr (worst pull)", 0.0,
      std::max(pull_cft, pull_sq), 4.0, false, timer.seconds(), 10.0,
      note.str());
  r.passed = r.passed && cft_est.stderror < 5e-4 && sq_est.stderror < 5e-4;
  return r;
}

/// 9. The optimal measure-and-prepare channel equals attenuation (input
/// side) composed with the enlarged-gain squeezer: trace distance at dims
/// (50, 50).
inline VerifyReport criterion_mp_equivalence(const VerifyOptions& opts) {
  const double tol = detail::pick_tol(opts, 1e-3);
  detail::Stopwatch timer;
  double worst = 0.0;
  const std::tuple<double, double, Complex> cases[] = {
      {2.0, 1.0, Complex(0.0, 0.0)},
      {2.0, 0.0, Complex(0.5, 0.0)},
      {2.0, 1.0, Complex(0.8, 0.0)}};
  for (auto [g, lambda, beta] : cases)
    worst = std::max(worst,
                     mp_equivalence_trace_distance(g, lambda, beta, FockDim(50)));
  return detail::make_report(
      "measure-and-prepare equals attenuate-then-squeeze (trace distance)",
      0.0, worst, tol, false, timer.seconds(), 60.0);
}

/// 10. Fidelity ordering f_prob >= f_det >= cft on a dense grid, and the
/// heralded-vs-classical gap shrinks monotonically to zero as the gain
/// grows.
inline VerifyReport criterion_ordering(const VerifyOptions& opts) {
  const double tol = detail::pick_tol(opts, 1e-12);
  detail::Stopwatch timer;
  double worst = 0.0;  // largest ordering violation
  for (int i = 0; i < 20; ++i) {
    for (int j = 0; j < 20; ++j) {
      const double g = 1.0 + 4.0 * i / 19.0;
      const double lambda = 6.0 * j / 19.0;
      const double fp = probabilistic_fidelity(g, lambda);
      const double fd = optimal_squeezer(g, lambda).fidelity;
      const double fc = classical_fidelity_threshold(g, lambda);
      worst = std::max({worst, fd - fp, fc - fd});
    }
  }
  bool monotone = true;
  for (double lambda : {0.5, 3.0}) {
    double previous = 2.0;
    for (double g : {2.0, 4.0, 8.0, 16.0}) {
      const double gap = probabilistic_fidelity(g, lambda) -
                         classical_fidelity_threshold(g, lambda);
      if (gap > previous) monotone = false;
      previous = gap;
    }
    if (previous > 0.05) monotone = false;  // gap must be heading to zero
  }
  VerifyReport r = detail::make_report(
      "ordering f_prob >= f_det >= cft on 20x20 grid; gap decreasing in g",
      0.0, std::max(worst, 0.0), tol, false, timer.seconds(), 1.0);
  r.passed = r.passed && monotone;
  if (!monotone) r.note = "gap not monotonically decreasing over g";
  return r;
}

inline std::vector<VerifyReport> acceptance_criteria(const VerifyOptions& opts) {
  return {criterion_headline(opts),       criterion_quadrature(opts),
          criterion_squeezer_simulation(opts), criterion_operator_norm(opts),
          criterion_trace_powers(opts),   criterion_cross_norm(opts),
          criterion_filters(opts),        criterion_montecarlo(opts),
          criterion_mp_equivalence(opts), criterion_ordering(opts)};
}

// ---------------------------------------------------------------------------
// Supplementary suite checks (module invariants wired into `verify`).
// ---------------------------------------------------------------------------

namespace detail {

inline VerifyReport check_branch_continuity(const VerifyOptions& opts) {
  const double tol = pick_tol(opts, 1e-12);
  Stopwatch timer;
  double worst = 0.0;
  for (double g : {1.5, 2.0, 3.0, 5.0}) {
    const double la = g - 1.0;
    worst = std::max(worst, std::abs((la + 1.0) / (g * g) -
                                     la / (la + (g - 1.0) * (g - 1.0))));
    const double lb = g * g - 1.0;
    worst = std::max(worst, std::abs(probabilistic_fidelity(g, lb) - 1.0));
  }
  return make_report("branch continuity at lambda = g-1 and g^2-1", 0.0,
                     worst, tol, false, timer.seconds(), 0.0);
}

inline VerifyReport check_squeezer_optimality(const VerifyOptions& opts) {
  const double tol = pick_tol(opts, 1e-8);
  Stopwatch timer;
  double worst = 0.0;
  const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
  for (double g : {1.5, 2.0, 3.0}) {
    for (double lambda : {0.3, 1.0, 2.5, 6.0}) {
      // golden-section maximum of the r-dependent fidelity
      double lo = 0.0, hi = std::acosh(std::max(g, 1.0 + 1e-9)) + 2.0;
      double c = hi - phi * (hi - lo), d = lo + phi * (hi - lo);
      auto f = [&](double r) { return squeezer_fidelity(g, lambda, r); };
      while (hi - lo > 1e-10) {
        if (f(c) > f(d)) {
          hi = d;
          d = c;
          c = hi - phi * (hi - lo);
        } else {
          lo = c;
          c = d;
          d = lo + phi * (hi - lo);
        }
      }
      const double brute = f(0.5 * (lo + hi));
      worst = std::max(
          worst, std::abs(brute - optimal_squeezer(g, lambda).fidelity));
    }
  }
  return make_report("optimal squeezer fidelity equals 1-D search max", 0.0,
                     worst, tol, false, timer.seconds(), 0.0);
}

inline VerifyReport check_norm_identities(const VerifyOptions& opts) {
  const double tol = pick_tol(opts, 1e-12);
  Stopwatch timer;
  double worst = 0.0;
  for (double g : {1.5, 2.0, 3.0}) {
    for (double lambda : {0.5, 1.0, 2.0, 4.0}) {
      const double x = optimal_thermal_x(g, lambda);
      worst = std::max(worst, std::abs(a_norm_closed(g, lambda, x) -
                                       optimal_squeezer(g, lambda).fidelity));
      const double xt = 1.0 / (lambda + 1.0);
      const double s = lambda + g * g + 1.0;
      const double rhs = 2.0 * (lambda + 1.0) /
                         (s + std::abs(lambda + 1.0 - g * g));
      worst = std::max(worst, std::abs(a_norm_closed(g, lambda, xt) - rhs));
    }
  }
  return make_report(
      "closed norm meets squeezer bound at optimal x; heralded identity at "
      "x = 1/(lambda+1)",
      0.0, worst, tol, false, timer.seconds(), 0.0);
}

inline VerifyReport check_squeezer_covariance(const VerifyOptions& opts) {
  const double tol = pick_tol(opts, 1e-6);
  Stopwatch timer;
  const FockDim dim(60);
  const double r = std::acosh(1.5);
  const Complex alpha(0.4, -0.3);
  const Vector base = coherent_state(Complex(0.2, 0.1), dim).amplitudes;
  FockOperator rho{base * base.adjoint(), true};

  const Matrix d_in = displacement_operator(alpha, dim);
  const Matrix d_out = displacement_operator(alpha * std::cosh(r), dim);
  FockOperator displaced{d_in * rho.matrix * d_in.adjoint(), true};
  const Matrix via_input = apply_squeezer(displaced, r, dim).matrix;
  const Matrix via_output =
      d_out * apply_squeezer(rho, r, dim).matrix * d_out.adjoint();
  const double dev = (via_input - via_output).cwiseAbs().maxCoeff();
  return make_report("squeezer displacement covariance (60/60)", 0.0, dev,
                     tol, false, timer.seconds(), 0.0);
}

inline VerifyReport check_ancilla_doubling(const VerifyOptions& opts) {
  const double tol = pick_tol(opts, 1e-8);
  Stopwatch timer;
  const FockDim dim(40);
  const Vector a = coherent_state(Complex(0.5, 0.2), dim).amplitudes;
  FockOperator rho{a * a.adjoint(), true};
  const double r = std::acosh(1.5);
  const Matrix small = apply_squeezer(rho, r, dim).matrix;
  const Matrix big = apply_squeezer(rho, r, FockDim(80)).matrix;
  const double dev = (small - big).cwiseAbs().maxCoeff();
  return make_report("squeezer output stable under ancilla doubling", 0.0,
                     dev, tol, false, timer.seconds(), 0.0);
}

inline VerifyReport check_a_structure(const VerifyOptions& opts) {
  const double tol = pick_tol(opts, 1e-10);
  Stopwatch timer;
  const AOperatorSpec spec{2.0, 3.0, 1.0 / 3.0, FockDim(18), FockDim(18)};
  const TwoModeOperator a = build_a(spec);
  const double herm = (a.matrix - a.matrix.adjoint()).cwiseAbs().maxCoeff();
  Eigen::SelfAdjointEigenSolver<Matrix> es(a.matrix, Eigen::EigenvaluesOnly);
  const double min_eig = es.eigenvalues().minCoeff();
  double off_block = 0.0;
  for (int m = 0; m < 18; ++m)
    for (int p = 0; p < 18; ++p)
      for (int n = 0; n < 18; ++n)
        for (int q = 0; q < 18; ++q)
          if (m + q != n + p)
            off_block = std::max(off_block,
                                 std::abs(a.entry(m, p, n, q)));
  const double dev = std::max({herm, -min_eig, off_block});
  return make_report("score operator Hermitian, PSD, block-diagonal", 0.0,
                     std::max(dev, 0.0), tol, false, timer.seconds(), 0.0);
}

inline VerifyReport check_norm_monotonicity(const VerifyOptions& opts) {
  const double tol = pick_tol(opts, 1e-12);
  Stopwatch timer;
  double worst = -1.0;  // any positive value = violation
  double previous = 0.0;
  for (int d : {5, 15, 25, 40}) {
    AOperatorSpec spec{2.0, 3.0, 1.0 / 3.0, FockDim(d), FockDim(d)};
    double value = 0.0;
    for (const ABlock& b : a_operator_blocks(spec))
      value = std::max(value, dominant_eigenvalue(b.matrix, 1e-11).value);
    if (d > 5) worst = std::max(worst, previous - value);
    previous = value;
  }
  return make_report("operator norm nondecreasing in truncation", 0.0,
                     std::max(worst, 0.0), tol, false, timer.seconds(), 0.0);
}

inline VerifyReport check_filter_success_monotonicity(const VerifyOptions& opts) {
  const double tol = pick_tol(opts, 1e-15);
  Stopwatch timer;
  const FockDim dim(30);
  const Vector a = coherent_state(Complex(0.9, 0.3), dim).amplitudes;
  FockOperator rho{a * a.adjoint(), true};
  double worst = 0.0;
  for (double x : {0.4, 0.8}) {  // x < 1: coefficients fixed, fewer kept terms
    double previous = -1.0;
    for (int n = 2; n < 20; n += 3) {
      const double prob = apply_filter(rho, x, n).success_probability;
      if (previous >= 0.0) worst = std::max(worst, previous - prob);
      previous = prob;
    }
  }
  return make_report("filter success probability grows with cutoff (x < 1)",
                     0.0, worst, tol, false, timer.seconds(), 0.0);
}

inline VerifyReport check_mp_thermal_oracle(const VerifyOptions& opts) {
  const double tol = pick_tol(opts, 1e-10);
  Stopwatch timer;
  double worst = 0.0;
  for (double c : {0.5, 1.0, 2.0}) {
    // quadrature error ~ (c^2/(c^2+2))^order: order 80 clears 1e-10 at c = 2
    const FockOperator out =
        heterodyne_measure_prepare(Complex(0.0, 0.0), c, FockDim(50), 80);
    const double x = c * c / (1.0 + c * c);
    for (int n = 0; n < 40; ++n) {
      const double expected = (1.0 - x) * std::pow(x, n);
      worst = std::max(worst, std::abs(out.matrix(n, n).real() - expected));
    }
    for (int n = 0; n < 25; ++n)  // off-diagonals vanish for beta = 0
      worst = std::max(worst, std::abs(out.matrix(n, n + 1)));
  }
  return make_report("measure-and-prepare on vacuum center is thermal", 0.0,
                     worst, tol, false, timer.seconds(), 0.0);
}

inline VerifyReport check_mc_conventions(const VerifyOptions& opts) {
  Stopwatch timer;
  const long n = 1000000;
  const CounterRng rng(opts.seed, 0);
  const PriorSpec prior{3.0};
  std::vector<double> photon(n), re2(n);
  for (long i = 0; i < n; ++i) {
    const Complex alpha = sample_prior(prior, rng, i);
    photon[static_cast<std::size_t>(i)] = std::norm(alpha);
    re2[static_cast<std::size_t>(i)] = alpha.real() * alpha.real();
  }
  Estimate photon_est = detail::reduce(photon, opts.seed);
  Estimate re_est = detail::reduce(re2, opts.seed);
  const double pull1 = std::abs(photon_est.mean - 1.0 / 3.0) / photon_est.stderror;
  const double pull2 = std::abs(re_est.mean - 1.0 / 6.0) / re_est.stderror;

  const CounterRng het(opts.seed, 1);
  std::vector<double> out2(n);
  for (long i = 0; i < n; ++i)
    out2[static_cast<std::size_t>(i)] =
        std::norm(sample_heterodyne(Complex(0.0, 0.0), het, i));
  Estimate het_est = detail::reduce(out2, opts.seed);
  const double pull3 = std::abs(het_est.mean - 1.0) / het_est.stderror;

  return make_report("sampler conventions: <n>=1/lambda, Var Re=1/(2l), "
                     "heterodyne noise 1",
                     0.0, std::max({pull1, pull2, pull3}),
                     pick_tol(opts, 4.0), false, timer.seconds(), 0.0);
}

inline VerifyReport check_mc_reproducibility(const VerifyOptions& opts) {
  Stopwatch timer;
  const Estimate a = mc_cft(2.0, 3.0, 20000, opts.seed);
  const Estimate b = mc_cft(2.0, 3.0, 20000, opts.seed);
  const bool same = a.mean == b.mean && a.stderror == b.stderror;
  VerifyReport r = make_report("monte-carlo bit-for-bit reproducible", 0.0,
                               same ? 0.0 : 1.0, 0.5, false, timer.seconds(),
                               0.0);
  return r;
}

inline VerifyReport check_mc_displacement(const VerifyOptions& opts) {
  Stopwatch timer;
  const Estimate centered = mc_cft(2.0, PriorSpec{3.0}, 400000, opts.seed);
  const Estimate displaced =
      mc_cft(2.0, PriorSpec{3.0, Complex(0.7, -0.4)}, 400000, opts.seed + 1);
  const double sigma = std::hypot(centered.stderror, displaced.stderror);
  const double pull = std::abs(centered.mean - displaced.mean) / sigma;
  return make_report("cft estimate invariant under prior displacement", 0.0,
                     pull, pick_tol(opts, 4.0), false, timer.seconds(), 0.0);
}

}  // namespace detail

/// Named verification suites, as exposed by the command line. Each suite
/// bundles the acceptance criteria it owns plus the module invariants worth
/// re-checking operationally.
inline std::vector<VerifyReport> verify_suite(const std::string& suite,
                                              const VerifyOptions& opts) {
  std::vector<VerifyReport> out;
  auto add = [&out](std::vector<VerifyReport> more) {
    for (auto& r : more) out.push_back(std::move(r));
  };
  if (suite == "closed-forms" || suite == "all")
    add({criterion_headline(opts), criterion_ordering(opts),
         detail::check_branch_continuity(opts),
         detail::check_squeezer_optimality(opts),
         detail::check_norm_identities(opts)});
  if (suite == "squeezer" || suite == "all")
    add({criterion_quadrature(opts), criterion_squeezer_simulation(opts),
         detail::check_squeezer_covariance(opts),
         detail::check_ancilla_doubling(opts)});
  if (suite == "a-operator" || suite == "all")
    add({criterion_operator_norm(opts), criterion_trace_powers(opts),
         criterion_cross_norm(opts), detail::check_a_structure(opts),
         detail::check_norm_monotonicity(opts)});
  if (suite == "filters" || suite == "all")
    add({criterion_filters(opts),
         detail::check_filter_success_monotonicity(opts)});
  if (suite == "mp-equivalence" || suite == "all")
    add({criterion_mp_equivalence(opts),
         detail::check_mp_thermal_oracle(opts)});
  if (suite == "montecarlo" || suite == "all")
    add({criterion_montecarlo(opts), detail::check_mc_conventions(opts),
         detail::check_mc_reproducibility(opts),
         detail::check_mc_displacement(opts)});
  if (out.empty())
    throw std::invalid_argument(
        "verify: unknown suite '" + suite +
        "' (expected closed-forms | squeezer | a-operator | filters | "
        "mp-equivalence | montecarlo | all)");
  return out;
}

}  // namespace ampbench
