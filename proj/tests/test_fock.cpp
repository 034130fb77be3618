#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>
#include <random>

#include "ampbench/fock.hpp"

using namespace ampbench;
using Catch::Matchers::WithinAbs;

namespace {

// Independent oracle: upper Poisson tail P(N >= d) for mean mu, summed to
// convergence. Bounds the truncation loss of a coherent state.
double poisson_tail(double mu, int d) {
  double term = std::exp(-mu);
  for (int n = 1; n <= d; ++n) term *= mu / n;  // now P(N = d)
  double sum = 0.0;
  while (term > 1e-300) {
    sum += term;
    ++d;
    term *= mu / d;
    if (term < 1e-30 * sum) break;
  }
  return sum;
}

Matrix random_hermitian(int d, std::mt19937& rng) {
  std::normal_distribution<double> gauss;
  Matrix m(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) m(i, j) = Complex(gauss(rng), gauss(rng));
  return 0.5 * (m + Matrix(m.adjoint()));
}

}  // namespace

TEST_CASE("coherent state amplitudes") {
  const FockVector vac = coherent_state(0.0, 5);
  REQUIRE_THAT(std::abs(vac.amplitudes[0] - 1.0), WithinAbs(0.0, 1e-15));
  for (int n = 1; n < 5; ++n)
    REQUIRE_THAT(std::abs(vac.amplitudes[n]), WithinAbs(0.0, 1e-15));

  // alpha = 1, dim 2: both amplitudes equal exp(-1/2)
  const FockVector two = coherent_state(1.0, 2);
  REQUIRE_THAT(two.amplitudes[0].real(), WithinAbs(std::exp(-0.5), 1e-15));
  REQUIRE_THAT(two.amplitudes[1].real(), WithinAbs(std::exp(-0.5), 1e-15));

  // truncation loss at dim 30 bounded by the Poisson tail
  const FockVector big = coherent_state(1.0, 30);
  const double tail = poisson_tail(1.0, 30);
  REQUIRE(tail < 1e-12);
  REQUIRE_THAT(big.squared_norm(), WithinAbs(1.0, tail + 1e-14));
}

TEST_CASE("coherent overlap closed form") {
  REQUIRE_THAT(std::abs(coherent_overlap(0.0, 0.0) - 1.0), WithinAbs(0.0, 1e-15));
  REQUIRE_THAT(std::abs(coherent_overlap(1.0, 1.0) - 1.0), WithinAbs(0.0, 1e-15));
  REQUIRE_THAT(coherent_overlap(0.0, 1.0).real(), WithinAbs(std::exp(-0.5), 1e-15));
}

TEST_CASE("overlap modulus identity and truncated agreement") {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (int k = 0; k < 50; ++k) {
    const Complex a(u(rng), u(rng)), b(u(rng), u(rng));
    REQUIRE_THAT(std::norm(coherent_overlap(a, b)),
                 WithinAbs(std::exp(-std::norm(a - b)), 1e-13));
  }
  // truncated inner product agrees within the analytic tail bound
  std::uniform_real_distribution<double> v(-1.4, 1.4);  // |alpha| <= 2
  for (int k = 0; k < 20; ++k) {
    const Complex a(v(rng), v(rng)), b(v(rng), v(rng));
    const int d = 40;
    const Vector va = coherent_state(a, d).amplitudes;
    const Vector vb = coherent_state(b, d).amplitudes;
    const Complex trunc = va.dot(vb);  // conjugates the left factor
    const double bound = std::sqrt(poisson_tail(std::norm(a), d)) *
                             std::sqrt(poisson_tail(std::norm(b), d)) +
                         std::sqrt(poisson_tail(std::norm(a), d)) +
                         std::sqrt(poisson_tail(std::norm(b), d));
    REQUIRE(std::abs(trunc - coherent_overlap(a, b)) <= bound + 1e-13);
  }
}

TEST_CASE("thermal state") {
  const FockOperator ground = thermal_state(0.0, 4);
  REQUIRE_THAT(ground.matrix(0, 0).real(), WithinAbs(1.0, 1e-15));
  REQUIRE_THAT(ground.trace(), WithinAbs(1.0, 1e-15));

  // geometric-sum oracle for the truncated trace
  double geometric = 0.0;
  for (int n = 0; n < 10; ++n) geometric += 0.5 * std::pow(0.5, n);
  const FockOperator half = thermal_state(0.5, 10);
  REQUIRE_THAT(half.trace(), WithinAbs(geometric, 1e-15));
  REQUIRE_THAT(half.trace(), WithinAbs(1.0 - std::pow(0.5, 10), 1e-15));

  const FockOperator quarter = thermal_state(0.25, 2);
  REQUIRE_THAT(quarter.matrix(0, 0).real(), WithinAbs(0.75, 1e-15));
  REQUIRE_THAT(quarter.matrix(1, 1).real(), WithinAbs(0.1875, 1e-15));

  REQUIRE_THROWS_AS(thermal_state(1.0, 4), std::domain_error);
  REQUIRE_THROWS_AS(thermal_state(-0.1, 4), std::domain_error);
}

TEST_CASE("mode operators") {
  REQUIRE_THROWS_AS(mode_operators(FockDim(1)), std::invalid_argument);
  const ModeOperators ops = mode_operators(6);

  Vector one = Vector::Zero(6);
  one[1] = 1.0;
  Vector lowered = ops.annihilation * one;
  REQUIRE_THAT(lowered[0].real(), WithinAbs(1.0, 1e-15));

  Vector zero = Vector::Zero(6);
  zero[0] = 1.0;
  Vector raised = ops.creation * zero;
  REQUIRE_THAT(raised[1].real(), WithinAbs(1.0, 1e-15));

  // <n> on a coherent state equals |alpha|^2
  const ModeOperators big = mode_operators(30);
  const Vector coh = coherent_state(1.0, 30).amplitudes;
  const double n_exp = (coh.adjoint() * big.number * coh)(0, 0).real();
  REQUIRE_THAT(n_exp, WithinAbs(1.0, 1e-10));
}

TEST_CASE("tensor product and index convention") {
  const Matrix i2 = Matrix::Identity(2, 2);
  const TwoModeOperator i4 = tensor_product(i2, i2);
  REQUIRE((i4.matrix - Matrix::Identity(4, 4)).cwiseAbs().maxCoeff() < 1e-15);

  Matrix d1 = Matrix::Zero(2, 2), d2 = Matrix::Zero(2, 2);
  d1.diagonal() << 1.0, 2.0;
  d2.diagonal() << 3.0, 4.0;
  const TwoModeOperator t = tensor_product(d1, d2);
  REQUIRE_THAT(t.entry(0, 0, 0, 0).real(), WithinAbs(3.0, 1e-15));
  REQUIRE_THAT(t.entry(0, 1, 0, 1).real(), WithinAbs(4.0, 1e-15));
  REQUIRE_THAT(t.entry(1, 0, 1, 0).real(), WithinAbs(6.0, 1e-15));
  REQUIRE_THAT(t.entry(1, 1, 1, 1).real(), WithinAbs(8.0, 1e-15));

  // rank-1 projector lands on flattened index (0, 1) = 0*dim_in + 1
  Matrix p0 = Matrix::Zero(2, 2), p1 = Matrix::Zero(2, 2);
  p0(0, 0) = 1.0;
  p1(1, 1) = 1.0;
  const TwoModeOperator proj = tensor_product(p0, p1);
  REQUIRE_THAT(proj.matrix(1, 1).real(), WithinAbs(1.0, 1e-15));
  REQUIRE_THAT(proj.matrix.cwiseAbs().sum(), WithinAbs(1.0, 1e-15));
}

TEST_CASE("partial trace") {
  std::mt19937 rng(11);
  const Matrix rho = random_hermitian(3, rng);
  const Matrix sigma = random_hermitian(4, rng);
  const TwoModeOperator joint = tensor_product(rho, sigma);

  const FockOperator keep_out = partial_trace(joint, Mode::Output);
  REQUIRE((keep_out.matrix - rho * sigma.trace()).cwiseAbs().maxCoeff() < 1e-12);
  const FockOperator keep_in = partial_trace(joint, Mode::Input);
  REQUIRE((keep_in.matrix - sigma * rho.trace()).cwiseAbs().maxCoeff() < 1e-12);

  // maximally entangled 2x2 state traces to I/2 on either side
  Vector bell = Vector::Zero(4);
  bell[0] = bell[3] = 1.0 / std::sqrt(2.0);
  TwoModeOperator bell_op{Matrix(bell * bell.adjoint()), 2, 2};
  for (Mode m : {Mode::Output, Mode::Input}) {
    const FockOperator red = partial_trace(bell_op, m);
    REQUIRE((red.matrix - 0.5 * Matrix::Identity(2, 2)).cwiseAbs().maxCoeff() < 1e-14);
  }

  // trace preservation on random Hermitian two-mode operators
  for (int k = 0; k < 10; ++k) {
    TwoModeOperator x{random_hermitian(12, rng), 3, 4};
    REQUIRE_THAT(partial_trace(x, Mode::Output).trace(),
                 WithinAbs(x.matrix.trace().real(), 1e-12));
    REQUIRE_THAT(partial_trace(x, Mode::Input).trace(),
                 WithinAbs(x.matrix.trace().real(), 1e-12));
  }
}

TEST_CASE("unitary from generator") {
  const UnitaryResult id = unitary_from_generator(Matrix::Zero(5, 5));
  REQUIRE((id.matrix - Matrix::Identity(5, 5)).cwiseAbs().maxCoeff() < 1e-14);

  Matrix phase(1, 1);
  phase(0, 0) = Complex(0.0, 0.7);
  const UnitaryResult u1 = unitary_from_generator(phase);
  REQUIRE_THAT(std::abs(u1.matrix(0, 0) - std::exp(Complex(0.0, 0.7))),
               WithinAbs(0.0, 1e-14));

  Matrix not_anti = Matrix::Identity(3, 3);
  REQUIRE_THROWS_AS(unitary_from_generator(not_anti), std::invalid_argument);

  // two-mode squeezer generator at dims (40, 40): it conserves the
  // photon-number difference, so exp splits into sector blocks; the overall
  // unitarity defect is the worst block defect.
  const int d = 40;
  const ModeOperators sys = mode_operators(d);
  const double r = 0.8;
  for (int delta = -(d - 1); delta < d; ++delta) {
    const int s = d - std::abs(delta);
    Matrix gen = Matrix::Zero(s, s);
    for (int j = 0; j + 1 < s; ++j) {
      const int m = std::max(delta, 0) + j;
      const int p = std::max(-delta, 0) + j;
      const double c = r * std::sqrt(double(m + 1) * (p + 1));
      gen(j + 1, j) = c;
      gen(j, j + 1) = -c;
    }
    REQUIRE(unitary_from_generator(gen).unitarity_defect < 1e-8);
  }
  // sector structure of the dense generator: no cross-sector entries
  const TwoModeOperator up = tensor_product(sys.creation, sys.creation);
  const TwoModeOperator dn = tensor_product(sys.annihilation, sys.annihilation);
  const Matrix k = r * (up.matrix - dn.matrix);
  for (int m = 0; m < d; m += 7)
    for (int p = 0; p < d; p += 7)
      for (int n = 0; n < d; n += 7)
        for (int q = 0; q < d; q += 7)
          if (m - p != n - q)
            REQUIRE(std::abs(k(m * d + p, n * d + q)) == 0.0);
}

TEST_CASE("dominant eigenvalue by power iteration") {
  REQUIRE_THAT(dominant_eigenvalue(Matrix::Identity(7, 7), 1e-12).value,
               WithinAbs(1.0, 1e-10));

  Matrix diag = Matrix::Zero(3, 3);
  diag.diagonal() << 1.0, 2.0, 3.0;
  const DominantEigen top = dominant_eigenvalue(diag, 1e-12);
  REQUIRE_THAT(top.value, WithinAbs(3.0, 1e-9));
  REQUIRE_THAT(std::abs(top.vector[2]), WithinAbs(1.0, 1e-6));

  // random PSD spectra: value within tol of the max eigenvalue
  std::mt19937 rng(23);
  for (int k = 0; k < 5; ++k) {
    Matrix h = random_hermitian(20, rng);
    h = h * h.adjoint();  // PSD
    Eigen::SelfAdjointEigenSolver<Matrix> es(h, Eigen::EigenvaluesOnly);
    const double exact = es.eigenvalues().maxCoeff();
    REQUIRE_THAT(dominant_eigenvalue(h, 1e-11).value,
                 WithinAbs(exact, 1e-7 * exact));
  }

  // an unreachable tolerance at a tiny iteration cap surfaces the last iterate
  Matrix slow = Matrix::Zero(2, 2);
  slow.diagonal() << 2.0, 1.0;
  try {
    dominant_eigenvalue(slow, 1e-30, 3);
    FAIL("expected ConvergenceError");
  } catch (const ConvergenceError& e) {
    REQUIRE(e.iterations == 3);
    REQUIRE(e.last_estimate > 1.0);
  }
}

TEST_CASE("trace power") {
  REQUIRE_THAT(trace_power(Matrix::Identity(3, 3), 2), WithinAbs(3.0, 1e-14));
  Matrix d2 = Matrix::Zero(2, 2);
  d2.diagonal() << 1.0, 2.0;
  REQUIRE_THAT(trace_power(d2, 2), WithinAbs(5.0, 1e-14));
  std::mt19937 rng(3);
  const Matrix h = random_hermitian(8, rng);
  Eigen::SelfAdjointEigenSolver<Matrix> es(h, Eigen::EigenvaluesOnly);
  for (int p = 1; p <= 4; ++p) {
    double expected = 0.0;
    for (int i = 0; i < 8; ++i) expected += std::pow(es.eigenvalues()[i], p);
    REQUIRE_THAT(trace_power(h, p), WithinAbs(expected, 1e-10));
  }
}

TEST_CASE("displacement operator displaces coherent states") {
  const FockDim dim(40);
  const Complex alpha(0.4, -0.2), beta(0.3, 0.5);
  const Matrix d = displacement_operator(alpha, dim);
  const Vector displaced = d * coherent_state(beta, dim).amplitudes;
  const Vector expected = coherent_state(alpha + beta, dim).amplitudes;
  // equal up to the Weyl phase exp((alpha conj(beta) - conj(alpha) beta)/2)
  const Complex phase = std::exp(0.5 * (alpha * std::conj(beta) -
                                        std::conj(alpha) * beta));
  REQUIRE((displaced - phase * expected).cwiseAbs().maxCoeff() < 1e-10);
}
