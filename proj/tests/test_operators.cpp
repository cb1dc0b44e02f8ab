#include <doctest.h>

#include "test_util.hpp"
#include "wkfilter/errors.hpp"
#include "wkfilter/operators.hpp"

using namespace wkf;
using testutil::Ma1Pair;

namespace {
const auto kWhite = SpectralDensity::moving_average({Complex(1, 0)});
const auto kZero = SpectralDensity::moving_average({Complex(0, 0)});
}  // namespace

TEST_CASE("no noise collapses R and Q to zero") {
  const OperatorMatrix r = build_operator(OperatorKind::R, kWhite, kZero, 16, 256);
  CHECK(r.entries.cwiseAbs().maxCoeff() < 1e-14);
  CHECK(r.row_offset == 1);
  const OperatorMatrix q = build_operator(OperatorKind::Q, kWhite, kZero, 16, 256);
  CHECK(q.entries.cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("P entries of the worked pair follow the geometric closed form") {
  const Ma1Pair ex = Ma1Pair::make(0.6, -0.4);
  const OperatorMatrix p = build_operator(OperatorKind::P, ex.f(), ex.g(), 24, 4096);
  for (int l = 0; l < 24; ++l) {
    for (int k = 0; k < 24; ++k) {
      CHECK(p.entries(l, k).real() == doctest::Approx(ex.p(l - k)).epsilon(1e-10));
      CHECK(std::abs(p.entries(l, k).imag()) < 1e-13);
    }
  }
}

TEST_CASE("columns of the shifted coefficient operator match the worked pair") {
  const Ma1Pair ex = Ma1Pair::make(0.6, -0.4);
  const OperatorMatrix r1 =
      build_operator(OperatorKind::RN, ex.f(), ex.g(), 24, 4096, 1, 8);
  const double scale = (ex.y - ex.phi) * (1.0 - ex.phi * ex.y) / (ex.x * (1.0 - ex.y * ex.y));
  for (int l = 0; l < 24; ++l) {
    CHECK(r1.entries(l, 0).real() ==
          doctest::Approx(std::pow(ex.y, l) * scale).epsilon(1e-10));
    CHECK(r1.entries(l, 1).real() ==
          doctest::Approx(std::pow(ex.y, l + 1) * scale).epsilon(1e-10));
    for (int m = 2; m < 8; ++m) CHECK(std::abs(r1.entries(l, m)) < 1e-14);  // beyond N
  }
}

TEST_CASE("minimality failure blocks operator assembly") {
  const auto z = SpectralDensity::moving_average({Complex(1, 0), Complex(-1, 0)});
  CHECK_THROWS_AS(build_operator(OperatorKind::P, z, z, 16, 256), MinimalityError);
}

TEST_CASE("the hankel companion of P carries the summed-lag coefficients") {
  const Ma1Pair ex = Ma1Pair::make(0.6, -0.4);
  const OperatorMatrix y = build_operator(OperatorKind::Y, ex.f(), ex.g(), 16, 4096);
  for (int k = 0; k < 16; ++k) {
    for (int l = 0; l < 16; ++l) {
      CHECK(y.entries(k, l).real() == doctest::Approx(ex.p(k + l)).epsilon(1e-10));
    }
  }
}

TEST_CASE("inverting P: identity case and the worked-pair tridiagonal form") {
  const OperatorMatrix p_id = build_operator(OperatorKind::P, kWhite, kZero, 12, 256);
  const InversionResult inv_id = invert_p(p_id);
  CHECK(inv_id.v.entries.isApprox(Eigen::MatrixXcd::Identity(12, 12), 1e-12));

  const Ma1Pair ex = Ma1Pair::make(0.6, -0.4);
  const int L = 48;
  const OperatorMatrix p = build_operator(OperatorKind::P, ex.f(), ex.g(), L, 4096);
  const InversionResult direct = invert_p(p);
  CHECK(direct.residual < 1e-10);
  CHECK(direct.condition_estimate > 1.0);
  // Interior rows follow the tridiagonal closed form; the last rows feel
  // the truncation.
  for (int l = 1; l < L - 8; ++l) {
    CHECK(direct.v.entries(l, l).real() ==
          doctest::Approx(ex.x * (1 + ex.y * ex.y)).epsilon(1e-8));
    CHECK(direct.v.entries(l, l - 1).real() ==
          doctest::Approx(-ex.x * ex.y).epsilon(1e-8));
    if (l + 2 < L) CHECK(std::abs(direct.v.entries(l, l + 2)) < 1e-8);
  }
  CHECK(direct.v.entries(0, 0).real() == doctest::Approx(ex.x).epsilon(1e-10));

  // Factor route agrees with the dense solve on the leading block.
  const Eigen::ArrayXd s = ex.f().evaluate(4096) + ex.g().evaluate(4096);
  const FactorCoeffs theta = spectral_factorize(s, L, 1e-8);
  const InversionResult factored = invert_p(p, &theta);
  CHECK(factored.from_factor);
  CHECK((factored.v.entries - direct.v.entries)
            .topLeftCorner(L / 2, L / 2)
            .cwiseAbs()
            .maxCoeff() < 1e-8);
}

TEST_CASE("requesting the inverse kind directly matches an explicit inversion") {
  const Ma1Pair ex = Ma1Pair::make(0.5, 0.2);
  const OperatorMatrix v = build_operator(OperatorKind::V, ex.f(), ex.g(), 24, 1024);
  const OperatorMatrix p = build_operator(OperatorKind::P, ex.f(), ex.g(), 24, 1024);
  CHECK(v.kind == OperatorKind::V);
  CHECK((v.entries - invert_p(p).v.entries).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("singular truncation raises an error carrying a condition estimate") {
  OperatorMatrix p;
  p.kind = OperatorKind::P;
  p.entries = Eigen::MatrixXcd::Zero(6, 6);
  p.truncation = 6;
  CHECK_THROWS_AS(invert_p(p), SingularOperatorError);
}

TEST_CASE("coefficient solve: trivial kernels and the dual inverse route") {
  const Ma1Pair ex = Ma1Pair::make(0.5, 0.3);
  const int L = 48, grid = 2048;
  const OperatorMatrix p = build_operator(OperatorKind::P, ex.f(), ex.g(), L, grid);
  const OperatorMatrix r = build_operator(OperatorKind::R, ex.f(), ex.g(), L, grid,
                                          std::nullopt, 2);

  // Zero functional: zero coefficients.
  const CoefficientSolution zero = solve_coefficients(p, r, Eigen::VectorXcd::Zero(2));
  CHECK(zero.c.norm() == 0.0);

  // No noise: R vanishes, so any functional yields zero coefficients.
  const OperatorMatrix p0 = build_operator(OperatorKind::P, kWhite, kZero, L, grid);
  const OperatorMatrix r0 = build_operator(OperatorKind::R, kWhite, kZero, L, grid,
                                           std::nullopt, 2);
  Eigen::VectorXcd a(2);
  a << Complex(1, 0), Complex(-2, 0);
  CHECK(solve_coefficients(p0, r0, a).c.norm() < 1e-12);

  // Dense solve equals the factor-inverse route.
  const CoefficientSolution dense = solve_coefficients(p, r, a);
  CHECK(dense.residual < 1e-9);
  CHECK_FALSE(dense.used_least_squares);
  const Eigen::ArrayXd s = ex.f().evaluate(grid) + ex.g().evaluate(grid);
  const FactorCoeffs theta = spectral_factorize(s, L, 1e-8);
  const Eigen::VectorXcd via_factor =
      invert_p(p, &theta).v.entries * (r.entries * a);
  CHECK((dense.c - via_factor).cwiseAbs().maxCoeff() < 1e-8);
}

TEST_CASE("hermitian structure and positive definiteness under minimality") {
  SplitMix64 rng(99);
  for (int trial = 0; trial < 3; ++trial) {
    const auto f = SpectralDensity::moving_average(testutil::random_ma2(rng));
    const auto g = SpectralDensity::moving_average(testutil::random_ma2(rng));
    const OperatorMatrix p = build_operator(OperatorKind::P, f, g, 32, 1024);
    const OperatorMatrix q = build_operator(OperatorKind::Q, f, g, 32, 1024,
                                            std::nullopt, 8);
    CHECK((p.entries - p.entries.adjoint()).cwiseAbs().maxCoeff() < 1e-12);
    CHECK((q.entries - q.entries.adjoint()).cwiseAbs().maxCoeff() < 1e-12);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(p.entries);
    CHECK(eig.eigenvalues().minCoeff() > 0.0);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig_q(q.entries);
    CHECK(eig_q.eigenvalues().minCoeff() > -1e-12);
  }
}

TEST_CASE("coefficients stabilize as the truncation doubles") {
  // A grid density that is not a trigonometric polynomial, so the
  // correction genuinely has infinite support.
  const int grid = 2048;
  const Eigen::ArrayXd lambda = frequency_grid(grid);
  Eigen::ArrayXd fs(grid), gs(grid);
  for (int j = 0; j < grid; ++j) {
    fs[j] = std::exp(0.9 * std::cos(lambda[j]));
    gs[j] = std::exp(-0.5 * std::cos(2.0 * lambda[j]));
  }
  const auto f = SpectralDensity::from_samples(fs);
  const auto g = SpectralDensity::from_samples(gs);
  Eigen::VectorXcd a(3);
  a << Complex(1, 0), Complex(0.4, 0), Complex(-0.2, 0);

  const auto solve_at = [&](int L) {
    const OperatorMatrix p = build_operator(OperatorKind::P, f, g, L, grid);
    const OperatorMatrix r =
        build_operator(OperatorKind::R, f, g, L, grid, std::nullopt, 3);
    return solve_coefficients(p, r, a).c;
  };
  const Eigen::VectorXcd c1 = solve_at(32);
  const Eigen::VectorXcd c2 = solve_at(64);
  for (int k = 0; k < 8; ++k) CHECK(std::abs(c1[k] - c2[k]) < 1e-7);
}
