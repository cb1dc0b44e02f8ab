#include <doctest.h>

#include "test_util.hpp"
#include "wkfilter/errors.hpp"
#include "wkfilter/minimax.hpp"
#include "wkfilter/oracle.hpp"

using namespace wkf;
using testutil::Ma1Pair;

namespace {

const auto kWhite = SpectralDensity::moving_average({Complex(1, 0)});
const auto kZero = SpectralDensity::moving_average({Complex(0, 0)});

FunctionalSpec functional(std::initializer_list<double> values) {
  FunctionalSpec a;
  for (double v : values) a.coeffs.push_back(Complex(v, 0.0));
  return a;
}

MinimaxOptions fast_options() {
  MinimaxOptions opts;
  opts.truncation = 32;
  opts.grid = 512;
  return opts;
}

}  // namespace

TEST_CASE("h components: no noise and the symmetric white case") {
  const FunctionalSpec a = functional({1.0, 0.5});
  const FilterSolution clean = solve_filter(kWhite, kZero, a, 32, 512);
  const auto [hf0, hg0] = h_components(kWhite, kZero, clean);
  const Eigen::ArrayXcd symbol = a.symbol(512);
  for (int j = 0; j < 512; j += 17) {
    CHECK(hf0[j] == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(hg0[j] == doctest::Approx(std::abs(symbol[j])).epsilon(1e-10));
  }

  const FilterSolution white = solve_filter(kWhite, kWhite, functional({1.0}), 32, 512);
  const auto [hf1, hg1] = h_components(kWhite, kWhite, white);
  for (int j = 0; j < 512; j += 17) {
    CHECK(hf1[j] == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(hg1[j] == doctest::Approx(0.5).epsilon(1e-12));
  }
}

TEST_CASE("h components match the quotient evaluated through the characteristic") {
  const Ma1Pair ex = Ma1Pair::make(0.6, -0.4);
  const FunctionalSpec a = functional({1.0, 1.0});
  const FilterSolution sol = solve_filter(ex.f(), ex.g(), a, 48, 2048);
  const auto [hf, hg] = h_components(ex.f(), ex.g(), sol);
  // Independent evaluation: h_f = |A - h|, h_g = |h| pointwise.
  const Eigen::ArrayXcd symbol = a.symbol(2048);
  for (int j = 0; j < 2048; j += 61) {
    CHECK(hf[j] == doctest::Approx(std::abs(symbol[j] - sol.h[j])).epsilon(1e-9));
    CHECK(hg[j] == doctest::Approx(std::abs(sol.h[j])).epsilon(1e-9));
  }
}

TEST_CASE("power class: the constant pair satisfies the defining equations") {
  const int grid = 512;
  for (const double power : {0.7, 1.0, 2.3}) {
    const Eigen::ArrayXd f = Eigen::ArrayXd::Constant(grid, power);
    const Eigen::ArrayXd g = Eigen::ArrayXd::Constant(grid, power);
    const MinimaxResiduals res =
        power_equation_residuals(f, g, functional({1.0}), 32, power, power);
    CHECK(res.eq_f < 1e-12);
    CHECK(res.eq_g < 1e-12);
    CHECK(res.power_f < 1e-12);
    CHECK(res.delta_identity < 1e-10);
  }
}

TEST_CASE("power class solver recovers the constant pair with level one half") {
  const MinimaxSolution sol =
      least_favorable_power(PowerPairClass{1.5, 1.5}, functional({1.0}), fast_options());
  CHECK((sol.f0 - 1.5).abs().maxCoeff() < 1e-9);
  CHECK((sol.g0 - 1.5).abs().maxCoeff() < 1e-9);
  CHECK(sol.alpha1 == doctest::Approx(0.5).epsilon(1e-10));
  CHECK(sol.alpha2 == doctest::Approx(0.5).epsilon(1e-10));
  CHECK(sol.delta0 == doctest::Approx(0.75).epsilon(1e-10));  // mean of fg/(f+g)
  CHECK(sol.residuals.delta_identity < 1e-10);
  // The robust characteristic stays in the causal class.
  CHECK(sol.filter.diagnostics.causality_defect < 1e-8);
}

TEST_CASE("power class: a vanishing noise budget forces zero noise and zero error") {
  const MinimaxSolution sol =
      least_favorable_power(PowerPairClass{1.0, 0.0}, functional({1.0}), fast_options());
  CHECK(sol.g0.abs().maxCoeff() == 0.0);
  CHECK(sol.delta0 == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("power class solutions are not beaten by the brute-force search") {
  SplitMix64 rng(5);
  for (int trial = 0; trial < 2; ++trial) {
    const double p1 = 0.5 + 1.5 * rng.next_uniform();
    const double p2 = 0.5 + 1.5 * rng.next_uniform();
    const PowerPairClass cls{p1, p2};
    const MinimaxSolution sol = least_favorable_power(cls, functional({1.0}), fast_options());
    GridMaxParams params;
    params.nodes = 24;
    params.restarts = 6;
    params.truncation = 24;
    params.grid = 256;
    const GridMaxResult best =
        grid_maximize_delta(cls, functional({1.0}), params, 1234 + trial);
    CHECK(best.delta <= sol.delta0 + 1e-3);
  }
}

TEST_CASE("fixed signal: constant noise is least favorable against a white signal") {
  const MinimaxSolution sol =
      least_favorable_given_f(kWhite, 0.8, functional({1.0}), fast_options());
  CHECK((sol.g0 - 0.8).abs().maxCoeff() < 1e-8);
  CHECK(sol.alpha2 == doctest::Approx(1.0 / 1.8).epsilon(1e-8));
  CHECK(sol.residuals.power_g < 1e-10);
  CHECK(sol.residuals.eq_g < 1e-8);
}

TEST_CASE("fixed signal: a vanishing noise budget drives the noise to zero") {
  const MinimaxSolution sol =
      least_favorable_given_f(kWhite, 1e-6, functional({1.0}), fast_options());
  CHECK(sol.g0.maxCoeff() < 1e-4);
  CHECK(sol.g0.mean() == doctest::Approx(1e-6).epsilon(1e-6));
  CHECK_THROWS_AS(least_favorable_given_f(kWhite, 0.0, functional({1.0}), fast_options()),
                  ValidationError);
}

TEST_CASE("fixed signal: the clipped form holds for a colored signal") {
  const auto f = SpectralDensity::moving_average({Complex(1, 0), Complex(-0.5, 0)});
  const MinimaxSolution sol =
      least_favorable_given_f(f, 1.0, functional({1.0}), fast_options());
  CHECK(sol.residuals.eq_g < 1e-8);
  CHECK(sol.residuals.power_g < 1e-8);
  CHECK((sol.g0 < -1e-12).any() == false);

  // The brute-force search over the matching singleton-band class should
  // not beat it by more than discretization slack.
  BandContaminationClass band;
  band.v = f.evaluate(256);
  band.u = band.v;
  band.P1 = band.v.mean();
  band.g1 = Eigen::ArrayXd::Zero(256);
  band.eps = 1.0;
  band.P2 = 1.0;
  GridMaxParams params;
  params.nodes = 24;
  params.restarts = 6;
  params.truncation = 24;
  params.grid = 256;
  const GridMaxResult best = grid_maximize_delta(band, functional({1.0}), params, 99);
  CHECK(best.delta <= sol.delta0 + 2e-3);
}

TEST_CASE("joint class: symmetric constants saturate the reciprocal-power constraint") {
  const double P0 = 0.8;
  const MinimaxSolution sol =
      least_favorable_joint(JointMinimalClass{P0}, functional({1.0}), fast_options());
  CHECK((sol.f0 - 0.5 / P0).abs().maxCoeff() < 1e-9);
  CHECK((sol.g0 - 0.5 / P0).abs().maxCoeff() < 1e-9);
  CHECK(sol.beta1 == doctest::Approx(0.5 / P0).epsilon(1e-9));
  CHECK(sol.beta2 == doctest::Approx(0.5 / P0).epsilon(1e-9));
  CHECK((sol.f0 + sol.g0).inverse().mean() == doctest::Approx(P0).epsilon(1e-10));
  CHECK_THROWS_AS(least_favorable_joint(JointMinimalClass{-1.0}, functional({1.0}),
                                        fast_options()),
                  ValidationError);
}

TEST_CASE("joint class: stationary pair holds its contracts, the class is unbounded") {
  const JointMinimalClass cls{1.1};
  const FunctionalSpec a = functional({1.0});
  const MinimaxSolution sol = least_favorable_joint(cls, a, fast_options());
  CHECK(sol.residuals.eq_f < 1e-8);
  CHECK(sol.residuals.eq_g < 1e-8);
  CHECK(sol.residuals.power_f < 1e-8);
  CHECK(sol.residuals.delta_identity < 1e-10);

  // The reciprocal-power constraint does not cap the error: a smooth
  // density with a deep valley and a tall bulk stays admissible while the
  // error grows without bound, so the stationary pair is not a global
  // maximizer and a brute-force search can legitimately beat it.
  const int grid = 256;
  const Eigen::ArrayXd lambda = frequency_grid(grid);
  Eigen::ArrayXd s = (4.0 * lambda.cos()).exp();
  s *= s.inverse().mean() / cls.P0;  // constraint active
  CHECK(s.inverse().mean() == doctest::Approx(cls.P0).epsilon(1e-12));
  const Eigen::ArrayXd half = 0.5 * s;
  const double lopsided = solve_filter_samples(half, half, a, 24).mse;
  CHECK(lopsided > 10.0 * sol.delta0);
}

TEST_CASE("band class collapses: singleton band and undiluted nominal noise") {
  const int grid = 512;
  const Eigen::ArrayXd f = Ma1Pair::make(0.5, 0.0).f().evaluate(grid);
  BandContaminationClass cls;
  cls.v = f;
  cls.u = f;
  cls.P1 = f.mean();
  cls.g1 = Eigen::ArrayXd::Constant(grid, 0.9);
  cls.eps = 0.0;
  cls.P2 = 0.9;
  MinimaxOptions opts = fast_options();
  opts.grid = grid;
  const MinimaxSolution sol = least_favorable_band_eps(cls, functional({1.0}), opts);
  CHECK((sol.f0 - f).abs().maxCoeff() == 0.0);       // u = v pins the signal density
  CHECK((sol.g0 - cls.g1).abs().maxCoeff() == 0.0);  // eps = 0 pins the noise density
  CHECK(sol.residuals.comp_slack < 1e-8);
}

TEST_CASE("band class: a wide band stays interior and the constant pair wins") {
  const int grid = 256;
  const Eigen::ArrayXd lambda = frequency_grid(grid);
  BandContaminationClass cls;
  cls.v = 0.4 + 0.2 * lambda.cos();
  cls.u = 1.6 + 0.2 * lambda.cos();
  cls.P1 = 1.0;
  cls.g1 = Eigen::ArrayXd::Constant(grid, 0.8);
  cls.eps = 0.3;
  cls.P2 = 1.0;
  MinimaxOptions opts = fast_options();
  opts.grid = grid;
  opts.truncation = 24;
  const MinimaxSolution sol = least_favorable_band_eps(cls, functional({1.0}), opts);
  CHECK((sol.f0 - 1.0).abs().maxCoeff() < 1e-8);
  CHECK((sol.g0 - 1.0).abs().maxCoeff() < 1e-8);
  CHECK(sol.residuals.eq_f < 1e-8);
  CHECK(sol.residuals.eq_g < 1e-8);
}

TEST_CASE("band class: binding bounds give active sets, slackness and a saddle") {
  const int grid = 256;
  const Eigen::ArrayXd lambda = frequency_grid(grid);
  BandContaminationClass cls;
  cls.v = 0.9 + 0.5 * lambda.cos();  // narrow shaped band forces contact
  cls.u = cls.v + 0.15;
  cls.P1 = 1.0;
  cls.g1 = 0.8 + 0.3 * (2.0 * lambda).cos();
  cls.eps = 0.25;
  cls.P2 = 1.0;
  MinimaxOptions opts = fast_options();
  opts.grid = grid;
  opts.truncation = 24;
  const FunctionalSpec a = functional({1.0});
  const MinimaxSolution sol = least_favorable_band_eps(cls, a, opts);

  CHECK(((sol.f0 - cls.v) > -1e-10).all());
  CHECK(((cls.u - sol.f0) > -1e-10).all());
  CHECK(((sol.g0 - (1.0 - cls.eps) * cls.g1) > -1e-10).all());
  CHECK(std::abs(sol.f0.mean() - cls.P1) < 1e-10);
  CHECK(std::abs(sol.g0.mean() - cls.P2) < 1e-10);
  CHECK(sol.residuals.comp_slack < 1e-8);
  CHECK((sol.gamma1 <= 0.0).all());
  CHECK((sol.gamma2 >= 0.0).all());
  CHECK((sol.phi_mult <= 0.0).all());
  // Both band edges genuinely bind here.
  CHECK((sol.gamma1 < 0.0).count() > 0);
  CHECK((sol.gamma2 > 0.0).count() > 0);
  // The interior equations hold at the ridge accuracy of the clipped
  // fixed point, not at machine precision.
  CHECK(sol.residuals.eq_f < 1e-3);
  CHECK(sol.residuals.eq_g < 1e-3);

  GridMaxParams params;
  params.nodes = 24;
  params.restarts = 6;
  params.truncation = 24;
  params.grid = grid;
  const GridMaxResult best = grid_maximize_delta(cls, a, params, 41);
  CHECK(best.delta <= sol.delta0 + 2e-3);

  const SaddlePointReport audit = verify_saddle_point(sol, cls, a, 100, 99, 1e-8, 1e-4);
  CHECK(audit.passes);
}

TEST_CASE("band class rejects empty classes and bad parameters") {
  const int grid = 512;
  BandContaminationClass cls;
  cls.v = Eigen::ArrayXd::Constant(grid, 2.0);
  cls.u = Eigen::ArrayXd::Constant(grid, 3.0);
  cls.P1 = 1.0;  // lower bound integrates to 2 > 1
  cls.g1 = Eigen::ArrayXd::Constant(grid, 0.5);
  cls.eps = 0.1;
  cls.P2 = 1.0;
  MinimaxOptions opts = fast_options();
  opts.grid = grid;
  CHECK_THROWS_AS(least_favorable_band_eps(cls, functional({1.0}), opts), ValidationError);
  cls.v = Eigen::ArrayXd::Constant(grid, 0.1);
  cls.eps = 1.5;
  CHECK_THROWS_AS(least_favorable_band_eps(cls, functional({1.0}), opts), ValidationError);
}

TEST_CASE("saddle point audit: singleton class passes trivially") {
  const int grid = 512;
  const Eigen::ArrayXd f = Ma1Pair::make(0.5, 0.2).f().evaluate(grid);
  BandContaminationClass cls;
  cls.v = f;
  cls.u = f;
  cls.P1 = f.mean();
  cls.g1 = Eigen::ArrayXd::Constant(grid, 1.0);
  cls.eps = 0.0;
  cls.P2 = 1.0;
  MinimaxOptions opts = fast_options();
  opts.grid = grid;
  const FunctionalSpec a = functional({1.0});
  const MinimaxSolution sol = least_favorable_band_eps(cls, a, opts);
  const SaddlePointReport report = verify_saddle_point(sol, cls, a, 50, 17);
  CHECK(report.passes);
  CHECK(report.max_upper_violation <= 1e-8);
}

TEST_CASE("saddle point audit: white power solution survives two hundred trials") {
  const PowerPairClass cls{1.0, 1.0};
  const FunctionalSpec a = functional({1.0});
  const MinimaxSolution sol = least_favorable_power(cls, a, fast_options());
  const SaddlePointReport report = verify_saddle_point(sol, cls, a, 200, 2025);
  CHECK(report.passes);
  CHECK(report.max_upper_violation <= 1e-8);
  CHECK(report.max_lower_violation <= 1e-8);
}

TEST_CASE("saddle point audit: a corrupted characteristic is caught") {
  const PowerPairClass cls{1.0, 1.0};
  const FunctionalSpec a = functional({1.0});
  MinimaxSolution sol = least_favorable_power(cls, a, fast_options());
  sol.filter.w[1] += Complex(0.1, 0.0);
  const SaddlePointReport report = verify_saddle_point(sol, cls, a, 200, 2025);
  CHECK_FALSE(report.passes);
  CHECK(report.max_upper_violation > 1e-8);
}

TEST_CASE("enlarging the class never shrinks the worst-case error") {
  const FunctionalSpec a = functional({1.0});
  double previous = -1.0;
  for (const double p : {0.5, 1.0, 1.5, 2.0}) {
    const MinimaxSolution sol =
        least_favorable_power(PowerPairClass{p, p}, a, fast_options());
    CHECK(sol.delta0 >= previous - 1e-12);
    previous = sol.delta0;
  }
}

TEST_CASE("zero functionals are rejected by the minimax solvers") {
  FunctionalSpec zero;
  zero.coeffs = {Complex(0, 0)};
  CHECK_THROWS_AS(least_favorable_power(PowerPairClass{1.0, 1.0}, zero, fast_options()),
                  ValidationError);
}
