#include "wkfilter/minimax.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "wkfilter/errors.hpp"
#include "wkfilter/rng.hpp"

namespace wkf {

namespace {

double grid_mean(const Eigen::ArrayXd& x) { return x.mean(); }

Eigen::ArrayXd clip(const Eigen::ArrayXd& x, const Eigen::ArrayXd& lo,
                    const Eigen::ArrayXd& hi) {
  return x.max(lo).min(hi);
}

/// Scale t such that mean(clip(t x, lo, hi)) == target, by bisection.
/// Saturates at the bound when the target is unreachable.
Eigen::ArrayXd project_band(const Eigen::ArrayXd& x, const Eigen::ArrayXd& lo,
                            const Eigen::ArrayXd& hi, double target) {
  if (grid_mean(lo) > target + 1e-12) {
    throw ValidationError("band class is empty: the lower bound integrates above P1");
  }
  if (grid_mean(hi) <= target) return hi;
  double t_lo = 0.0, t_hi = 1.0;
  const double scale = std::max(x.maxCoeff(), 1e-300);
  while (grid_mean(clip(t_hi * x, lo, hi)) < target && t_hi < 1e18 * scale) t_hi *= 2.0;
  for (int it = 0; it < 200; ++it) {
    const double t = 0.5 * (t_lo + t_hi);
    if (grid_mean(clip(t * x, lo, hi)) < target) t_lo = t; else t_hi = t;
  }
  return clip(0.5 * (t_lo + t_hi) * x, lo, hi);
}

/// Scale t such that mean(max(floor, t x)) == target.
Eigen::ArrayXd project_floor(const Eigen::ArrayXd& x, const Eigen::ArrayXd& floor,
                             double target) {
  if (grid_mean(floor) > target + 1e-12) {
    throw ValidationError("contamination class is empty: the floor integrates above P2");
  }
  double t_lo = 0.0, t_hi = 1.0;
  while (grid_mean(floor.max(t_hi * x)) < target && t_hi < 1e300) t_hi *= 2.0;
  if (t_hi >= 1e300) return floor;  // x has no mass to place
  for (int it = 0; it < 200; ++it) {
    const double t = 0.5 * (t_lo + t_hi);
    if (grid_mean(floor.max(t * x)) < target) t_lo = t; else t_hi = t;
  }
  return floor.max(0.5 * (t_lo + t_hi) * x);
}

struct EquationState {
  FilterSolution filter;
  Eigen::ArrayXd u1, u2;  // |A g + C|, |A f - C| on the grid
};

EquationState evaluate_equations(const Eigen::ArrayXd& f, const Eigen::ArrayXd& g,
                                 const FunctionalSpec& a, int truncation) {
  EquationState st;
  st.filter = solve_filter_samples(f, g, a, truncation);
  const int grid = static_cast<int>(f.size());
  const Eigen::ArrayXcd symbol = a.symbol(grid);
  const Eigen::ArrayXcd corr = correction_symbol(st.filter.c, grid);
  st.u1.resize(grid);
  st.u2.resize(grid);
  for (int j = 0; j < grid; ++j) {
    st.u1[j] = std::abs(symbol[j] * g[j] + corr[j]);
    st.u2[j] = std::abs(symbol[j] * f[j] - corr[j]);
  }
  return st;
}

double sup_abs(const Eigen::ArrayXd& x) { return x.abs().maxCoeff(); }

/// Iteration step wrapper: classes whose least favorable pair sits on the
/// minimality boundary (for instance when the functional symbol vanishes
/// on the circle) drive the iterates out of the checkable region; report
/// that as a failure of the fixed point, not as a bare minimality error.
EquationState evaluate_step(const Eigen::ArrayXd& f, const Eigen::ArrayXd& g,
                            const FunctionalSpec& a, int truncation, int iteration) {
  try {
    return evaluate_equations(f, g, a, truncation);
  } catch (const MinimalityError& e) {
    throw NonConvergenceError(
        "fixed point left the minimality region at iteration " +
            std::to_string(iteration) + ": " + e.what(),
        std::numeric_limits<double>::quiet_NaN());
  }
}

FilterSolution solve_at(const Eigen::ArrayXd& f, const Eigen::ArrayXd& g,
                        const FunctionalSpec& a, int truncation) {
  return solve_filter_samples(f, g, a, truncation);
}

double delta_identity_defect(const Eigen::ArrayXd& f, const Eigen::ArrayXd& g,
                             const FunctionalSpec& a, const FilterSolution& sol) {
  return std::abs(error_of_weights(f, g, a, sol.w) - sol.mse);
}

Eigen::ArrayXd random_even_density(int grid, SplitMix64& rng) {
  const Eigen::ArrayXd lambda = frequency_grid(grid);
  Eigen::ArrayXd log_d = Eigen::ArrayXd::Zero(grid);
  for (int k = 1; k <= 4; ++k) {
    const double amp = 0.5 / k * rng.next_normal();
    log_d += amp * (lambda * k).cos();
  }
  return log_d.exp();
}

}  // namespace

std::pair<Eigen::ArrayXd, Eigen::ArrayXd> h_components(const Eigen::ArrayXd& f,
                                                       const Eigen::ArrayXd& g,
                                                       const FilterSolution& solution) {
  const int grid = static_cast<int>(f.size());
  if (static_cast<int>(solution.h.size()) != grid) {
    throw ValidationError("h_components: density grid does not match the solution");
  }
  FunctionalSpec a;
  a.coeffs = solution.functional;
  const Eigen::ArrayXcd symbol = a.symbol(grid);
  const Eigen::ArrayXcd corr = correction_symbol(solution.c, grid);
  Eigen::ArrayXd hf(grid), hg(grid);
  for (int j = 0; j < grid; ++j) {
    const double s = f[j] + g[j];
    hf[j] = std::abs(symbol[j] * g[j] + corr[j]) / s;
    hg[j] = std::abs(symbol[j] * f[j] - corr[j]) / s;
    if (!std::isfinite(hf[j]) || !std::isfinite(hg[j])) {
      throw MinimalityError("h components unbounded at lambda = " +
                            std::to_string(frequency_grid(grid)[j]));
    }
  }
  return {hf, hg};
}

std::pair<Eigen::ArrayXd, Eigen::ArrayXd> h_components(const SpectralDensity& f,
                                                       const SpectralDensity& g,
                                                       const FilterSolution& solution) {
  const int grid = solution.diagnostics.grid;
  return h_components(f.evaluate(grid), g.evaluate(grid), solution);
}

MinimaxResiduals power_equation_residuals(const Eigen::ArrayXd& f,
                                          const Eigen::ArrayXd& g,
                                          const FunctionalSpec& a, int truncation,
                                          double P1, double P2) {
  const EquationState st = evaluate_equations(f, g, a, truncation);
  const Eigen::ArrayXd s = f + g;
  const double alpha1 = grid_mean(st.u1) / grid_mean(s);
  const double alpha2 = grid_mean(st.u2) / grid_mean(s);
  MinimaxResiduals res;
  const double scale1 = std::max(sup_abs(st.u1), 1e-12);
  const double scale2 = std::max(sup_abs(st.u2), 1e-12);
  res.eq_f = sup_abs(st.u1 - alpha1 * s) / scale1;
  res.eq_g = sup_abs(st.u2 - alpha2 * s) / scale2;
  res.power_f = std::abs(grid_mean(f) - P1);
  res.power_g = std::abs(grid_mean(g) - P2);
  res.delta_identity = delta_identity_defect(f, g, a, st.filter);
  return res;
}

MinimaxSolution least_favorable_power(const PowerPairClass& cls, const FunctionalSpec& a,
                                      const MinimaxOptions& opts) {
  a.validate();
  if (cls.P1 < 0.0 || cls.P2 < 0.0 || (cls.P1 == 0.0 && cls.P2 == 0.0)) {
    throw ValidationError("power class needs P1, P2 >= 0 and not both zero");
  }
  const int grid = opts.grid;

  // Degenerate one-sided classes: the other density is pinned at zero.
  if (cls.P1 == 0.0 || cls.P2 == 0.0) {
    Eigen::ArrayXd f = Eigen::ArrayXd::Constant(grid, cls.P1);
    Eigen::ArrayXd g = Eigen::ArrayXd::Constant(grid, cls.P2);
    MinimaxSolution sol;
    sol.f0 = f;
    sol.g0 = g;
    sol.filter = solve_at(f, g, a, opts.truncation);
    sol.delta0 = sol.filter.mse;
    sol.residuals.power_f = std::abs(grid_mean(f) - cls.P1);
    sol.residuals.power_g = std::abs(grid_mean(g) - cls.P2);
    sol.residuals.delta_identity = delta_identity_defect(f, g, a, sol.filter);
    return sol;
  }

  Eigen::ArrayXd f = Eigen::ArrayXd::Constant(grid, cls.P1);
  Eigen::ArrayXd g = Eigen::ArrayXd::Constant(grid, cls.P2);
  const double floor = 1e-12 * (cls.P1 + cls.P2);

  MinimaxResiduals res;
  int iter = 0;
  for (; iter < opts.max_iterations; ++iter) {
    const EquationState st = evaluate_step(f, g, a, opts.truncation, iter);
    const Eigen::ArrayXd s = f + g;
    const Eigen::ArrayXd hf = st.u1 / s, hg = st.u2 / s;

    const double alpha1 = grid_mean(st.u1) / grid_mean(s);
    const double alpha2 = grid_mean(st.u2) / grid_mean(s);
    res.eq_f = sup_abs(st.u1 - alpha1 * s) / std::max(sup_abs(st.u1), 1e-12);
    res.eq_g = sup_abs(st.u2 - alpha2 * s) / std::max(sup_abs(st.u2), 1e-12);
    if (res.eq_f <= opts.tol && res.eq_g <= opts.tol) break;

    // Multiplicative equalization toward constant hf, hg; the power
    // projection absorbs the normalization of the update ratio.
    const double level_f = std::max(grid_mean(hf), 1e-300);
    const double level_g = std::max(grid_mean(hg), 1e-300);
    Eigen::ArrayXd f_next =
        f * ((hf / level_f).max(1e-6)).pow(opts.damping);
    Eigen::ArrayXd g_next =
        g * ((hg / level_g).max(1e-6)).pow(opts.damping);
    f_next = f_next.max(floor);
    g_next = g_next.max(floor);
    f = f_next * (cls.P1 / grid_mean(f_next));
    g = g_next * (cls.P2 / grid_mean(g_next));
  }
  if (iter >= opts.max_iterations) {
    throw NonConvergenceError("power-class fixed point did not reach tolerance",
                              std::max(res.eq_f, res.eq_g));
  }

  MinimaxSolution sol;
  sol.f0 = f;
  sol.g0 = g;
  const EquationState st = evaluate_equations(f, g, a, opts.truncation);
  sol.filter = st.filter;
  sol.delta0 = sol.filter.mse;
  const Eigen::ArrayXd s = f + g;
  sol.alpha1 = grid_mean(st.u1) / grid_mean(s);
  sol.alpha2 = grid_mean(st.u2) / grid_mean(s);
  sol.residuals = res;
  sol.residuals.power_f = std::abs(grid_mean(f) - cls.P1);
  sol.residuals.power_g = std::abs(grid_mean(g) - cls.P2);
  sol.residuals.delta_identity = delta_identity_defect(f, g, a, sol.filter);
  sol.iterations = iter;
  return sol;
}

MinimaxSolution least_favorable_given_f(const SpectralDensity& f_known, double P2,
                                        const FunctionalSpec& a,
                                        const MinimaxOptions& opts) {
  a.validate();
  if (P2 <= 0.0) {
    throw ValidationError("least_favorable_given_f needs P2 > 0");
  }
  const int grid = opts.grid;
  const Eigen::ArrayXd f = f_known.evaluate(grid);
  Eigen::ArrayXd g = Eigen::ArrayXd::Constant(grid, P2);

  double alpha2 = 0.0;
  MinimaxResiduals res;
  int iter = 0;
  bool converged = false;
  for (; iter < opts.max_iterations; ++iter) {
    const EquationState st = evaluate_step(f, g, a, opts.truncation, iter);
    // Calibrate alpha2 so the clipped form meets the power budget:
    // g_cand = max{0, U2/alpha2 - f}, mean decreasing in alpha2.
    const Eigen::ArrayXd& u2 = st.u2;
    double lo = 1e-12, hi = 1.0;
    auto mean_at = [&](double al) {
      return grid_mean((u2 / al - f).max(0.0));
    };
    while (mean_at(hi) > P2) hi *= 2.0;
    while (mean_at(lo) < P2 && lo > 1e-280) lo *= 0.5;
    for (int it = 0; it < 200; ++it) {
      const double mid = 0.5 * (lo + hi);
      if (mean_at(mid) > P2) lo = mid; else hi = mid;
    }
    alpha2 = 0.5 * (lo + hi);
    const Eigen::ArrayXd g_cand = (u2 / alpha2 - f).max(0.0);
    // Self-consistency residual of the current iterate against the
    // clipped form built from its own filter.
    res.eq_g = sup_abs(g - g_cand) / std::max(sup_abs(g), 1e-12);
    res.power_g = std::abs(grid_mean(g) - P2);
    if (res.eq_g <= opts.tol) {
      converged = true;
      break;
    }
    g += opts.damping * (g_cand - g);
  }
  if (!converged) {
    throw NonConvergenceError("noise-class fixed point did not reach tolerance", res.eq_g);
  }

  MinimaxSolution sol;
  sol.f0 = f;
  sol.g0 = g;
  sol.alpha2 = alpha2;
  sol.filter = solve_at(f, g, a, opts.truncation);
  sol.delta0 = sol.filter.mse;
  sol.residuals = res;
  sol.residuals.delta_identity = delta_identity_defect(f, g, a, sol.filter);
  sol.iterations = iter;
  return sol;
}

MinimaxSolution least_favorable_joint(const JointMinimalClass& cls, const FunctionalSpec& a,
                                      const MinimaxOptions& opts) {
  a.validate();
  if (!(cls.P0 > 0.0)) {
    throw ValidationError("joint class needs P0 > 0; positive densities cannot reach "
                          "a nonpositive reciprocal power");
  }
  const int grid = opts.grid;
  Eigen::ArrayXd f = Eigen::ArrayXd::Constant(grid, 0.5 / cls.P0);
  Eigen::ArrayXd g = f;

  MinimaxResiduals res;
  double beta1 = 0.0, beta2 = 0.0;
  int iter = 0;
  for (; iter < opts.max_iterations; ++iter) {
    const EquationState st = evaluate_step(f, g, a, opts.truncation, iter);
    beta1 = grid_mean(st.u1);
    beta2 = grid_mean(st.u2);
    res.eq_f = sup_abs(st.u1 - beta1) / std::max(beta1, 1e-12);
    res.eq_g = sup_abs(st.u2 - beta2) / std::max(beta2, 1e-12);
    res.power_f = std::abs(grid_mean((f + g).inverse()) - cls.P0);
    if (res.eq_f <= opts.tol && res.eq_g <= opts.tol) break;

    // Push each modulus toward its mean level, then rescale the pair so
    // the reciprocal-power constraint stays active.
    Eigen::ArrayXd g_next = g * ((beta1 / st.u1.max(1e-300)).min(1e6)).pow(opts.damping);
    Eigen::ArrayXd f_next = f * ((beta2 / st.u2.max(1e-300)).min(1e6)).pow(opts.damping);
    const double t = grid_mean((f_next + g_next).inverse()) / cls.P0;
    f = t * f_next;
    g = t * g_next;
  }
  if (iter >= opts.max_iterations) {
    throw NonConvergenceError("joint-class fixed point did not reach tolerance",
                              std::max(res.eq_f, res.eq_g));
  }

  MinimaxSolution sol;
  sol.f0 = f;
  sol.g0 = g;
  sol.beta1 = beta1;
  sol.beta2 = beta2;
  sol.filter = solve_at(f, g, a, opts.truncation);
  sol.delta0 = sol.filter.mse;
  sol.residuals = res;
  sol.residuals.power_f = std::abs(grid_mean((f + g).inverse()) - cls.P0);
  sol.residuals.delta_identity = delta_identity_defect(f, g, a, sol.filter);
  sol.iterations = iter;
  return sol;
}

namespace {

void validate_band(const BandContaminationClass& cls, int grid) {
  if (cls.v.size() != grid || cls.u.size() != grid || cls.g1.size() != grid) {
    throw ValidationError("band class arrays must live on the solver grid");
  }
  if (cls.eps < 0.0 || cls.eps > 1.0) {
    throw ValidationError("contamination weight must lie in [0, 1]");
  }
  if ((cls.v < 0.0).any() || (cls.g1 < 0.0).any()) {
    throw ValidationError("band class bounds must be nonnegative");
  }
  if ((cls.u < cls.v).any()) {
    throw ValidationError("band class requires v <= u pointwise");
  }
  if (cls.v.mean() > cls.P1 + 1e-12) {
    throw ValidationError("band class is empty: the lower bound integrates above P1");
  }
  if ((1.0 - cls.eps) * cls.g1.mean() > cls.P2 + 1e-12) {
    throw ValidationError("contamination class is empty: the floor integrates above P2");
  }
}

}  // namespace

MinimaxSolution least_favorable_band_eps(const BandContaminationClass& cls,
                                         const FunctionalSpec& a,
                                         const MinimaxOptions& opts) {
  a.validate();
  const int grid = opts.grid;
  validate_band(cls, grid);

  const bool f_fixed = (cls.u - cls.v).maxCoeff() == 0.0;
  const bool g_fixed = cls.eps == 0.0;
  const Eigen::ArrayXd g_floor = (1.0 - cls.eps) * cls.g1;

  Eigen::ArrayXd f = f_fixed ? Eigen::ArrayXd(cls.v)
                             : project_band(Eigen::ArrayXd::Constant(grid, 1.0), cls.v,
                                            cls.u, cls.P1);
  Eigen::ArrayXd g = g_fixed ? Eigen::ArrayXd(cls.g1)
                             : project_floor(Eigen::ArrayXd::Constant(grid, 1.0), g_floor,
                                             cls.P2);

  double alpha1 = 0.0, alpha2 = 0.0;
  MinimaxResiduals res;
  int iter = 0;
  const int max_iter = (f_fixed && g_fixed) ? 1 : opts.max_iterations;
  // The clipped updates are exactly stationary for interior solutions but
  // only reach bang-bang boundaries at a vanishing rate, so a stalled
  // objective with exact feasibility also counts as converged; the
  // achieved equation residuals stay on the report either way.
  constexpr int kStallWindow = 30;
  std::vector<double> history;
  bool done = false;
  for (; iter < max_iter; ++iter) {
    const EquationState st = evaluate_step(f, g, a, opts.truncation, iter);

    Eigen::ArrayXd f_cand = f;
    if (!f_fixed) {
      // Interior form f = alpha1 U1 - g clipped into the band, alpha1
      // calibrated against the power budget by the band projection.
      double lo = 1e-12, hi = 1.0;
      auto mean_at = [&](double al) {
        return grid_mean(clip(al * st.u1 - g, cls.v, cls.u));
      };
      if (grid_mean(cls.u) <= cls.P1) {
        f_cand = cls.u;
        alpha1 = 0.0;  // power constraint slack
      } else {
        while (mean_at(hi) < cls.P1) hi *= 2.0;
        for (int it = 0; it < 200; ++it) {
          const double mid = 0.5 * (lo + hi);
          if (mean_at(mid) < cls.P1) lo = mid; else hi = mid;
        }
        alpha1 = 0.5 * (lo + hi);
        f_cand = clip(alpha1 * st.u1 - g, cls.v, cls.u);
      }
    }

    Eigen::ArrayXd g_cand = g;
    if (!g_fixed) {
      // Clipped form g = max{(1-eps) g1, alpha2 U2 - f}.
      double lo = 1e-12, hi = 1.0;
      auto mean_at = [&](double al) {
        return grid_mean(g_floor.max(al * st.u2 - f));
      };
      while (mean_at(hi) < cls.P2) hi *= 2.0;
      for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mean_at(mid) < cls.P2) lo = mid; else hi = mid;
      }
      alpha2 = 0.5 * (lo + hi);
      g_cand = g_floor.max(alpha2 * st.u2 - f);
    }

    const double step = std::max(sup_abs(f_cand - f), sup_abs(g_cand - g));
    history.push_back(st.filter.mse);
    const bool stationary =
        step <= opts.tol * std::max(1.0, std::max(sup_abs(f), sup_abs(g)));
    const bool stalled =
        static_cast<int>(history.size()) > kStallWindow &&
        std::abs(history.back() - history[history.size() - 1 - kStallWindow]) <=
            std::max(opts.tol, 1e-12) * std::max(1.0, std::abs(history.back()));
    if (stationary || stalled || (f_fixed && g_fixed)) {
      done = true;
      break;
    }
    f += opts.damping * (f_cand - f);
    g += opts.damping * (g_cand - g);
  }
  if (!done && !(f_fixed && g_fixed)) {
    throw NonConvergenceError("band-class fixed point did not reach tolerance",
                              history.empty() ? 0.0 : history.back());
  }

  MinimaxSolution sol;
  sol.f0 = f;
  sol.g0 = g;
  sol.alpha1 = alpha1;
  sol.alpha2 = alpha2;
  sol.filter = solve_at(f, g, a, opts.truncation);
  sol.delta0 = sol.filter.mse;

  // Multiplier recovery from the active sets.
  const auto [hf, hg] = h_components(f, g, sol.filter);
  const double act = 1e-9 * std::max(1.0, std::max(sup_abs(f), sup_abs(g)));
  const Eigen::ArrayXd interior_mask =
      ((f - cls.v > act) && (cls.u - f > act)).cast<double>();
  double level_f;
  if (interior_mask.sum() > 0.5) {
    level_f = (hf * interior_mask).sum() / interior_mask.sum();
  } else {
    level_f = grid_mean(hf);
  }
  const Eigen::ArrayXd g_interior = (g - g_floor > act).cast<double>();
  double level_g;
  if (g_interior.sum() > 0.5) {
    level_g = (hg * g_interior).sum() / g_interior.sum();
  } else {
    level_g = grid_mean(hg);
  }

  sol.gamma1 = Eigen::ArrayXd::Zero(grid);
  sol.gamma2 = Eigen::ArrayXd::Zero(grid);
  sol.phi_mult = Eigen::ArrayXd::Zero(grid);
  double eq_f = 0.0, eq_g = 0.0, slack = 0.0;
  for (int j = 0; j < grid; ++j) {
    const double df = hf[j] - level_f;
    const bool at_lower = f[j] - cls.v[j] <= act;
    const bool at_upper = cls.u[j] - f[j] <= act;
    if (at_lower && df < 0.0) {
      sol.gamma1[j] = df;
    } else if (at_upper && df > 0.0) {
      sol.gamma2[j] = df;
    } else if (!f_fixed && !(at_lower || at_upper)) {
      eq_f = std::max(eq_f, std::abs(df));
    }
    const double dg = hg[j] - level_g;
    const bool at_floor = g[j] - g_floor[j] <= act;
    if (at_floor && dg < 0.0) {
      sol.phi_mult[j] = dg;
    } else if (!g_fixed && !at_floor) {
      eq_g = std::max(eq_g, std::abs(dg));
    }
    slack = std::max({slack, std::abs(sol.gamma1[j] * (f[j] - cls.v[j])),
                      std::abs(sol.gamma2[j] * (cls.u[j] - f[j])),
                      std::abs(sol.phi_mult[j] * (g[j] - g_floor[j]))});
  }
  sol.residuals.eq_f = f_fixed ? 0.0 : eq_f / std::max(level_f, 1e-12);
  sol.residuals.eq_g = g_fixed ? 0.0 : eq_g / std::max(level_g, 1e-12);
  sol.residuals.comp_slack = slack;
  // The f power constraint is an inequality; it binds unless f saturates
  // at the upper bound.
  sol.residuals.power_f = f_fixed ? 0.0
                          : alpha1 == 0.0 ? std::max(0.0, grid_mean(f) - cls.P1)
                                          : std::abs(grid_mean(f) - cls.P1);
  sol.residuals.power_g = g_fixed ? 0.0 : std::abs(grid_mean(g) - cls.P2);
  sol.residuals.delta_identity = delta_identity_defect(f, g, a, sol.filter);
  sol.iterations = iter;
  return sol;
}

std::pair<Eigen::ArrayXd, Eigen::ArrayXd> sample_admissible(const DensityClass& cls,
                                                            int grid_size,
                                                            std::uint64_t seed) {
  SplitMix64 rng(seed);
  if (const auto* power = std::get_if<PowerPairClass>(&cls)) {
    Eigen::ArrayXd f = random_even_density(grid_size, rng);
    Eigen::ArrayXd g = random_even_density(grid_size, rng);
    if (power->P1 > 0.0) f *= power->P1 / f.mean(); else f.setZero();
    if (power->P2 > 0.0) g *= power->P2 / g.mean(); else g.setZero();
    return {f, g};
  }
  if (const auto* joint = std::get_if<JointMinimalClass>(&cls)) {
    Eigen::ArrayXd f = random_even_density(grid_size, rng);
    Eigen::ArrayXd g = random_even_density(grid_size, rng);
    const double t = (f + g).inverse().mean() / joint->P0;
    return {t * f, t * g};
  }
  const auto& band = std::get<BandContaminationClass>(cls);
  Eigen::ArrayXd f = project_band(random_even_density(grid_size, rng), band.v, band.u,
                                  band.P1);
  Eigen::ArrayXd g = project_floor(random_even_density(grid_size, rng),
                                   (1.0 - band.eps) * band.g1, band.P2);
  return {f, g};
}

SaddlePointReport verify_saddle_point(const MinimaxSolution& solution,
                                      const DensityClass& cls, const FunctionalSpec& a,
                                      int n_trials, std::uint64_t seed, double tol,
                                      double slack) {
  const int grid = static_cast<int>(solution.f0.size());
  SaddlePointReport report;
  report.trials = n_trials;
  report.reference_delta = error_of_weights(solution.f0, solution.g0, a, solution.filter.w);

  double scale = 0.0;
  for (const Complex& wk : solution.filter.w) scale = std::max(scale, std::abs(wk));
  scale = std::max(scale, 1e-6);

  for (int trial = 0; trial < n_trials; ++trial) {
    // Upper branch: the robust characteristic against another admissible pair.
    const auto [f, g] = sample_admissible(cls, grid, SplitMix64::derive(seed, 2 * trial));
    const double upper = error_of_weights(f, g, a, solution.filter.w);
    report.max_upper_violation =
        std::max(report.max_upper_violation, upper - report.reference_delta);

    // Lower branch: perturbed causal estimates against the returned pair.
    SplitMix64 rng(SplitMix64::derive(seed, 2 * trial + 1));
    std::vector<Complex> w = solution.filter.w;
    for (std::size_t k = 0; k < w.size(); ++k) {
      w[k] += Complex(0.05 * scale * rng.next_normal(), 0.0);
    }
    const double lower = error_of_weights(solution.f0, solution.g0, a, w);
    report.max_lower_violation =
        std::max(report.max_lower_violation, report.reference_delta - lower);
  }
  report.passes = report.max_upper_violation <= tol + slack &&
                  report.max_lower_violation <= tol + slack;
  return report;
}

}  // namespace wkf
