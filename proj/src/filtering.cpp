#include "wkfilter/filtering.hpp"

#include <cmath>
#include <utility>

#include "wkfilter/errors.hpp"

namespace wkf {

double FunctionalSpec::l1_norm() const {
  double acc = 0.0;
  for (const Complex& c : coeffs) acc += std::abs(c);
  return acc;
}

double FunctionalSpec::weighted_l2() const {
  double acc = 0.0;
  for (int k = 0; k < size(); ++k) acc += (k + 1) * std::norm(coeffs[static_cast<std::size_t>(k)]);
  return acc;
}

void FunctionalSpec::validate() const {
  if (coeffs.empty()) {
    throw ValidationError("functional needs at least one coefficient");
  }
  for (const Complex& c : coeffs) {
    if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) {
      throw ValidationError("functional has a non-finite coefficient");
    }
  }
  if (declared_tail < 0.0 || !std::isfinite(declared_tail)) {
    throw ValidationError("declared tail bound must be a finite nonnegative number");
  }
  if (!std::isfinite(l1_norm()) || !std::isfinite(weighted_l2())) {
    throw ValidationError("functional summability norms are not finite");
  }
  if (l1_norm() == 0.0) {
    throw ValidationError("functional is identically zero");
  }
}

Eigen::ArrayXcd FunctionalSpec::symbol(int grid_size) const {
  return synthesize_causal(grid_size, coeffs);
}

namespace {

/// Everything the direct route needs, computed once per (f, g, L, G).
struct ProblemContext {
  int truncation = 0;
  int grid = 0;
  Eigen::ArrayXd f, g, s;
  FourierSeries p, r, q;
  MinimalityReport minimality;
};

ProblemContext make_context(const Eigen::ArrayXd& f, const Eigen::ArrayXd& g,
                            int truncation, int functional_size,
                            const MinimalityReport& minimality) {
  const int grid = static_cast<int>(f.size());
  if (!minimality.passes) {
    std::string where = minimality.offending_frequency
                            ? " (f+g vanishes at lambda = " +
                                  std::to_string(*minimality.offending_frequency) + ")"
                            : " (integral unstable under grid refinement)";
    throw MinimalityError("the spectral pair violates the minimality condition" + where);
  }
  ProblemContext ctx;
  ctx.truncation = truncation;
  ctx.grid = grid;
  ctx.f = f;
  ctx.g = g;
  ctx.s = f + g;
  ctx.minimality = minimality;
  const int need_p = 2 * truncation + 2;
  const int need_r = truncation + functional_size + 2;
  if (std::max(need_p, need_r) >= grid / 2) {
    throw ValidationError("truncation exceeds the lags resolvable on this grid");
  }
  Eigen::ArrayXd inv_s(grid), ratio_r(grid), ratio_q(grid);
  for (int j = 0; j < grid; ++j) {
    inv_s[j] = 1.0 / ctx.s[j];
    ratio_r[j] = ctx.f[j] * inv_s[j];
    ratio_q[j] = ctx.f[j] * ctx.g[j] * inv_s[j];
  }
  ctx.p = fourier_coefficients(inv_s, need_p);
  ctx.r = fourier_coefficients(ratio_r, need_r);
  ctx.q = fourier_coefficients(ratio_q, functional_size + 1);
  return ctx;
}

ProblemContext make_context(const SpectralDensity& f, const SpectralDensity& g,
                            int truncation, int functional_size, int grid_size) {
  return make_context(f.evaluate(grid_size), g.evaluate(grid_size), truncation,
                      functional_size, minimality_check(f, g, grid_size, 1e-6));
}


void fill_weights_and_defects(FilterSolution& sol, const ProblemContext& ctx,
                              const Eigen::ArrayXcd& symbol) {
  const int grid = ctx.grid;
  GridTransform ht(sol.h);
  sol.w.resize(static_cast<std::size_t>(ctx.truncation) + 1);
  for (int m = 0; m <= ctx.truncation; ++m) {
    sol.w[static_cast<std::size_t>(m)] = ht.coef(-m);
  }
  double causal = 0.0;
  for (int k = 1; k < grid / 2; ++k) causal = std::max(causal, std::abs(ht.coef(k)));
  sol.diagnostics.causality_defect = causal;

  double tail = 0.0;
  for (int m = ctx.truncation + 1; m < grid / 2; ++m) tail += std::norm(ht.coef(-m));
  sol.diagnostics.weight_tail_mass = tail;

  Eigen::ArrayXcd resid(grid);
  for (int j = 0; j < grid; ++j) {
    resid[j] = symbol[j] * ctx.f[j] - sol.h[j] * ctx.s[j];
  }
  GridTransform rt(resid);
  double ortho = 0.0;
  for (int k = 0; k < grid / 2; ++k) ortho = std::max(ortho, std::abs(rt.coef(-k)));
  sol.diagnostics.orthogonality_defect = ortho;
  sol.diagnostics.grid = grid;
  sol.diagnostics.truncation = ctx.truncation;
  sol.diagnostics.minimality_integral = ctx.minimality.integral;
}

double bilinear_mse(const ProblemContext& ctx, const Eigen::VectorXcd& a,
                    const Eigen::VectorXcd& ra, const Eigen::VectorXcd& c) {
  const int na = static_cast<int>(a.size());
  Eigen::MatrixXcd q(na, na);
  // Lag k - l pairs conj(a(l)) with a(k); see assemble_q.
  for (int l = 0; l < na; ++l) {
    for (int k = 0; k < na; ++k) q(l, k) = ctx.q.at(k - l);
  }
  const double term1 = ra.dot(c).real();  // (Ra)^H c = <Ra, P^{-1} Ra>
  const double term2 = a.dot(q * a).real();
  return term1 + term2;
}

FilterSolution solve_direct(const ProblemContext& ctx, const FunctionalSpec& a) {
  a.validate();
  const int L = ctx.truncation;
  const OperatorMatrix p = assemble_p(ctx.p, L);
  const OperatorMatrix r = assemble_r(ctx.r, L, a.size());
  Eigen::VectorXcd av(a.size());
  for (int k = 0; k < a.size(); ++k) av[k] = a.coeffs[static_cast<std::size_t>(k)];

  CoefficientSolution coef = solve_coefficients(p, r, av);
  const Eigen::VectorXcd ra = r.entries * av;

  FilterSolution sol;
  sol.c = coef.c;
  sol.functional = a.coeffs;
  const Eigen::ArrayXcd symbol = a.symbol(ctx.grid);
  const Eigen::ArrayXcd corr = correction_symbol(coef.c, ctx.grid);
  sol.h.resize(ctx.grid);
  for (int j = 0; j < ctx.grid; ++j) {
    sol.h[j] = (symbol[j] * ctx.f[j] - corr[j]) / ctx.s[j];
  }
  sol.mse = bilinear_mse(ctx, av, ra, coef.c);
  sol.diagnostics.solve_residual = coef.residual;
  sol.diagnostics.condition_estimate = coef.condition_estimate;
  sol.diagnostics.used_least_squares = coef.used_least_squares;
  sol.diagnostics.warnings = coef.warnings;
  sol.diagnostics.functional_tail = a.declared_tail;
  fill_weights_and_defects(sol, ctx, symbol);
  return sol;
}

FunctionalSpec unit_functional(int coordinate) {
  FunctionalSpec a;
  a.coeffs.assign(static_cast<std::size_t>(coordinate) + 1, Complex(0.0, 0.0));
  a.coeffs.back() = Complex(1.0, 0.0);
  return a;
}

}  // namespace

FilterSolution solve_filter(const SpectralDensity& f, const SpectralDensity& g,
                            const FunctionalSpec& a, int truncation, int grid_size) {
  return solve_direct(make_context(f, g, truncation, a.size(), grid_size), a);
}

FilterSolution solve_filter_samples(const Eigen::ArrayXd& f, const Eigen::ArrayXd& g,
                                    const FunctionalSpec& a, int truncation) {
  return solve_direct(make_context(f, g, truncation, a.size(),
                                   minimality_check_samples(f, g, 1e-6)),
                      a);
}

FilterSolution solve_filter_finite(const SpectralDensity& f, const SpectralDensity& g,
                                   const FunctionalSpec& a, int truncation,
                                   int grid_size) {
  if (a.declared_tail != 0.0) {
    throw ValidationError("solve_filter_finite requires a genuinely finite functional");
  }
  a.validate();
  const int n = a.size() - 1;
  ProblemContext ctx = make_context(f, g, truncation, a.size(), grid_size);
  const OperatorMatrix p = assemble_p(ctx.p, truncation);
  const OperatorMatrix r = assemble_r(ctx.r, truncation, a.size(), n);
  const OperatorMatrix q = assemble_q(ctx.q, a.size(), n);
  Eigen::VectorXcd av(a.size());
  for (int k = 0; k < a.size(); ++k) av[k] = a.coeffs[static_cast<std::size_t>(k)];

  CoefficientSolution coef = solve_coefficients(p, r, av);
  const Eigen::VectorXcd ra = r.entries * av;

  FilterSolution sol;
  sol.c = coef.c;
  sol.functional = a.coeffs;
  const Eigen::ArrayXcd symbol = a.symbol(ctx.grid);
  const Eigen::ArrayXcd corr = correction_symbol(coef.c, ctx.grid);
  sol.h.resize(ctx.grid);
  for (int j = 0; j < ctx.grid; ++j) {
    sol.h[j] = (symbol[j] * ctx.f[j] - corr[j]) / ctx.s[j];
  }
  sol.mse = ra.dot(coef.c).real() + av.dot(q.entries * av).real();
  sol.diagnostics.solve_residual = coef.residual;
  sol.diagnostics.condition_estimate = coef.condition_estimate;
  sol.diagnostics.used_least_squares = coef.used_least_squares;
  sol.diagnostics.warnings = coef.warnings;
  fill_weights_and_defects(sol, ctx, symbol);
  return sol;
}

FilterSolution estimate_point(const SpectralDensity& f, const SpectralDensity& g,
                              int p, int truncation, int grid_size) {
  if (p > 0) {
    throw ValidationError("estimate_point handles p <= 0 only; prediction of "
                          "future values is out of scope");
  }
  return solve_filter_finite(f, g, unit_functional(-p), truncation, grid_size);
}

FilterSolution smoothing(const SpectralDensity& f, const SpectralDensity& g,
                         int truncation, int grid_size) {
  const FunctionalSpec a = unit_functional(0);
  ProblemContext ctx = make_context(f, g, truncation, 1, grid_size);
  const int L = truncation;
  const OperatorMatrix p = assemble_p(ctx.p, L);

  // Column zero of the shifted coefficient operator.
  Eigen::VectorXcd r0(L);
  for (int l = 0; l < L; ++l) r0[l] = ctx.r.at(l + 1);

  Eigen::LDLT<Eigen::MatrixXcd> ldlt(p.entries);
  if (ldlt.info() != Eigen::Success) {
    throw SingularOperatorError("smoothing: P truncation not positive definite", 0.0);
  }
  const Eigen::VectorXcd v = ldlt.solve(r0);

  FilterSolution sol;
  sol.c = v;
  sol.functional = a.coeffs;
  // w(m) = conj(r(m)) - sum_k conj(p(m+k+1)) v(k)
  std::vector<Complex> weights(static_cast<std::size_t>(L) + 1);
  for (int m = 0; m <= L; ++m) {
    Complex acc = std::conj(ctx.r.at(m));
    for (int k = 0; k < L; ++k) acc -= std::conj(ctx.p.at(m + k + 1)) * v[k];
    weights[static_cast<std::size_t>(m)] = acc;
  }
  sol.h = synthesize_causal(ctx.grid, weights);

  // Error through the f/(f+g) column and the noise spectrum series:
  // <r0, V r0> plus the Parseval pairing of f/(f+g) with g.
  double term1 = 0.0;
  for (int k = 0; k < L; ++k) term1 += (r0[k] * std::conj(v[k])).real();
  const FourierSeries gseries =
      fourier_coefficients(Eigen::ArrayXd(ctx.g), ctx.grid / 4);
  double term2 = 0.0;
  for (int l = -gseries.max_lag; l <= gseries.max_lag; ++l) {
    term2 += (ctx.r.at(l) * gseries.at(-l)).real();
  }
  sol.mse = term1 + term2;

  sol.diagnostics.solve_residual =
      (p.entries * v - r0).norm() / std::max(r0.norm(), 1e-300);
  fill_weights_and_defects(sol, ctx, a.symbol(ctx.grid));
  // Keep the weights from the series formula, not the round trip through h.
  sol.w = std::move(weights);
  return sol;
}

FilterSolution solve_filter_factorized(const SpectralDensity& f,
                                       const SpectralDensity& g,
                                       const FunctionalSpec& a, int truncation,
                                       int grid_size) {
  a.validate();
  ProblemContext ctx = make_context(f, g, truncation, a.size(), grid_size);
  const int L = truncation;
  const int grid = ctx.grid;

  Eigen::ArrayXd inv_s(grid);
  for (int j = 0; j < grid; ++j) inv_s[j] = 1.0 / ctx.s[j];
  const FactorCoeffs psi = spectral_factorize(inv_s, L, 1e-8, "1/(f+g)");
  const FactorCoeffs phi = spectral_factorize(ctx.f, L, 1e-8, "f");

  // Signal covariance series and the Hankel pairing with the causal
  // factor of 1/(f+g):  e(m) = sum_j c(m+j) conj(psi(j)), c = conj(G) a.
  const int reach = a.size() + 2 * L;
  const FourierSeries fser = fourier_coefficients(Eigen::ArrayXd(ctx.f), reach + 1);
  std::vector<Complex> cvec(static_cast<std::size_t>(reach), Complex(0.0, 0.0));
  for (int i = 0; i < reach; ++i) {
    Complex acc(0.0, 0.0);
    for (int l = 0; l < a.size(); ++l) {
      acc += std::conj(fser.at(i - l)) * a.coeffs[static_cast<std::size_t>(l)];
    }
    cvec[static_cast<std::size_t>(i)] = acc;
  }
  std::vector<Complex> e(static_cast<std::size_t>(reach), Complex(0.0, 0.0));
  for (int m = 0; m < reach; ++m) {
    Complex acc(0.0, 0.0);
    for (int j = 0; j < L && m + j < reach; ++j) {
      acc += cvec[static_cast<std::size_t>(m + j)] * std::conj(psi.h[static_cast<std::size_t>(j)]);
    }
    e[static_cast<std::size_t>(m)] = acc;
  }

  const Eigen::ArrayXcd psi_values = psi.evaluate(grid);
  const Eigen::ArrayXcd e_values = synthesize_causal(grid, e);

  FilterSolution sol;
  sol.functional = a.coeffs;
  sol.h.resize(grid);
  for (int j = 0; j < grid; ++j) sol.h[j] = psi_values[j] * e_values[j];

  double gaa = 0.0;
  // Same orientation as the Q form: lag k - l against conj(a(l)) a(k).
  for (int l = 0; l < a.size(); ++l) {
    for (int k = 0; k < a.size(); ++k) {
      gaa += (std::conj(a.coeffs[static_cast<std::size_t>(l)]) * fser.at(k - l) *
              a.coeffs[static_cast<std::size_t>(k)])
                 .real();
    }
  }
  double ee = 0.0;
  for (const Complex& em : e) ee += std::norm(em);
  sol.mse = gaa - ee;

  // Correction coefficients for completeness: C = A f - h (f+g) at
  // positive lags.
  Eigen::ArrayXcd resid(grid);
  const Eigen::ArrayXcd symbol = a.symbol(grid);
  for (int j = 0; j < grid; ++j) resid[j] = symbol[j] * ctx.f[j] - sol.h[j] * ctx.s[j];
  GridTransform rt(resid);
  sol.c.resize(L);
  for (int k = 0; k < L; ++k) sol.c[k] = rt.coef(k + 1);

  sol.diagnostics.functional_tail = a.declared_tail;
  fill_weights_and_defects(sol, ctx, symbol);
  return sol;
}

MseBreakdown mse_breakdown(const SpectralDensity& f, const SpectralDensity& g,
                           const FunctionalSpec& a, const FilterSolution& solution) {
  const int grid = solution.diagnostics.grid;
  ProblemContext ctx = make_context(f, g, solution.diagnostics.truncation, a.size(), grid);
  const OperatorMatrix r = assemble_r(ctx.r, ctx.truncation, a.size());
  Eigen::VectorXcd av(a.size());
  for (int k = 0; k < a.size(); ++k) av[k] = a.coeffs[static_cast<std::size_t>(k)];
  const Eigen::VectorXcd ra = r.entries * av;

  MseBreakdown out;
  out.bilinear = bilinear_mse(ctx, av, ra, solution.c);

  const Eigen::ArrayXcd symbol = a.symbol(grid);
  double acc = 0.0;
  for (int j = 0; j < grid; ++j) {
    acc += std::norm(symbol[j] - solution.h[j]) * ctx.f[j] +
           std::norm(solution.h[j]) * ctx.g[j];
  }
  out.integral = acc / grid;
  out.gap = std::abs(out.bilinear - out.integral);
  return out;
}

double mse(const SpectralDensity& f, const SpectralDensity& g,
           const FunctionalSpec& a, const FilterSolution& solution) {
  return mse_breakdown(f, g, a, solution).bilinear;
}

std::vector<Complex> time_weights(const FilterSolution& solution, int count) {
  const int grid = static_cast<int>(solution.h.size());
  GridTransform ht(solution.h);
  double causal = 0.0;
  for (int k = 1; k < grid / 2; ++k) causal = std::max(causal, std::abs(ht.coef(k)));
  if (causal > 1e-6) {
    throw ValidationError(
        "characteristic has significant positive-lag content (" +
        std::to_string(causal) + "); it does not define causal weights");
  }
  const int n = count >= 0 ? count : solution.diagnostics.truncation + 1;
  std::vector<Complex> w(static_cast<std::size_t>(n));
  for (int m = 0; m < n; ++m) w[static_cast<std::size_t>(m)] = ht.coef(-m);
  return w;
}

Eigen::ArrayXcd correction_symbol(const Eigen::VectorXcd& c, int grid_size) {
  std::vector<Complex> coeffs(static_cast<std::size_t>(c.size()) + 1, Complex(0.0, 0.0));
  for (int k = 0; k < c.size(); ++k) coeffs[static_cast<std::size_t>(k + 1)] = c[k];
  return synthesize(grid_size, coeffs, 0);
}

double error_of_weights(const Eigen::ArrayXd& f, const Eigen::ArrayXd& g,
                        const FunctionalSpec& a, const std::vector<Complex>& w) {
  const int grid = static_cast<int>(f.size());
  const Eigen::ArrayXcd h = synthesize_causal(grid, w);
  const Eigen::ArrayXcd symbol = a.symbol(grid);
  double acc = 0.0;
  for (int j = 0; j < grid; ++j) {
    acc += std::norm(symbol[j] - h[j]) * f[j] + std::norm(h[j]) * g[j];
  }
  return acc / grid;
}

}  // namespace wkf
