#include "wkfilter/oracle.hpp"

#include <algorithm>
#include <cmath>

#include "wkfilter/errors.hpp"
#include "wkfilter/rng.hpp"

namespace wkf {

SamplePath simulate_ma(const std::vector<double>& b, int n, std::uint64_t seed) {
  if (n <= 0) throw ValidationError("simulate_ma: path length must be positive");
  if (b.empty()) throw ValidationError("simulate_ma: empty coefficient list");
  const int q = static_cast<int>(b.size()) - 1;
  // x(t) for t = 0, -1, ..., -(n-1) needs innovations e(t-k) down to
  // t = -(n-1) - q.  Generate oldest-first so the stream is a fixed
  // function of (seed, time index).
  SplitMix64 rng(seed);
  std::vector<double> e(static_cast<std::size_t>(n + q));
  for (auto& v : e) v = rng.next_normal();  // e[i] = innovation at time -(n+q-1) + i

  SamplePath path;
  path.seed = seed;
  path.ma_coeffs = b;
  path.values.resize(static_cast<std::size_t>(n));
  for (int t = 0; t < n; ++t) {
    // path.values[t] = x(-t); innovation at time -t-k sits at index n+q-1-t-k.
    double acc = 0.0;
    for (int k = 0; k <= q; ++k) acc += b[static_cast<std::size_t>(k)] * e[static_cast<std::size_t>(n + q - 1 - t - k)];
    path.values[static_cast<std::size_t>(t)] = acc;
  }
  return path;
}

EmpiricalMse empirical_mse(const std::vector<Complex>& w,
                           const std::vector<double>& b_signal,
                           const std::vector<double>& b_noise,
                           const FunctionalSpec& a, int n, int paths,
                           std::uint64_t seed) {
  a.validate();
  if (paths < 2) throw ValidationError("empirical_mse: needs at least two paths");
  for (const Complex& wk : w) {
    if (!std::isfinite(wk.real()) || !std::isfinite(wk.imag())) {
      throw ValidationError("empirical_mse: non-finite weight");
    }
  }

  // Truncate the weights where the remaining l1 mass is negligible.
  double total = 0.0;
  for (const Complex& wk : w) total += std::abs(wk);
  std::size_t keep = w.size();
  double tail = 0.0;
  while (keep > 1 && tail + std::abs(w[keep - 1]) < 1e-6) {
    tail += std::abs(w[keep - 1]);
    --keep;
  }
  const std::vector<Complex> wt(w.begin(), w.begin() + static_cast<std::ptrdiff_t>(keep));

  const int need = std::max(static_cast<int>(wt.size()), a.size());
  const int length = std::max(n, need);

  double sum = 0.0, sum_sq = 0.0;
  for (int pth = 0; pth < paths; ++pth) {
    const SamplePath xi =
        simulate_ma(b_signal, length, SplitMix64::derive(seed, 2 * static_cast<std::uint64_t>(pth)));
    const SamplePath eta =
        simulate_ma(b_noise, length, SplitMix64::derive(seed, 2 * static_cast<std::uint64_t>(pth) + 1));
    Complex target(0.0, 0.0);
    for (int k = 0; k < a.size(); ++k) {
      target += a.coeffs[static_cast<std::size_t>(k)] * xi.values[static_cast<std::size_t>(k)];
    }
    Complex estimate(0.0, 0.0);
    for (std::size_t k = 0; k < wt.size(); ++k) {
      estimate += wt[k] * (xi.values[k] + eta.values[k]);
    }
    const double d = std::norm(target - estimate);
    sum += d;
    sum_sq += d * d;
  }
  EmpiricalMse out;
  out.paths = paths;
  out.mean = sum / paths;
  const double var = std::max(0.0, sum_sq / paths - out.mean * out.mean);
  out.stderr_ = std::sqrt(var / (paths - 1));
  out.weight_tail_l1 = tail;

  // First-order effect of dropping the tail: |2 e tail sigma| + tail^2 sigma^2
  // with sigma^2 the observation variance and e the residual scale.
  double sig_var = 0.0, noise_var = 0.0;
  for (double bk : b_signal) sig_var += bk * bk;
  for (double bk : b_noise) noise_var += bk * bk;
  const double obs_sd = std::sqrt(sig_var + noise_var);
  out.bias_bound = 2.0 * tail * obs_sd * std::sqrt(out.mean) + tail * tail * obs_sd * obs_sd;
  return out;
}

ToeplitzProjection toeplitz_projection(const SpectralDensity& f,
                                       const SpectralDensity& g,
                                       const FunctionalSpec& a, int window,
                                       int grid_size) {
  a.validate();
  if (window + 1 < a.size()) {
    throw ValidationError("toeplitz_projection: window must cover the functional");
  }
  const MinimalityReport report = minimality_check(f, g, grid_size, 1e-6);
  if (!report.passes) {
    throw MinimalityError("toeplitz_projection requires the minimality condition");
  }
  const int m = window + 1;
  const int lag_need = window + a.size() + 1;
  if (lag_need >= grid_size / 2) {
    throw ValidationError("toeplitz_projection: window exceeds grid resolution");
  }
  // Covariances are the Fourier coefficients under the e^{+i lambda k}
  // convention: R(k) = conj(coef(k)).
  const FourierSeries cf = fourier_coefficients(f.evaluate(grid_size), lag_need);
  const FourierSeries cg = fourier_coefficients(g.evaluate(grid_size), lag_need);
  const auto rxi = [&](int k) { return std::conj(cf.at(k)); };
  const auto robs = [&](int k) { return std::conj(cf.at(k)) + std::conj(cg.at(k)); };

  Eigen::MatrixXcd t(m, m);
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < m; ++j) t(i, j) = robs(i - j);
  }
  Eigen::VectorXcd rhs(m);
  for (int k = 0; k < m; ++k) {
    Complex acc(0.0, 0.0);
    for (int j = 0; j < a.size(); ++j) {
      acc += a.coeffs[static_cast<std::size_t>(j)] * rxi(k - j);
    }
    rhs[k] = acc;
  }
  Eigen::LDLT<Eigen::MatrixXcd> ldlt(t);
  if (ldlt.info() != Eigen::Success || !(ldlt.rcond() > 1e-14)) {
    throw SingularOperatorError("toeplitz_projection: singular covariance matrix",
                                ldlt.rcond() > 0 ? 1.0 / ldlt.rcond() : 0.0);
  }
  const Eigen::VectorXcd w = ldlt.solve(rhs);

  Complex var(0.0, 0.0);
  for (int i = 0; i < a.size(); ++i) {
    for (int j = 0; j < a.size(); ++j) {
      var += std::conj(a.coeffs[static_cast<std::size_t>(i)]) * rxi(i - j) *
             a.coeffs[static_cast<std::size_t>(j)];
    }
  }
  ToeplitzProjection out;
  out.w.assign(w.data(), w.data() + m);
  out.mse = var.real() - rhs.dot(w).real();
  return out;
}

namespace {

/// Even piecewise-linear interpolation of node values at frequencies
/// i * pi / (nodes - 1) onto the solver grid.
Eigen::ArrayXd interpolate_even(const Eigen::ArrayXd& nodes, int grid) {
  const int n = static_cast<int>(nodes.size());
  const Eigen::ArrayXd lambda = frequency_grid(grid);
  Eigen::ArrayXd out(grid);
  for (int j = 0; j < grid; ++j) {
    const double x = std::abs(lambda[j]) * (n - 1) / M_PI;
    const int i0 = std::min(n - 2, static_cast<int>(std::floor(x)));
    const double t = std::min(1.0, x - i0);
    out[j] = (1.0 - t) * nodes[i0] + t * nodes[i0 + 1];
  }
  return out;
}

struct ClassProjector {
  const DensityClass& cls;
  int grid;

  /// Interpolate node values and project the pair onto the class.
  std::pair<Eigen::ArrayXd, Eigen::ArrayXd> operator()(const Eigen::ArrayXd& fn,
                                                       const Eigen::ArrayXd& gn) const {
    Eigen::ArrayXd f = interpolate_even(fn, grid);
    Eigen::ArrayXd g = interpolate_even(gn, grid);
    if (const auto* power = std::get_if<PowerPairClass>(&cls)) {
      if (power->P1 > 0.0) f *= power->P1 / f.mean(); else f.setZero();
      if (power->P2 > 0.0) g *= power->P2 / g.mean(); else g.setZero();
      return {f, g};
    }
    if (const auto* joint = std::get_if<JointMinimalClass>(&cls)) {
      const double t = (f + g).inverse().mean() / joint->P0;
      return {t * f, t * g};
    }
    const auto& band = std::get<BandContaminationClass>(cls);
    Eigen::ArrayXd lo = band.v, hi = band.u;
    Eigen::ArrayXd fb = f.max(lo).min(hi);
    if (fb.mean() > band.P1) {
      // pull back inside the power cap along the band
      double t_lo = 0.0, t_hi = 1.0;
      for (int it = 0; it < 100; ++it) {
        const double t = 0.5 * (t_lo + t_hi);
        if ((t * f).max(lo).min(hi).mean() > band.P1) t_hi = t; else t_lo = t;
      }
      fb = (t_lo * f).max(lo).min(hi);
    }
    const Eigen::ArrayXd floor = (1.0 - band.eps) * band.g1;
    Eigen::ArrayXd gb = g.max(floor);
    if (gb.mean() > band.P2) {
      double t_lo = 0.0, t_hi = 1.0;
      for (int it = 0; it < 100; ++it) {
        const double t = 0.5 * (t_lo + t_hi);
        if ((t * g).max(floor).mean() > band.P2) t_hi = t; else t_lo = t;
      }
      gb = (t_lo * g).max(floor);
    }
    return {fb, gb};
  }
};

}  // namespace

GridMaxResult grid_maximize_delta(const DensityClass& cls, const FunctionalSpec& a,
                                  const GridMaxParams& params, std::uint64_t seed) {
  a.validate();
  if (params.nodes < 2 || params.nodes > 64) {
    throw ValidationError("grid_maximize_delta: nodes must lie in [2, 64]");
  }
  const int grid = params.grid;
  ClassProjector project{cls, grid};

  GridMaxResult best;
  best.delta = -1.0;
  int evals = 0;

  const auto objective = [&](const Eigen::ArrayXd& fn,
                             const Eigen::ArrayXd& gn) -> double {
    const auto [f, g] = project(fn, gn);
    ++evals;
    try {
      return solve_filter_samples(f, g, a, params.truncation).mse;
    } catch (const Error&) {
      return -1.0;  // inadmissible numerically (vanishing spectrum etc.)
    }
  };

  for (int restart = 0; restart < params.restarts; ++restart) {
    SplitMix64 rng(SplitMix64::derive(seed, static_cast<std::uint64_t>(restart)));
    Eigen::ArrayXd fn(params.nodes), gn(params.nodes);
    for (int i = 0; i < params.nodes; ++i) fn[i] = std::exp(0.4 * rng.next_normal());
    for (int i = 0; i < params.nodes; ++i) gn[i] = std::exp(0.4 * rng.next_normal());

    double current = objective(fn, gn);
    for (int sweep = 0; sweep < params.sweeps; ++sweep) {
      double improved = 0.0;
      for (int which = 0; which < 2; ++which) {
        Eigen::ArrayXd& nodes = which == 0 ? fn : gn;
        for (int i = 0; i < params.nodes; ++i) {
          const double saved = nodes[i];
          for (const double factor : {1.35, 0.7}) {
            nodes[i] = saved * factor;
            const double trial = objective(fn, gn);
            if (trial > current + 1e-12) {
              improved += trial - current;
              current = trial;
            } else {
              nodes[i] = saved;
            }
            if (nodes[i] != saved) break;  // keep the accepted move
          }
        }
      }
      if (improved < 1e-6 * std::max(1.0, std::abs(current))) break;
    }
    best.restart_bests.push_back(current);
    if (current > best.delta) {
      const auto [f, g] = project(fn, gn);
      best.f = f;
      best.g = g;
      best.delta = current;
    }
  }
  best.evaluations = evals;
  return best;
}

}  // namespace wkf
