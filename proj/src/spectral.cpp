#include "wkfilter/spectral.hpp"

#include <algorithm>
#include <cmath>

#include "wkfilter/errors.hpp"

namespace wkf {

namespace {

void require_valid_grid(int grid_size) {
  if (grid_size < 16 || !is_power_of_two(grid_size)) {
    throw ValidationError("grid size must be a power of two >= 16, got " +
                          std::to_string(grid_size));
  }
}

}  // namespace

SpectralDensity SpectralDensity::moving_average(std::vector<Complex> coeffs) {
  if (coeffs.empty()) {
    throw ValidationError("moving-average density needs at least one coefficient");
  }
  SpectralDensity d;
  d.kind_ = DensityKind::MovingAverage;
  d.ma_coeffs_ = std::move(coeffs);
  return d;
}

SpectralDensity SpectralDensity::from_samples(Eigen::ArrayXd samples) {
  require_valid_grid(static_cast<int>(samples.size()));
  for (int j = 0; j < samples.size(); ++j) {
    if (!std::isfinite(samples[j])) {
      throw ValidationError("grid density has a non-finite sample at node " +
                            std::to_string(j));
    }
    if (samples[j] < 0.0) {
      throw ValidationError("grid density has a negative sample at node " +
                            std::to_string(j));
    }
  }
  SpectralDensity d;
  d.kind_ = DensityKind::Grid;
  d.samples_ = std::move(samples);
  return d;
}

Eigen::ArrayXd SpectralDensity::evaluate(int grid_size) const {
  require_valid_grid(grid_size);
  if (kind_ == DensityKind::MovingAverage) {
    const Eigen::ArrayXd lambda = frequency_grid(grid_size);
    Eigen::ArrayXd out(grid_size);
    for (int j = 0; j < grid_size; ++j) {
      Complex s(0.0, 0.0);
      const Complex z = std::polar(1.0, -lambda[j]);
      Complex zk(1.0, 0.0);
      for (const Complex& b : ma_coeffs_) {
        s += b * zk;
        zk *= z;
      }
      out[j] = std::norm(s);
    }
    return out;
  }
  const int stored = static_cast<int>(samples_.size());
  if (grid_size == stored) return samples_;
  if (grid_size > stored) {
    throw ValidationError(
        "grid density stored on " + std::to_string(stored) +
        " nodes cannot be refined to " + std::to_string(grid_size));
  }
  // Value reuse on the coarser grid: both grids share node -pi, stride by
  // the integer ratio.
  const int stride = stored / grid_size;
  Eigen::ArrayXd out(grid_size);
  for (int j = 0; j < grid_size; ++j) out[j] = samples_[j * stride];
  return out;
}

std::optional<int> SpectralDensity::max_grid() const {
  if (kind_ == DensityKind::MovingAverage) return std::nullopt;
  return static_cast<int>(samples_.size());
}

double FourierSeries::hermitian_defect() const {
  double worst = 0.0;
  for (int k = 0; k <= max_lag; ++k) {
    worst = std::max(worst, std::abs(at(-k) - std::conj(at(k))));
  }
  return worst;
}

FourierSeries fourier_coefficients(const Eigen::ArrayXcd& samples, int max_lag) {
  const int g = static_cast<int>(samples.size());
  require_valid_grid(g);
  if (max_lag < 0 || max_lag >= g / 2) {
    throw ValidationError("max lag must satisfy 0 <= K < G/2");
  }
  for (int j = 0; j < g; ++j) {
    if (!std::isfinite(samples[j].real()) || !std::isfinite(samples[j].imag())) {
      throw MinimalityError("non-finite value at node " + std::to_string(j) +
                            " (lambda = " + std::to_string(frequency_grid(g)[j]) +
                            "); the observation spectrum may vanish there");
    }
  }
  GridTransform transform(samples);
  FourierSeries series;
  series.max_lag = max_lag;
  series.coeffs.resize(static_cast<std::size_t>(2 * max_lag + 1));
  for (int k = -max_lag; k <= max_lag; ++k) {
    series.coeffs[static_cast<std::size_t>(k + max_lag)] = transform.coef(k);
  }
  double tail = 0.0;
  for (int k = max_lag / 2 + 1; k <= max_lag; ++k) {
    tail = std::max({tail, std::abs(series.at(k)), std::abs(series.at(-k))});
  }
  series.truncation_residual = tail;
  return series;
}

FourierSeries fourier_coefficients(const Eigen::ArrayXd& samples, int max_lag) {
  return fourier_coefficients(Eigen::ArrayXcd(samples.cast<Complex>()), max_lag);
}

FourierSeries fourier_coefficients(const std::function<double(double)>& fn,
                                   int grid_size, int max_lag) {
  require_valid_grid(grid_size);
  const Eigen::ArrayXd lambda = frequency_grid(grid_size);
  Eigen::ArrayXd samples(grid_size);
  for (int j = 0; j < grid_size; ++j) samples[j] = fn(lambda[j]);
  return fourier_coefficients(samples, max_lag);
}

namespace {

struct IntegralProbe {
  bool finite = true;
  double value = 0.0;
  std::optional<double> zero_at;
};

IntegralProbe reciprocal_mean(const Eigen::ArrayXd& f, const Eigen::ArrayXd& g) {
  const int grid = static_cast<int>(f.size());
  const Eigen::ArrayXd lambda = frequency_grid(grid);
  IntegralProbe probe;
  double acc = 0.0;
  for (int j = 0; j < grid; ++j) {
    const double s = f[j] + g[j];
    if (!(s > 0.0) || !std::isfinite(1.0 / s)) {
      probe.finite = false;
      probe.zero_at = lambda[j];
      return probe;
    }
    acc += 1.0 / s;
  }
  probe.value = acc / grid;  // (1/2pi) \int = mean over the uniform grid
  return probe;
}

}  // namespace

MinimalityReport minimality_check(const SpectralDensity& f,
                                  const SpectralDensity& g,
                                  int grid_size, double tol) {
  require_valid_grid(grid_size);
  const auto fits = [&](const SpectralDensity& d, int target) {
    auto cap = d.max_grid();
    return !cap || target <= *cap;
  };
  // Grid-kind inputs cannot be refined, and stored samples are never
  // interpolated; for them the integral on the stored grid is decisive
  // and the strided half grid is reported for information only.
  const bool refinable = fits(f, 2 * grid_size) && fits(g, 2 * grid_size);
  const int base = refinable ? grid_size : grid_size / 2;
  const int refined = refinable ? 2 * grid_size : grid_size;

  MinimalityReport report;
  report.grid_used = base;
  report.grid_refined = refined;

  const IntegralProbe coarse = reciprocal_mean(f.evaluate(base), g.evaluate(base));
  const IntegralProbe fine = reciprocal_mean(f.evaluate(refined), g.evaluate(refined));
  report.integral = coarse.value;
  report.refined_integral = fine.value;
  if (!coarse.finite || !fine.finite) {
    report.passes = false;
    report.offending_frequency = coarse.finite ? fine.zero_at : coarse.zero_at;
    return report;
  }
  report.change = std::abs(fine.value - coarse.value);
  report.passes = refinable
                      ? report.change < tol * std::max(1.0, std::abs(coarse.value))
                      : true;
  return report;
}

MinimalityReport minimality_check_samples(const Eigen::ArrayXd& f,
                                          const Eigen::ArrayXd& g, double tol) {
  const int grid = static_cast<int>(f.size());
  if (g.size() != grid) {
    throw ValidationError("minimality check: density grids differ in size");
  }
  return minimality_check(SpectralDensity::from_samples(f),
                          SpectralDensity::from_samples(g), grid, tol);
}

}  // namespace wkf
