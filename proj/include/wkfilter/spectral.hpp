#ifndef WKFILTER_SPECTRAL_HPP
#define WKFILTER_SPECTRAL_HPP

#include <functional>
#include <optional>
#include <vector>

#include "wkfilter/grid.hpp"

namespace wkf {

enum class DensityKind { MovingAverage, Grid };

/// A nonnegative even-symmetric-up-to-conjugation function on [-pi, pi),
/// given either by finite moving-average coefficients b(0..q), in which
/// case the density is |sum_k b(k) e^{-i lambda k}|^2, or by nonnegative
/// samples on a uniform power-of-two grid.
class SpectralDensity {
 public:
  static SpectralDensity moving_average(std::vector<Complex> coeffs);
  static SpectralDensity from_samples(Eigen::ArrayXd samples);

  DensityKind kind() const { return kind_; }
  const std::vector<Complex>& ma_coeffs() const { return ma_coeffs_; }
  const Eigen::ArrayXd& samples() const { return samples_; }

  /// Samples on the uniform grid of the requested size.  Moving-average
  /// densities evaluate exactly at the nodes.  Grid densities are reused
  /// by stride when the requested grid is a divisor of the stored one;
  /// requesting a finer grid than stored is rejected rather than
  /// interpolated.
  Eigen::ArrayXd evaluate(int grid_size) const;

  /// Largest grid this density can be evaluated on (unbounded for
  /// moving-average kind).
  std::optional<int> max_grid() const;

 private:
  SpectralDensity() = default;
  DensityKind kind_ = DensityKind::MovingAverage;
  std::vector<Complex> ma_coeffs_;
  Eigen::ArrayXd samples_;
};

/// Lag-indexed coefficients coef(k), k in [-max_lag, max_lag], of a real
/// function of lambda, under the convention
/// coef(k) = (1/2pi) \int F(lambda) e^{-i lambda k} d lambda.
struct FourierSeries {
  int max_lag = 0;
  std::vector<Complex> coeffs;  // index k + max_lag
  double truncation_residual = 0.0;  // max |coef| over max_lag/2 < |k| <= max_lag

  Complex at(int k) const {
    if (std::abs(k) > max_lag) return Complex(0.0, 0.0);
    return coeffs[static_cast<std::size_t>(k + max_lag)];
  }

  /// max_k |coef(-k) - conj(coef(k))|; zero for series of real functions.
  double hermitian_defect() const;
};

/// Fourier coefficients of grid samples up to |k| <= max_lag.
/// Requires max_lag < G/2.  Non-finite samples (typically a vanishing
/// f+g under division) are reported as a minimality violation.
FourierSeries fourier_coefficients(const Eigen::ArrayXd& samples, int max_lag);
FourierSeries fourier_coefficients(const Eigen::ArrayXcd& samples, int max_lag);
FourierSeries fourier_coefficients(const std::function<double(double)>& fn,
                                   int grid_size, int max_lag);

struct MinimalityReport {
  bool passes = false;
  double integral = 0.0;          // (1/2pi) \int d lambda / (f+g) at the base grid
  double refined_integral = 0.0;  // same estimate at the comparison grid
  double change = 0.0;
  int grid_used = 0;
  int grid_refined = 0;
  std::optional<double> offending_frequency;  // node where f+g vanishes
};

/// Decide whether (1/2pi) \int d lambda / (f+g) is finite and numerically
/// stable: the estimate is formed on `grid_size` nodes and compared
/// against a refined grid (2G when both densities can be evaluated there,
/// otherwise G/2 vs G).  A vanishing f+g at a node fails immediately with
/// the offending frequency.
MinimalityReport minimality_check(const SpectralDensity& f,
                                  const SpectralDensity& g,
                                  int grid_size, double tol);

/// Same check starting from samples already on a grid (no refinement
/// possible; compares against the strided half grid).
MinimalityReport minimality_check_samples(const Eigen::ArrayXd& f,
                                          const Eigen::ArrayXd& g, double tol);

}  // namespace wkf

#endif  // WKFILTER_SPECTRAL_HPP
