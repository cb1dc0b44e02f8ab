#ifndef WKFILTER_GRID_HPP
#define WKFILTER_GRID_HPP

#include <Eigen/Dense>
#include <complex>
#include <vector>

namespace wkf {

using Complex = std::complex<double>;

/// Uniform frequency grid lambda_j = -pi + 2*pi*j/G, j = 0..G-1, over [-pi, pi).
Eigen::ArrayXd frequency_grid(int grid_size);

bool is_power_of_two(int n);

/// Discrete transform between samples on the uniform grid and lag
/// coefficients.  The library-wide convention is
///
///   coef(k) = (1/2pi) \int F(lambda) e^{-i lambda k} d lambda
///            ~ (1/G) \sum_j F(lambda_j) e^{-i lambda_j k},
///
/// which is exact for trigonometric polynomials of degree < G/2 and is
/// the trapezoid rule on the periodic grid.  Lags are meaningful for
/// |k| <= G/2 - 1.
class GridTransform {
 public:
  explicit GridTransform(const Eigen::ArrayXcd& samples);
  explicit GridTransform(const Eigen::ArrayXd& samples);

  int grid_size() const { return grid_size_; }

  /// coef(k) for |k| < G/2; out-of-range lags return 0.
  Complex coef(int k) const;

 private:
  int grid_size_;
  std::vector<Complex> bins_;  // raw DFT bins, X[m] = sum_n x[n] e^{-2pi i mn/G}
};

/// Evaluate F(lambda_j) = sum_k coeffs(k) e^{i lambda_j k} on the grid,
/// where `index_of` maps lag k to a position in `coeffs` (or -1 when the
/// lag is absent).  Convenience wrappers below cover the two layouts used
/// in practice.
Eigen::ArrayXcd synthesize(int grid_size,
                           const std::vector<Complex>& coeffs,
                           int first_lag);

/// One-sided series sum_k coeffs[k] e^{-i lambda k} (lags 0, -1, -2, ...).
Eigen::ArrayXcd synthesize_causal(int grid_size, const std::vector<Complex>& coeffs);

}  // namespace wkf

#endif  // WKFILTER_GRID_HPP
