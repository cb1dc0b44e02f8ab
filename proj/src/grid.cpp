#include "wkfilter/grid.hpp"

#include <unsupported/Eigen/FFT>

#include "wkfilter/errors.hpp"

namespace wkf {

Eigen::ArrayXd frequency_grid(int grid_size) {
  Eigen::ArrayXd lambda(grid_size);
  for (int j = 0; j < grid_size; ++j) {
    lambda[j] = -M_PI + 2.0 * M_PI * j / grid_size;
  }
  return lambda;
}

bool is_power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

namespace {

// Grid starts at -pi, so lag k picks up the phase e^{i pi k} = (-1)^k
// relative to a DFT indexed from zero.
double lag_sign(int k) { return (k % 2 == 0) ? 1.0 : -1.0; }

std::vector<Complex> forward_bins(const Eigen::ArrayXcd& samples) {
  const int g = static_cast<int>(samples.size());
  std::vector<Complex> x(samples.data(), samples.data() + g), bins;
  Eigen::FFT<double> fft;
  fft.fwd(bins, x);
  return bins;
}

}  // namespace

GridTransform::GridTransform(const Eigen::ArrayXcd& samples)
    : grid_size_(static_cast<int>(samples.size())), bins_(forward_bins(samples)) {}

GridTransform::GridTransform(const Eigen::ArrayXd& samples)
    : GridTransform(Eigen::ArrayXcd(samples.cast<Complex>())) {}

Complex GridTransform::coef(int k) const {
  if (std::abs(k) >= grid_size_ / 2) return Complex(0.0, 0.0);
  const int m = ((k % grid_size_) + grid_size_) % grid_size_;
  return lag_sign(k) * bins_[m] / static_cast<double>(grid_size_);
}

Eigen::ArrayXcd synthesize(int grid_size,
                           const std::vector<Complex>& coeffs,
                           int first_lag) {
  if (static_cast<int>(coeffs.size()) > grid_size) {
    throw ValidationError("synthesize: more coefficients than grid points");
  }
  // F_j = sum_k c(k) e^{i lambda_j k} = conj(DFT(conj(w)))_j with
  // w[m] = (-1)^k c(k) folded at m = k mod G.
  std::vector<Complex> w(grid_size, Complex(0.0, 0.0));
  for (int i = 0; i < static_cast<int>(coeffs.size()); ++i) {
    const int k = first_lag + i;
    const int m = ((k % grid_size) + grid_size) % grid_size;
    w[m] += lag_sign(k) * std::conj(coeffs[i]);
  }
  Eigen::FFT<double> fft;
  std::vector<Complex> bins;
  fft.fwd(bins, w);
  Eigen::ArrayXcd out(grid_size);
  for (int j = 0; j < grid_size; ++j) out[j] = std::conj(bins[j]);
  return out;
}

Eigen::ArrayXcd synthesize_causal(int grid_size, const std::vector<Complex>& coeffs) {
  std::vector<Complex> reversed(coeffs.rbegin(), coeffs.rend());
  return synthesize(grid_size, reversed, -(static_cast<int>(coeffs.size()) - 1));
}

}  // namespace wkf
