#include "wkfilter/factorization.hpp"

#include <cmath>

#include "wkfilter/errors.hpp"

namespace wkf {

Eigen::ArrayXcd FactorCoeffs::evaluate(int grid_size) const {
  return synthesize_causal(grid_size, h);
}

FactorCoeffs spectral_factorize(const Eigen::ArrayXd& samples, int length,
                                double tol, const std::string& target) {
  const int grid = static_cast<int>(samples.size());
  if (!is_power_of_two(grid) || grid < 16) {
    throw ValidationError("spectral_factorize: grid must be a power of two >= 16");
  }
  if (length < 1 || length > grid / 2) {
    throw ValidationError("spectral_factorize: factor length must be in [1, G/2]");
  }
  for (int j = 0; j < grid; ++j) {
    if (!(samples[j] > 0.0) || !std::isfinite(samples[j])) {
      throw FactorizationError(
          target + (target.empty() ? "" : ": ") +
          "factorization requires strictly positive samples; offending node " +
          std::to_string(j));
    }
  }

  // Cepstrum of the target, then keep the nonpositive-lag half (halving
  // lag zero) so that exp() of it is a one-sided series in e^{-i lambda k}
  // with positive real leading coefficient.
  Eigen::ArrayXcd log_d(grid);
  for (int j = 0; j < grid; ++j) log_d[j] = Complex(std::log(samples[j]), 0.0);
  GridTransform cepstrum(log_d);

  std::vector<Complex> half(static_cast<std::size_t>(grid / 2));
  half[0] = 0.5 * cepstrum.coef(0);
  for (int m = 1; m < grid / 2; ++m) half[static_cast<std::size_t>(m)] = cepstrum.coef(-m);
  const Eigen::ArrayXcd half_values = synthesize_causal(grid, half);

  Eigen::ArrayXcd factor_values(grid);
  for (int j = 0; j < grid; ++j) factor_values[j] = std::exp(half_values[j]);

  GridTransform factor(factor_values);
  FactorCoeffs out;
  out.target = target;
  out.h.resize(static_cast<std::size_t>(length));
  for (int k = 0; k < length; ++k) out.h[static_cast<std::size_t>(k)] = factor.coef(-k);
  // Unimodular phase convention: h(0) real > 0.
  if (std::abs(out.h[0]) == 0.0) {
    throw FactorizationError(target + ": degenerate leading coefficient");
  }
  const Complex phase = out.h[0] / std::abs(out.h[0]);
  for (auto& c : out.h) c /= phase;

  const Eigen::ArrayXcd recon = out.evaluate(grid);
  double err = 0.0;
  for (int j = 0; j < grid; ++j) {
    err = std::max(err, std::abs(std::norm(recon[j]) - samples[j]));
  }
  out.reconstruction_error = err;
  for (int k = length / 2 + 1; k < length; ++k) {
    out.tail_mass += std::norm(out.h[static_cast<std::size_t>(k)]);
  }
  if (err > tol) {
    throw FactorizationError(
        target + (target.empty() ? "" : ": ") +
            "factorization did not converge at length " + std::to_string(length) +
            "; sup reconstruction error " + std::to_string(err),
        Error::Category::NonConvergence);
  }
  return out;
}

FactorCoeffs factor_product(const FactorCoeffs& lhs, const FactorCoeffs& rhs) {
  if (lhs.h.empty() || rhs.h.empty()) {
    throw ValidationError("factor_product: empty factor");
  }
  if (lhs.length() != rhs.length()) {
    throw ValidationError("factor_product: factors must share truncation length");
  }
  const int n = lhs.length();
  FactorCoeffs out;
  out.target = lhs.target.empty() ? rhs.target : lhs.target + "*" + rhs.target;
  out.h.assign(static_cast<std::size_t>(n), Complex(0.0, 0.0));
  for (int k = 0; k < n; ++k) {
    Complex acc(0.0, 0.0);
    for (int j = 0; j <= k; ++j) {
      acc += lhs.h[static_cast<std::size_t>(j)] * rhs.h[static_cast<std::size_t>(k - j)];
    }
    out.h[static_cast<std::size_t>(k)] = acc;
  }
  for (int k = n / 2 + 1; k < n; ++k) {
    out.tail_mass += std::norm(out.h[static_cast<std::size_t>(k)]);
  }
  return out;
}

Eigen::MatrixXcd triangular_operator(const FactorCoeffs& factor, int size) {
  if (size < factor.length()) {
    throw ValidationError("triangular_operator: size must cover the factor length");
  }
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(size, size);
  for (int k = 0; k < size; ++k) {
    for (int j = std::max(0, k - factor.length() + 1); j <= k; ++j) {
      m(k, j) = factor.h[static_cast<std::size_t>(k - j)];
    }
  }
  return m;
}

double boundary_margin(const FactorCoeffs& factor, int grid_size) {
  const Eigen::ArrayXcd values = factor.evaluate(grid_size);
  double margin = std::abs(values[0]);
  for (int j = 1; j < grid_size; ++j) margin = std::min(margin, std::abs(values[j]));
  return margin;
}

}  // namespace wkf
