#ifndef WKFILTER_FILTERING_HPP
#define WKFILTER_FILTERING_HPP

#include <vector>

#include "wkfilter/operators.hpp"

namespace wkf {

/// Coefficients a(0..N) of the target functional sum_k a(k) x(-k).
/// Conceptually infinite targets are represented by their finite support
/// together with a declared bound on the neglected tail.
struct FunctionalSpec {
  std::vector<Complex> coeffs;
  double declared_tail = 0.0;

  int size() const { return static_cast<int>(coeffs.size()); }
  double l1_norm() const;
  /// sum_k (k+1) |a(k)|^2, the second summability handle.
  double weighted_l2() const;
  /// Throws unless the coefficient conditions hold on the finite part.
  void validate() const;
  /// A(e^{i lambda}) = sum_k a(k) e^{-i lambda k} on the grid.
  Eigen::ArrayXcd symbol(int grid_size) const;
};

struct FilterDiagnostics {
  int truncation = 0;
  int grid = 0;
  double solve_residual = 0.0;
  double condition_estimate = 0.0;
  double causality_defect = 0.0;      // max |coef of h| at lags k >= 1
  double orthogonality_defect = 0.0;  // max |coef of A f - h (f+g)| at lags k <= 0
  double weight_tail_mass = 0.0;      // sum_{k > L} |w(k)|^2
  double minimality_integral = 0.0;
  double functional_tail = 0.0;       // declared neglected tail of the functional
  bool used_least_squares = false;
  std::vector<std::string> warnings;
};

/// Solution of one filtering problem: coefficients of the anticausal
/// correction, spectral characteristic samples, one-sided time weights,
/// and the mean-square error.
struct FilterSolution {
  Eigen::VectorXcd c;         // correction coefficients c(0..L-1)
  Eigen::ArrayXcd h;          // spectral characteristic on the grid
  std::vector<Complex> w;     // time weights w(0..L)
  double mse = 0.0;
  std::vector<Complex> functional;  // the a(k) the solution was built for
  FilterDiagnostics diagnostics;
};

/// Optimal filter for the functional sum a(k) x(-k) of the signal with
/// density f observed in additive uncorrelated noise with density g, from
/// the present and past of the sum.  Direct route: solve Pc = Ra, then
/// h = A f/(f+g) - C/(f+g) with C(e^{i lambda}) = sum_k c(k) e^{i lambda (k+1)}.
FilterSolution solve_filter(const SpectralDensity& f, const SpectralDensity& g,
                            const FunctionalSpec& a, int truncation, int grid_size);

/// Same contract through the column-restricted operators; requires a
/// genuinely finite functional (declared tail zero).
FilterSolution solve_filter_finite(const SpectralDensity& f, const SpectralDensity& g,
                                   const FunctionalSpec& a, int truncation,
                                   int grid_size);

/// Estimate of the single value x(p), p <= 0, from observations at times
/// <= 0.  Prediction (p > 0) is out of scope and rejected.
FilterSolution estimate_point(const SpectralDensity& f, const SpectralDensity& g,
                              int p, int truncation, int grid_size);

/// Estimate of the current value x(0); weights assembled directly from
/// the f/(f+g) series and the inverse of P (an independent route from the
/// general solver, used to cross-check it).
FilterSolution smoothing(const SpectralDensity& f, const SpectralDensity& g,
                         int truncation, int grid_size);

/// Factorized route: both canonical factorizations are computed and the
/// characteristic is assembled from the one-sided factors and the Hankel
/// operator of conj(G) a, with no linear solve.
FilterSolution solve_filter_factorized(const SpectralDensity& f,
                                       const SpectralDensity& g,
                                       const FunctionalSpec& a, int truncation,
                                       int grid_size);

struct MseBreakdown {
  double bilinear = 0.0;  // <Ra, P^{-1} R a> + <Q a, a>
  double integral = 0.0;  // grid quadrature of the error spectrum
  double gap = 0.0;
};

/// Mean-square error of a solution, recomputed through the bilinear form
/// and cross-checked against the integral form on the grid.
MseBreakdown mse_breakdown(const SpectralDensity& f, const SpectralDensity& g,
                           const FunctionalSpec& a, const FilterSolution& solution);
double mse(const SpectralDensity& f, const SpectralDensity& g,
           const FunctionalSpec& a, const FilterSolution& solution);

/// One-sided time weights recovered from the characteristic samples;
/// significant positive-lag content is an internal consistency error.
std::vector<Complex> time_weights(const FilterSolution& solution, int count = -1);

/// Error value of an arbitrary causal estimate with weights `w` under the
/// spectral pair (f, g): (1/2pi) int |A - h|^2 f + |h|^2 g.
double error_of_weights(const Eigen::ArrayXd& f, const Eigen::ArrayXd& g,
                        const FunctionalSpec& a, const std::vector<Complex>& w);

/// C(e^{i lambda}) = sum_k c(k) e^{i lambda (k+1)} on the grid.
Eigen::ArrayXcd correction_symbol(const Eigen::VectorXcd& c, int grid_size);

/// Internal: direct solve on density samples already on a shared grid
/// (used by the minimax iterations and the brute-force oracle).
FilterSolution solve_filter_samples(const Eigen::ArrayXd& f, const Eigen::ArrayXd& g,
                                    const FunctionalSpec& a, int truncation);

}  // namespace wkf

#endif  // WKFILTER_FILTERING_HPP
