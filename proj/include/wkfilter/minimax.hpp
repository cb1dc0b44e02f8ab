#ifndef WKFILTER_MINIMAX_HPP
#define WKFILTER_MINIMAX_HPP

#include <cstdint>
#include <utility>
#include <variant>

#include "wkfilter/filtering.hpp"

namespace wkf {

/// Admissible classes of spectral pairs.
///
/// PowerPair:          mean(f) <= P1, mean(g) <= P2 (means over [-pi,pi)
///                     normalized by 2pi).
/// JointMinimal:       mean(1/(f+g)) >= P0.
/// BandContamination:  v <= f <= u pointwise with mean(f) <= P1, and
///                     g = (1-eps) g1 + eps w for an arbitrary density w
///                     with mean(g) <= P2 (equivalently g >= (1-eps) g1
///                     pointwise under the same power cap).
struct PowerPairClass {
  double P1 = 1.0;
  double P2 = 1.0;
};

struct JointMinimalClass {
  double P0 = 1.0;
};

struct BandContaminationClass {
  Eigen::ArrayXd v, u;
  double P1 = 1.0;
  Eigen::ArrayXd g1;
  double eps = 0.0;
  double P2 = 1.0;
};

using DensityClass = std::variant<PowerPairClass, JointMinimalClass, BandContaminationClass>;

struct MinimaxOptions {
  int truncation = 64;
  int grid = 1024;
  double damping = 0.5;
  double tol = 1e-8;
  int max_iterations = 500;
};

struct MinimaxResiduals {
  double eq_f = 0.0;         // defining equation residual, f side (sup, normalized)
  double eq_g = 0.0;         // defining equation residual, g side
  double power_f = 0.0;      // |constraint value - target| for the binding f constraint
  double power_g = 0.0;
  double comp_slack = 0.0;   // pointwise complementary slackness defect (band class)
  double delta_identity = 0.0;  // |integral error of h0 - bilinear delta0|
};

/// Least favorable pair and the robust characteristic built on it.
struct MinimaxSolution {
  Eigen::ArrayXd f0, g0;
  double alpha1 = 0.0, alpha2 = 0.0;  // power-class / band-class levels
  double beta1 = 0.0, beta2 = 0.0;    // joint-class constant moduli
  Eigen::ArrayXd gamma1, gamma2, phi_mult;  // pointwise multipliers (band class)
  FilterSolution filter;              // optimal filter at (f0, g0); h0 = filter.h
  double delta0 = 0.0;
  MinimaxResiduals residuals;
  int iterations = 0;
};

/// The two nonnegative components of the error functional's density
/// derivatives: h_f = |A g + C|/(f+g), h_g = |A f - C|/(f+g), evaluated
/// on the grid of the solution.  Unbounded values (vanishing f+g) raise a
/// minimality error.
std::pair<Eigen::ArrayXd, Eigen::ArrayXd> h_components(const Eigen::ArrayXd& f,
                                                       const Eigen::ArrayXd& g,
                                                       const FilterSolution& solution);
std::pair<Eigen::ArrayXd, Eigen::ArrayXd> h_components(const SpectralDensity& f,
                                                       const SpectralDensity& g,
                                                       const FilterSolution& solution);

MinimaxSolution least_favorable_power(const PowerPairClass& cls, const FunctionalSpec& a,
                                      const MinimaxOptions& opts = {});

/// Fixed known signal density, noise constrained only in power: the
/// least favorable noise has the clipped form
/// g0 = max{0, |A f - C|/alpha2 - f} with alpha2 calibrated to the power.
MinimaxSolution least_favorable_given_f(const SpectralDensity& f, double P2,
                                        const FunctionalSpec& a,
                                        const MinimaxOptions& opts = {});

MinimaxSolution least_favorable_joint(const JointMinimalClass& cls, const FunctionalSpec& a,
                                      const MinimaxOptions& opts = {});

MinimaxSolution least_favorable_band_eps(const BandContaminationClass& cls,
                                         const FunctionalSpec& a,
                                         const MinimaxOptions& opts = {});

struct SaddlePointReport {
  int trials = 0;
  double max_upper_violation = 0.0;  // Delta(h0; f, g) - Delta(h0; f0, g0) over the class
  double max_lower_violation = 0.0;  // Delta(h0; f0, g0) - Delta(h; f0, g0) over causal h
  double reference_delta = 0.0;      // Delta(h0; f0, g0) by quadrature
  bool passes = false;
};

/// Randomized saddle-point audit: samples admissible pairs and causal
/// perturbations of h0 and reports the worst violation of each
/// inequality.  `slack` absorbs grid discretization; report-only, never
/// throws on violations.
SaddlePointReport verify_saddle_point(const MinimaxSolution& solution,
                                      const DensityClass& cls, const FunctionalSpec& a,
                                      int n_trials, std::uint64_t seed,
                                      double tol = 1e-8, double slack = 1e-6);

/// Random admissible pair from a class (used by the audit and by tests).
std::pair<Eigen::ArrayXd, Eigen::ArrayXd> sample_admissible(const DensityClass& cls,
                                                            int grid_size,
                                                            std::uint64_t seed);

/// Equation residuals of a candidate pair for the power class, without
/// iterating: how far |A g + C| and |A f - C| are from multiples of f+g.
MinimaxResiduals power_equation_residuals(const Eigen::ArrayXd& f,
                                          const Eigen::ArrayXd& g,
                                          const FunctionalSpec& a, int truncation,
                                          double P1, double P2);

}  // namespace wkf

#endif  // WKFILTER_MINIMAX_HPP
