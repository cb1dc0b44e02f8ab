#ifndef WKFILTER_ORACLE_HPP
#define WKFILTER_ORACLE_HPP

#include <cstdint>
#include <utility>
#include <vector>

#include "wkfilter/minimax.hpp"

namespace wkf {

/// A realization x(0), x(-1), ..., x(-(n-1)) of a moving-average
/// sequence, most recent value first.  The same seed regenerates the
/// path bit-identically.
struct SamplePath {
  std::vector<double> values;
  std::uint64_t seed = 0;
  std::vector<double> ma_coeffs;
};

/// x(t) = sum_k b(k) e(t-k) with independent standard normal
/// innovations from a counter-based generator.
SamplePath simulate_ma(const std::vector<double>& b, int n, std::uint64_t seed);

struct EmpiricalMse {
  double mean = 0.0;
  double stderr_ = 0.0;
  int paths = 0;
  double weight_tail_l1 = 0.0;  // neglected one-sided weight mass
  double bias_bound = 0.0;      // crude bound induced by the truncation
};

/// Monte-Carlo estimate of the error of the causal weights `w` applied
/// to signal-plus-noise, against the target functional of the signal.
/// Signal and noise are independent moving averages with the given
/// coefficients.  Weights are truncated where their remaining l1 mass
/// drops below 1e-6; the induced bias bound is reported.
EmpiricalMse empirical_mse(const std::vector<Complex>& w,
                           const std::vector<double>& b_signal,
                           const std::vector<double>& b_noise,
                           const FunctionalSpec& a, int n, int paths,
                           std::uint64_t seed);

struct ToeplitzProjection {
  std::vector<Complex> w;  // weights on the window 0..M
  double mse = 0.0;
};

/// Exact projection onto the span of the last M+1 observations: solves
/// the (M+1)x(M+1) normal equations built from the covariances of f and
/// g and returns the exact finite-window error.  Converges to the
/// half-infinite filter from above as M grows.
ToeplitzProjection toeplitz_projection(const SpectralDensity& f,
                                       const SpectralDensity& g,
                                       const FunctionalSpec& a, int window,
                                       int grid_size = 4096);

struct GridMaxParams {
  int nodes = 32;       // coarse density nodes on [0, pi], mirrored evenly
  int restarts = 10;
  int sweeps = 8;
  int truncation = 24;  // solver truncation for objective evaluations
  int grid = 256;       // solver grid for objective evaluations
};

struct GridMaxResult {
  Eigen::ArrayXd f, g;  // best admissible pair found (on the solver grid)
  double delta = 0.0;
  int evaluations = 0;
  std::vector<double> restart_bests;  // spread across restarts
};

/// Brute-force maximization of the optimal-filter error over the
/// discretized class: projected coordinate ascent over coarse node
/// values with random restarts.  Best-effort and deterministic under the
/// seed; the returned pair is always admissible.
GridMaxResult grid_maximize_delta(const DensityClass& cls, const FunctionalSpec& a,
                                  const GridMaxParams& params, std::uint64_t seed);

}  // namespace wkf

#endif  // WKFILTER_ORACLE_HPP
