#ifndef WKFILTER_OPERATORS_HPP
#define WKFILTER_OPERATORS_HPP

#include <optional>
#include <vector>

#include "wkfilter/factorization.hpp"
#include "wkfilter/spectral.hpp"

namespace wkf {

enum class OperatorKind { P, R, Q, RN, QN, Y, V };

/// Truncated operator acting on coefficient sequences.  Index semantics
/// are carried explicitly because the coefficient operator R is built
/// with a one-row shift: entries(l, m) addresses the underlying Fourier
/// symbol at row l + row_offset.
///
///   P  (L x L):     entries(l, k) = p(l - k),      p = coefs of 1/(f+g)
///   R  (L x Na):    entries(l, m) = r(l + 1 + m),  r = coefs of f/(f+g)
///   Q  (Na x Na):   entries(l, k) = q(l - k),      q = coefs of fg/(f+g)
///   RN, QN:         R, Q with columns (rows and columns) beyond N zeroed
///   Y  (L x L):     entries(k, l) = p(k + l)
///   V  (L x L):     inverse of the P truncation
struct OperatorMatrix {
  OperatorKind kind = OperatorKind::P;
  Eigen::MatrixXcd entries;
  int row_offset = 0;
  int col_offset = 0;
  int truncation = 0;
};

/// Assemble a truncated operator from the spectral pair.  `functional_size`
/// sets the column count of R/Q (defaults to the truncation); `N` bounds
/// the retained columns for the RN/QN kinds.
OperatorMatrix build_operator(OperatorKind kind, const SpectralDensity& f,
                              const SpectralDensity& g, int truncation,
                              int grid_size,
                              std::optional<int> N = std::nullopt,
                              std::optional<int> functional_size = std::nullopt);

/// Assembly from precomputed Fourier series (shared by the filtering
/// pipeline so the transforms are done once).
OperatorMatrix assemble_p(const FourierSeries& p, int truncation);
OperatorMatrix assemble_r(const FourierSeries& r, int truncation, int functional_size,
                          std::optional<int> N = std::nullopt);
OperatorMatrix assemble_q(const FourierSeries& q, int functional_size,
                          std::optional<int> N = std::nullopt);
OperatorMatrix assemble_y(const FourierSeries& p, int truncation);

struct InversionResult {
  OperatorMatrix v;
  double residual = 0.0;            // max |VP - I| on the leading half block
  double condition_estimate = 0.0;  // 1/rcond of the truncation
  bool from_factor = false;
};

/// Invert the P truncation.  With a factor of (f+g) supplied the inverse
/// is assembled as conj(Theta) Theta' without a linear solve.
InversionResult invert_p(const OperatorMatrix& p,
                         const FactorCoeffs* theta = nullptr);

struct CoefficientSolution {
  Eigen::VectorXcd c;
  double residual = 0.0;  // ||Pc - Ra|| / ||Ra||
  double condition_estimate = 0.0;
  bool used_least_squares = false;
  std::vector<std::string> warnings;
};

/// Solve P c = R a for the filter coefficients.  Positive definite solve
/// with a least-squares fallback once the condition estimate passes 1e12;
/// the fallback is recorded as a warning rather than an error.
CoefficientSolution solve_coefficients(const OperatorMatrix& p,
                                       const OperatorMatrix& r,
                                       const Eigen::VectorXcd& a);

}  // namespace wkf

#endif  // WKFILTER_OPERATORS_HPP
