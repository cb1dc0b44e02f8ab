#ifndef WKFILTER_FACTORIZATION_HPP
#define WKFILTER_FACTORIZATION_HPP

#include <string>
#include <vector>

#include "wkfilter/grid.hpp"

namespace wkf {

/// One-sided coefficients h(0..L-1) of a canonical (minimum-phase)
/// factor: |sum_k h(k) e^{-i lambda k}|^2 reproduces the factorized
/// function on the grid, h(0) real and positive.
struct FactorCoeffs {
  std::vector<Complex> h;
  std::string target;                 // which function was factorized
  double reconstruction_error = 0.0;  // sup over the grid
  double tail_mass = 0.0;             // sum_{k > L/2} |h(k)|^2

  int length() const { return static_cast<int>(h.size()); }
  /// Factor values sum_k h(k) e^{-i lambda k} on a grid.
  Eigen::ArrayXcd evaluate(int grid_size) const;
};

/// Canonical factorization of strictly positive grid samples by the
/// cepstral method: exponentiate the one-sided half of log d.  The
/// factor is minimum phase by construction; `tol` bounds the accepted
/// sup reconstruction error.
FactorCoeffs spectral_factorize(const Eigen::ArrayXd& samples, int length,
                                double tol = 1e-8,
                                const std::string& target = "");

/// One-sided convolution of two factors: the canonical factor of the
/// product of the two factorized functions.
FactorCoeffs factor_product(const FactorCoeffs& lhs, const FactorCoeffs& rhs);

/// L x L lower-triangular Toeplitz matrix with entry (k, j) = h(k - j).
Eigen::MatrixXcd triangular_operator(const FactorCoeffs& factor, int size);

/// Smallest modulus of the factor polynomial on the unit circle; a
/// positive value certifies that no root sits on the boundary.
double boundary_margin(const FactorCoeffs& factor, int grid_size);

}  // namespace wkf

#endif  // WKFILTER_FACTORIZATION_HPP
