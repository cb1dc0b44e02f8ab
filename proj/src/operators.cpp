#include "wkfilter/operators.hpp"

#include <cmath>
#include <limits>

#include "wkfilter/errors.hpp"

namespace wkf {

namespace {

constexpr double kConditionLimit = 1e12;

FourierSeries ratio_series(const Eigen::ArrayXd& num, const Eigen::ArrayXd& den,
                           int max_lag) {
  Eigen::ArrayXd values(num.size());
  for (int j = 0; j < num.size(); ++j) values[j] = num[j] / den[j];
  return fourier_coefficients(values, max_lag);
}

}  // namespace

OperatorMatrix assemble_p(const FourierSeries& p, int truncation) {
  OperatorMatrix m;
  m.kind = OperatorKind::P;
  m.truncation = truncation;
  m.entries.resize(truncation, truncation);
  for (int l = 0; l < truncation; ++l) {
    for (int k = 0; k < truncation; ++k) m.entries(l, k) = p.at(l - k);
  }
  return m;
}

OperatorMatrix assemble_r(const FourierSeries& r, int truncation, int functional_size,
                          std::optional<int> N) {
  OperatorMatrix m;
  m.kind = N ? OperatorKind::RN : OperatorKind::R;
  m.truncation = truncation;
  m.row_offset = 1;
  m.entries = Eigen::MatrixXcd::Zero(truncation, functional_size);
  const int last_col = N ? std::min(*N, functional_size - 1) : functional_size - 1;
  for (int l = 0; l < truncation; ++l) {
    for (int col = 0; col <= last_col; ++col) m.entries(l, col) = r.at(l + 1 + col);
  }
  return m;
}

OperatorMatrix assemble_q(const FourierSeries& q, int functional_size,
                          std::optional<int> N) {
  OperatorMatrix m;
  m.kind = N ? OperatorKind::QN : OperatorKind::Q;
  m.truncation = functional_size;
  m.entries = Eigen::MatrixXcd::Zero(functional_size, functional_size);
  const int last = N ? std::min(*N, functional_size - 1) : functional_size - 1;
  // Oriented so that a^H Q a integrates |A|^2 fg/(f+g): the (l, k) entry
  // pairs conj(a(l)) with a(k), which picks up lag k - l.  The transpose
  // only differs for densities without even symmetry.
  for (int l = 0; l <= last; ++l) {
    for (int k = 0; k <= last; ++k) m.entries(l, k) = q.at(k - l);
  }
  return m;
}

OperatorMatrix assemble_y(const FourierSeries& p, int truncation) {
  OperatorMatrix m;
  m.kind = OperatorKind::Y;
  m.truncation = truncation;
  m.entries.resize(truncation, truncation);
  for (int k = 0; k < truncation; ++k) {
    for (int l = 0; l < truncation; ++l) m.entries(k, l) = p.at(k + l);
  }
  return m;
}

OperatorMatrix build_operator(OperatorKind kind, const SpectralDensity& f,
                              const SpectralDensity& g, int truncation,
                              int grid_size, std::optional<int> N,
                              std::optional<int> functional_size) {
  const MinimalityReport minimality = minimality_check(f, g, grid_size, 1e-6);
  if (!minimality.passes) {
    std::string where = minimality.offending_frequency
                            ? " (f+g vanishes at lambda = " +
                                  std::to_string(*minimality.offending_frequency) + ")"
                            : "";
    throw MinimalityError("operator assembly requires the minimality condition" + where);
  }
  const Eigen::ArrayXd sf = f.evaluate(grid_size);
  const Eigen::ArrayXd sg = g.evaluate(grid_size);
  const Eigen::ArrayXd s = sf + sg;
  const int cols = functional_size.value_or(truncation);
  const int need = 2 * truncation + cols + 2;
  if (need >= grid_size / 2) {
    throw ValidationError("truncation exceeds the lags resolvable on this grid");
  }

  switch (kind) {
    case OperatorKind::P:
      return assemble_p(ratio_series(Eigen::ArrayXd::Ones(grid_size), s, truncation),
                        truncation);
    case OperatorKind::R:
    case OperatorKind::RN:
      return assemble_r(ratio_series(sf, s, truncation + cols + 1), truncation, cols,
                        kind == OperatorKind::RN ? N : std::nullopt);
    case OperatorKind::Q:
    case OperatorKind::QN:
      return assemble_q(ratio_series(sf * sg, s, cols), cols,
                        kind == OperatorKind::QN ? N : std::nullopt);
    case OperatorKind::Y:
      return assemble_y(ratio_series(Eigen::ArrayXd::Ones(grid_size), s, 2 * truncation),
                        truncation);
    case OperatorKind::V: {
      OperatorMatrix p = assemble_p(
          ratio_series(Eigen::ArrayXd::Ones(grid_size), s, truncation), truncation);
      return invert_p(p).v;
    }
  }
  throw ValidationError("unknown operator kind");
}

InversionResult invert_p(const OperatorMatrix& p, const FactorCoeffs* theta) {
  const int n = static_cast<int>(p.entries.rows());
  InversionResult result;
  result.v.kind = OperatorKind::V;
  result.v.truncation = n;

  if (theta != nullptr) {
    const Eigen::MatrixXcd th = triangular_operator(*theta, n);
    result.v.entries = th.conjugate() * th.transpose();
    result.from_factor = true;
  } else {
    Eigen::LDLT<Eigen::MatrixXcd> ldlt(p.entries);
    const double rcond = ldlt.rcond();
    result.condition_estimate = rcond > 0.0 ? 1.0 / rcond : std::numeric_limits<double>::infinity();
    if (ldlt.info() != Eigen::Success || !(rcond > 1.0 / kConditionLimit)) {
      throw SingularOperatorError(
          "P truncation is singular or too ill-conditioned to invert",
          result.condition_estimate);
    }
    result.v.entries = ldlt.solve(Eigen::MatrixXcd::Identity(n, n));
  }

  const int block = std::max(1, n / 2);
  const Eigen::MatrixXcd defect =
      (result.v.entries * p.entries - Eigen::MatrixXcd::Identity(n, n))
          .topLeftCorner(block, block);
  result.residual = defect.cwiseAbs().maxCoeff();
  return result;
}

CoefficientSolution solve_coefficients(const OperatorMatrix& p,
                                       const OperatorMatrix& r,
                                       const Eigen::VectorXcd& a) {
  if (r.entries.cols() != a.size()) {
    throw ValidationError("solve_coefficients: functional length does not match R");
  }
  if (p.entries.rows() != r.entries.rows()) {
    throw ValidationError("solve_coefficients: incompatible truncations");
  }
  CoefficientSolution sol;
  const Eigen::VectorXcd rhs = r.entries * a;

  Eigen::LDLT<Eigen::MatrixXcd> ldlt(p.entries);
  const double rcond = ldlt.rcond();
  sol.condition_estimate =
      rcond > 0.0 ? 1.0 / rcond : std::numeric_limits<double>::infinity();
  if (ldlt.info() == Eigen::Success && rcond > 1.0 / kConditionLimit) {
    sol.c = ldlt.solve(rhs);
  } else {
    sol.used_least_squares = true;
    sol.warnings.push_back("P condition estimate " +
                           std::to_string(sol.condition_estimate) +
                           " above threshold; least-squares fallback used");
    sol.c = p.entries.completeOrthogonalDecomposition().solve(rhs);
  }
  const double scale = std::max(rhs.norm(), 1e-300);
  sol.residual = (p.entries * sol.c - rhs).norm() / scale;
  return sol;
}

}  // namespace wkf
