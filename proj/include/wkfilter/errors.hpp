#ifndef WKFILTER_ERRORS_HPP
#define WKFILTER_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace wkf {

/// Base class for all library errors. Carries a stable category so that
/// callers (notably the CLI) can map failures to exit codes without
/// string matching.
class Error : public std::runtime_error {
 public:
  enum class Category {
    Validation,      // bad inputs, infeasible classes, schema violations
    Minimality,      // 1/(f+g) not integrable / vanishing observation spectrum
    NonConvergence,  // iterative solver exhausted its budget
    Singular,        // singular or hopelessly ill-conditioned operator
  };

  Error(Category category, const std::string& message)
      : std::runtime_error(message), category_(category) {}

  Category category() const { return category_; }

  int exit_code() const {
    switch (category_) {
      case Category::Validation: return 1;
      case Category::NonConvergence: return 2;
      case Category::Minimality: return 3;
      case Category::Singular: return 2;
    }
    return 1;
  }

 private:
  Category category_;
};

class ValidationError : public Error {
 public:
  explicit ValidationError(const std::string& message)
      : Error(Category::Validation, message) {}
};

class MinimalityError : public Error {
 public:
  explicit MinimalityError(const std::string& message)
      : Error(Category::Minimality, message) {}
};

class NonConvergenceError : public Error {
 public:
  NonConvergenceError(const std::string& message, double last_residual)
      : Error(Category::NonConvergence, message), last_residual_(last_residual) {}
  double last_residual() const { return last_residual_; }

 private:
  double last_residual_;
};

class FactorizationError : public Error {
 public:
  explicit FactorizationError(const std::string& message,
                              Category category = Category::Validation)
      : Error(category, message) {}
};

class SingularOperatorError : public Error {
 public:
  SingularOperatorError(const std::string& message, double condition_estimate)
      : Error(Category::Singular, message), condition_estimate_(condition_estimate) {}
  double condition_estimate() const { return condition_estimate_; }

 private:
  double condition_estimate_;
};

}  // namespace wkf

#endif  // WKFILTER_ERRORS_HPP
