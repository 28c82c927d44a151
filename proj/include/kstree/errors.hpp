#ifndef KSTREE_ERRORS_HPP
#define KSTREE_ERRORS_HPP

#include <stdexcept>
#include <string>
#include <vector>

namespace kstree {

/// Root finding or linear algebra gave up; message carries the diagnostics.
class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

/// The exponential Gram matrix is too ill-conditioned to invert reliably.
class ConditioningRefusal : public std::runtime_error {
 public:
  ConditioningRefusal(const std::string& what, double condition)
      : std::runtime_error(what), condition(condition) {}
  double condition;
};

/// A retained eigenvalue has a rank-deficient trace system under the
/// requested channel pattern; `direction` spans one unsteerable
/// combination of the eigenspace basis functions.
class UncontrollableDirection : public std::runtime_error {
 public:
  UncontrollableDirection(const std::string& what, double sigma,
                          std::vector<double> direction)
      : std::runtime_error(what), sigma(sigma), direction(std::move(direction)) {}
  double sigma;
  std::vector<double> direction;
};

}  // namespace kstree

#endif
