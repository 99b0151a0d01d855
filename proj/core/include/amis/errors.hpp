#ifndef AMIS_ERRORS_HPP
#define AMIS_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace amis {

/// An importance weight could not be formed: the proposal density vanishes
/// (or the density ratio is not finite) at a sample point.
class WeightUnderflowError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Every weight in a batch is zero; ESS and normalized estimators are
/// undefined.
class DegenerateWeightsError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A configuration value was rejected; carries the offending field name.
class ValidationError : public std::invalid_argument {
 public:
  ValidationError(std::string field, const std::string& message)
      : std::invalid_argument(field + ": " + message), field_(std::move(field)) {}

  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

}  // namespace amis

#endif
