#ifndef RIS_ERRORS_HPP
#define RIS_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace ris
{

/// Argument outside the domain of a functional (time outside [0,T], t1 < t0, ...).
class DomainError : public std::domain_error
{
public:
  using std::domain_error::domain_error;
};

/// A numerical routine was configured in a way that leaves it nothing to do.
class ConfigurationError : public std::invalid_argument
{
public:
  using std::invalid_argument::invalid_argument;
};

/// An input violates a documented precondition of the operation (e.g. a jump
/// cost cheaper than the distance it is supposed to dominate).
class ContractViolation : public std::logic_error
{
public:
  using std::logic_error::logic_error;
};

/// Bad run configuration or command line; carries the offending field.
class UsageError : public std::runtime_error
{
public:
  UsageError(const std::string& field, const std::string& message)
    : std::runtime_error(field.empty() ? message : field + ": " + message), field_(field)
  {
  }

  const std::string& field() const noexcept { return field_; }

private:
  std::string field_;
};

}  // namespace ris

#endif  // RIS_ERRORS_HPP
