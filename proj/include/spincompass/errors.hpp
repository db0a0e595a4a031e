#ifndef SPINCOMPASS_ERRORS_HPP
#define SPINCOMPASS_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace spincompass {

/// Input failed schema or invariant validation (bad config, bad argument).
class ValidationError : public std::runtime_error {
  public:
    explicit ValidationError(const std::string &msg) : std::runtime_error(msg) {}
};

/// Structured-document parsing failed; message carries the offending path.
class ParseError : public std::runtime_error {
  public:
    explicit ParseError(const std::string &msg) : std::runtime_error(msg) {}
};

/// A numerical contract was violated (non-Hermitian input, basis mismatch,
/// imaginary residue above threshold).
class ContractError : public std::runtime_error {
  public:
    explicit ContractError(const std::string &msg) : std::runtime_error(msg) {}
};

/// Master-equation integration could not reach the requested tolerance.
class IntegrationError : public std::runtime_error {
  public:
    IntegrationError(const std::string &msg, double residual)
        : std::runtime_error(msg), achieved_residual(residual) {}
    double achieved_residual;
};

} // namespace spincompass

#endif
