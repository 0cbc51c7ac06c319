#ifndef DIRACWG_ERRORS_HPP
#define DIRACWG_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace diracwg {

// Bad arguments, broken preconditions, domain violations. CLI exit code 2.
class validation_error : public std::runtime_error {
  public:
    explicit validation_error(const std::string& msg) : std::runtime_error(msg) {}
};

// A computation that ran but did not converge (resolution, truncation,
// bracket failures with valid input). CLI exit code 3.
class convergence_error : public std::runtime_error {
  public:
    explicit convergence_error(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace diracwg

#endif
