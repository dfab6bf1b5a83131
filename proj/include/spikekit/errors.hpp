#ifndef SPIKEKIT_ERRORS_HPP
#define SPIKEKIT_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace spikekit {

struct error : std::runtime_error {
  explicit error(const std::string& msg) : std::runtime_error(msg) {}
};

// Bad inputs, violated preconditions, malformed configs.  CLI exit code 2.
struct validation_error : error {
  explicit validation_error(const std::string& msg) : error(msg) {}
};

// Iteration did not converge (Newton stagnation, missing bracket,
// time-step underflow).  CLI exit code 3.
struct solver_error : error {
  explicit solver_error(const std::string& msg) : error(msg) {}
};

} // namespace spikekit

#endif
