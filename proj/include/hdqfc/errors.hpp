#pragma once

#include <functional>
#include <stdexcept>
#include <string>

namespace hdqfc {

/// Precondition or configuration violation. Maps to CLI exit code 2.
class ValidationError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A computation that ran but could not produce a trustworthy result
/// (divergence, non-convergence, singular systems). Maps to CLI exit code 3.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

using WarningHandler = std::function<void(const std::string&)>;

// Non-fatal diagnostics (window overflow, grid adequacy). The default handler
// writes to stderr; tests swap in a capturing handler.
void warn(const std::string& message);
WarningHandler set_warning_handler(WarningHandler handler);

}  // namespace hdqfc
