#pragma once

#include <stdexcept>
#include <string>

namespace metriclab {

/// Broad category of a failure. The CLI maps `malformed_input` to a usage
/// exit code and everything else to a domain-error exit code.
enum class ErrorKind {
    malformed_input,
    domain,
    resolution,
    schedule,
    construction,
    alphabet,
    insufficient_depth,
    degeneracy,
    insufficient_data,
};

const char* to_string(ErrorKind kind) noexcept;

/// Every recoverable failure in the library is a LabError. `module()` names
/// the subsystem that raised it (metric_core, gh_solver, ...).
class LabError : public std::runtime_error {
public:
    LabError(ErrorKind kind, std::string module, const std::string& message)
        : std::runtime_error(message), kind_(kind), module_(std::move(module)) {}

    ErrorKind kind() const noexcept { return kind_; }
    const std::string& module() const noexcept { return module_; }

private:
    ErrorKind kind_;
    std::string module_;
};

[[noreturn]] inline void fail(ErrorKind kind, const char* module, const std::string& message) {
    throw LabError(kind, module, message);
}

}  // namespace metriclab
