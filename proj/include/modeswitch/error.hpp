#pragma once

#include <functional>
#include <stdexcept>
#include <string>

namespace modeswitch {

/// Malformed or inconsistent input data (CSV contents, dataset invariants).
class DataError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A model could not be fitted, loaded or evaluated.
class ModelError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

using WarningHandler = std::function<void(const std::string&)>;

// Non-fatal diagnostics go through a process-wide handler. The default
// handler writes "warning: <msg>" to stderr.
void warn(const std::string& message);

// Installs a handler and returns the previous one. Passing an empty
// function restores the default.
WarningHandler set_warning_handler(WarningHandler handler);

} // namespace modeswitch
