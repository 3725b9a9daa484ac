#pragma once

#include <stdexcept>
#include <string>

namespace coconsume {

/// Base class for failures raised by the analysis modules. The command-line
/// tool maps these to exit code 1.
class AnalysisError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Unreadable inputs, unwritable outputs and malformed invocations (exit code 2).
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Raised when a filter leaves nothing to build a graph from.
class EmptyGraphError : public AnalysisError {
public:
    using AnalysisError::AnalysisError;
};

class NotConnectedError : public AnalysisError {
public:
    using AnalysisError::AnalysisError;
};

class ConvergenceError : public AnalysisError {
public:
    ConvergenceError(const std::string &what, double lastResidual)
        : AnalysisError(what), residual(lastResidual) {}

    double residual;
};

class RankDeficiencyError : public AnalysisError {
public:
    using AnalysisError::AnalysisError;
};

} // namespace coconsume
