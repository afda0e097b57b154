#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace splitlab {

/// Precondition or configuration violation detected before any computation.
class InvalidArgument : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Base for failures raised while integrating a flow.
class SolverFailure : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A flow could not meet its tolerance within the allowed substeps.
class NonConvergence : public SolverFailure {
public:
    explicit NonConvergence(const std::string& what, std::ptrdiff_t node = -1)
        : SolverFailure(node >= 0 ? what + " (node " + std::to_string(node) + ")" : what),
          node_(node) {}

    /// Grid node that failed, or -1 when the failure is not node-local.
    std::ptrdiff_t node() const noexcept { return node_; }

private:
    std::ptrdiff_t node_;
};

class StepSizeUnderflow : public SolverFailure {
public:
    using SolverFailure::SolverFailure;
};

/// Too few valid samples for a least-squares fit.
class InsufficientPoints : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace splitlab
