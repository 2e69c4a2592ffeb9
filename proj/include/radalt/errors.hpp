#pragma once

#include <stdexcept>
#include <string>

namespace radalt {

/// No CFAR detection available where the altitude estimator needs one.
struct NoDetectionError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Signal content is numerically unusable for the requested analysis
/// (e.g. zero-magnitude samples fed to a phase-derivative estimator).
struct NumericalDegeneracyError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Profile has no sidelobe structure to measure.
struct UndefinedPslrError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Input violates a data precondition (e.g. all-zero channel fed to the
/// peak normalizer).
struct DegenerateInputError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Loss became non-finite during training.
struct TrainingDivergenceError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Checkpoint file is corrupt, from a different format version, or its
/// geometry does not match what the caller requires.
struct IncompatibleCheckpointError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Model/config geometry cannot be realized.
struct InvalidConfigError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

}  // namespace radalt
