#pragma once

#include <stdexcept>
#include <string>

namespace layertrack {

enum class ErrorCode {
    NonPositiveConvection,
    NegativeReaction,
    NonFiniteJump,
    InvalidProblem,
    LayerHitsBoundary,
    OutOfRange,
    InvalidMesh,
    SingularSystem,
    NonPositiveDifference,
    IoFailure,
    InvalidArgument,
};

const char* to_string(ErrorCode code) noexcept;

/// Exception type for every failure raised by the library. The code lets
/// callers (the CLI in particular) separate usage errors from numerical ones.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message);

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

}  // namespace layertrack
