#include "layertrack/error.hpp"

namespace layertrack {

const char* to_string(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::NonPositiveConvection: return "NonPositiveConvection";
        case ErrorCode::NegativeReaction: return "NegativeReaction";
        case ErrorCode::NonFiniteJump: return "NonFiniteJump";
        case ErrorCode::InvalidProblem: return "InvalidProblem";
        case ErrorCode::LayerHitsBoundary: return "LayerHitsBoundary";
        case ErrorCode::OutOfRange: return "OutOfRange";
        case ErrorCode::InvalidMesh: return "InvalidMesh";
        case ErrorCode::SingularSystem: return "SingularSystem";
        case ErrorCode::NonPositiveDifference: return "NonPositiveDifference";
        case ErrorCode::IoFailure: return "IoFailure";
        case ErrorCode::InvalidArgument: return "InvalidArgument";
    }
    return "Unknown";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

}  // namespace layertrack
