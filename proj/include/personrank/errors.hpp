#pragma once

#include <stdexcept>
#include <string>

namespace personrank {

enum class ErrorCode {
    EmptyScene,
    DuplicatePersonId,
    NonPositiveBox,
    MultipleGroundTruth,
    IndexOutOfRange,
    MissingYaw,
    DimensionMismatch,
    ChannelInactive,
    ShapeMismatch,
    ChannelMismatch,
    NoConvergence,
    ChannelMisalignment,
    NoActiveChannels,
    MissingGroundTruth,
    EmptyValidation,
    EmptyCategory,
    SingularSystem,
    ParseError,
};

const char* error_code_name(ErrorCode code);

/// All library errors carry a code so callers can branch without string matching.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(std::string(error_code_name(code)) + ": " + message), code_(code) {}

    ErrorCode code() const { return code_; }

private:
    ErrorCode code_;
};

} // namespace personrank
