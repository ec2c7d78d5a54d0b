#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace fairscore {

enum class ErrorCode {
    MalformedRow,
    ScoreOutOfRange,
    UnknownGroup,
    EmptyInput,
    EmptyGroup,
    EmptyStratum,
    UnlabeledDataset,
    SingleClass,
    LengthMismatch,
    ThetaOutOfRange,
    SingleMode,
    EmptyGroupInPartition,
    InvalidSpec,
    MalformedCurve,
    InvalidArgument,
    Io,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Every failure raised by the library carries one of the codes above so the
/// C boundary and the CLI can map it without string matching.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(message), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

}  // namespace fairscore
