#include "fairscore/error.hpp"

namespace fairscore {

std::string_view to_string(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::MalformedRow: return "MalformedRow";
        case ErrorCode::ScoreOutOfRange: return "ScoreOutOfRange";
        case ErrorCode::UnknownGroup: return "UnknownGroup";
        case ErrorCode::EmptyInput: return "EmptyInput";
        case ErrorCode::EmptyGroup: return "EmptyGroup";
        case ErrorCode::EmptyStratum: return "EmptyStratum";
        case ErrorCode::UnlabeledDataset: return "UnlabeledDataset";
        case ErrorCode::SingleClass: return "SingleClass";
        case ErrorCode::LengthMismatch: return "LengthMismatch";
        case ErrorCode::ThetaOutOfRange: return "ThetaOutOfRange";
        case ErrorCode::SingleMode: return "SingleMode";
        case ErrorCode::EmptyGroupInPartition: return "EmptyGroupInPartition";
        case ErrorCode::InvalidSpec: return "InvalidSpec";
        case ErrorCode::MalformedCurve: return "MalformedCurve";
        case ErrorCode::InvalidArgument: return "InvalidArgument";
        case ErrorCode::Io: return "Io";
    }
    return "Unknown";
}

}  // namespace fairscore
