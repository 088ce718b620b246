#include "hsi/errors.hpp"

namespace hsi {

ErrorCategory category_of(ErrorCode code) {
    switch (code) {
    case ErrorCode::MissingField:
    case ErrorCode::SizeMismatch:
    case ErrorCode::UnsupportedDataType:
    case ErrorCode::ParseError:
    case ErrorCode::IoFailure:
        return ErrorCategory::Parse;
    case ErrorCode::AllBandsDead:
    case ErrorCode::IllConditioned:
    case ErrorCode::SingularNoise:
    case ErrorCode::DegenerateSimplex:
    case ErrorCode::RankCollapse:
    case ErrorCode::RejectionExhausted:
        return ErrorCategory::Numerical;
    default:
        return ErrorCategory::Shape;
    }
}

const char* name_of(ErrorCode code) {
    switch (code) {
    case ErrorCode::MissingField: return "MissingField";
    case ErrorCode::SizeMismatch: return "SizeMismatch";
    case ErrorCode::UnsupportedDataType: return "UnsupportedDataType";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::IoFailure: return "IoFailure";
    case ErrorCode::DimMismatch: return "DimMismatch";
    case ErrorCode::ShapeMismatch: return "ShapeMismatch";
    case ErrorCode::OutOfBounds: return "OutOfBounds";
    case ErrorCode::BandCountMismatch: return "BandCountMismatch";
    case ErrorCode::ExtrapolationRequested: return "ExtrapolationRequested";
    case ErrorCode::IndivisibleDims: return "IndivisibleDims";
    case ErrorCode::KTooLarge: return "KTooLarge";
    case ErrorCode::TooNarrow: return "TooNarrow";
    case ErrorCode::DegenerateInput: return "DegenerateInput";
    case ErrorCode::EmptyClass: return "EmptyClass";
    case ErrorCode::EmptyTrainSet: return "EmptyTrainSet";
    case ErrorCode::SingleClass: return "SingleClass";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::InfeasibleCap: return "InfeasibleCap";
    case ErrorCode::ZeroVector: return "ZeroVector";
    case ErrorCode::BadConfig: return "BadConfig";
    case ErrorCode::AllBandsDead: return "AllBandsDead";
    case ErrorCode::IllConditioned: return "IllConditioned";
    case ErrorCode::SingularNoise: return "SingularNoise";
    case ErrorCode::DegenerateSimplex: return "DegenerateSimplex";
    case ErrorCode::RankCollapse: return "RankCollapse";
    case ErrorCode::RejectionExhausted: return "RejectionExhausted";
    }
    return "Error";
}

} // namespace hsi
