#pragma once

#include <stdexcept>
#include <string>

namespace hsi {

// Error taxonomy. The category drives the CLI exit code:
// Parse -> 2, Shape/config -> 3, Numerical -> 4.
enum class ErrorCode {
    // parse / format
    MissingField,
    SizeMismatch,
    UnsupportedDataType,
    ParseError,
    IoFailure,
    // shape / config
    DimMismatch,
    ShapeMismatch,
    OutOfBounds,
    BandCountMismatch,
    ExtrapolationRequested,
    IndivisibleDims,
    KTooLarge,
    TooNarrow,
    DegenerateInput,
    EmptyClass,
    EmptyTrainSet,
    SingleClass,
    LengthMismatch,
    InfeasibleCap,
    ZeroVector,
    BadConfig,
    // numerical
    AllBandsDead,
    IllConditioned,
    SingularNoise,
    DegenerateSimplex,
    RankCollapse,
    RejectionExhausted,
};

enum class ErrorCategory { Parse, Shape, Numerical };

ErrorCategory category_of(ErrorCode code);
const char* name_of(ErrorCode code);

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(name_of(code)) + ": " + what), code_(code) {}

    ErrorCode code() const { return code_; }
    ErrorCategory category() const { return category_of(code_); }

private:
    ErrorCode code_;
};

} // namespace hsi
