#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace spreadnet {

/// Base class for every error raised by this library.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// -- time series ------------------------------------------------------------
struct WindowTooLong : Error { using Error::Error; };
struct ZeroVariance : Error { using Error::Error; };
struct NonPositivePrice : Error { using Error::Error; };
struct NoPriorValue : Error { using Error::Error; };

// -- ingest -----------------------------------------------------------------
struct MalformedRow : Error {
    MalformedRow(const std::string& path, std::size_t line, const std::string& detail)
        : Error(path + ":" + std::to_string(line) + ": " + detail), line_number(line) {}
    std::size_t line_number;
};
struct EmptyFile : Error { using Error::Error; };
struct DuplicateDate : Error { using Error::Error; };
struct DuplicateFips : Error { using Error::Error; };

// -- statistics -------------------------------------------------------------
struct DegenerateInput : Error { using Error::Error; };
struct SingularDesign : Error { using Error::Error; };

// -- forecasting ------------------------------------------------------------
struct UnknownSpec : Error { using Error::Error; };
struct EmptyFrame : Error { using Error::Error; };
struct EmptyTest : Error { using Error::Error; };

// -- pipeline ---------------------------------------------------------------
struct ConfigError : Error { using Error::Error; };
struct MissingUpstream : Error { using Error::Error; };
struct NumericalFailure : Error { using Error::Error; };

/// Exit-code classification used by the CLI: 2 config, 3 data, 4 numerical.
int exit_code_for(const std::exception& e);

/// A stage failure wrapping the underlying error with the stage name while
/// keeping its exit classification.
struct StageError : Error {
    StageError(const std::string& stage, int code, const std::string& detail)
        : Error("stage " + stage + ": " + detail), stage_name(stage), exit_code(code) {}
    std::string stage_name;
    int exit_code;
};

inline int exit_code_for(const std::exception& e) {
    if (auto* s = dynamic_cast<const StageError*>(&e)) return s->exit_code;
    if (dynamic_cast<const ConfigError*>(&e) || dynamic_cast<const UnknownSpec*>(&e)) return 2;
    if (dynamic_cast<const ZeroVariance*>(&e) || dynamic_cast<const SingularDesign*>(&e) ||
        dynamic_cast<const DegenerateInput*>(&e) || dynamic_cast<const NumericalFailure*>(&e)) {
        return 4;
    }
    if (dynamic_cast<const Error*>(&e)) return 3; // ingest / upstream / data
    return 4;
}

} // namespace spreadnet
