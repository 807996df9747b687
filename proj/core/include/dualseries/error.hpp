// error.hpp: error codes and the exception type thrown across the library

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace dualseries {

enum class ErrorCode {
    InvalidParam,
    InvalidGrid,
    NonDecomposable,
    GridTooCoarse,
    DimensionMismatch,
    DegenerateSpectrum,
    BranchSwapDetected,
    QuadratureUnderResolved,
    OrderOutOfRange,
    WrongModelKind,
    StepTooLarge,
    WindowTooShort,
    NotAtResonance,
    ZeroDetuning,
};

std::string_view to_string(ErrorCode code) noexcept;

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

    // Parameter and grid problems are caller errors; everything else is numeric.
    bool is_configuration_error() const noexcept {
        return code_ == ErrorCode::InvalidParam || code_ == ErrorCode::InvalidGrid ||
               code_ == ErrorCode::WrongModelKind || code_ == ErrorCode::OrderOutOfRange ||
               code_ == ErrorCode::ZeroDetuning || code_ == ErrorCode::DimensionMismatch;
    }

private:
    ErrorCode code_;
};

}  // namespace dualseries
