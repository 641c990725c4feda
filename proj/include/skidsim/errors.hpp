#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace skidsim {

// Failure taxonomy shared by validation and model evaluation.
enum class ErrorCode {
    InvalidParams,        // vehicle/environment/config invariant violated
    InvalidState,         // motion state outside the model's domain
    InvalidSlip,          // wheel slip ratio outside [0, 1]
    DegenerateState,      // quantity undefined at this state (e.g. course angle at V = 0)
    SingularYawRate,      // |omega_z| below the division guard
    SingularCourseAngle,  // course angle at +-pi/2
    SingularDenominator,  // closed-form denominator below guard
    SingularSlipAngle,    // cos(delta_1) ~ 0
    SingularInBracket,    // root bracket unusable after subdivision retry
};

inline const char* error_code_name(ErrorCode c) noexcept {
    switch (c) {
        case ErrorCode::InvalidParams: return "invalid_params";
        case ErrorCode::InvalidState: return "invalid_state";
        case ErrorCode::InvalidSlip: return "invalid_slip";
        case ErrorCode::DegenerateState: return "degenerate_state";
        case ErrorCode::SingularYawRate: return "singular_yaw_rate";
        case ErrorCode::SingularCourseAngle: return "singular_course_angle";
        case ErrorCode::SingularDenominator: return "singular_denominator";
        case ErrorCode::SingularSlipAngle: return "singular_slip_angle";
        case ErrorCode::SingularInBracket: return "singular_in_bracket";
    }
    return "unknown";
}

class SkidError : public std::runtime_error {
  public:
    SkidError(ErrorCode code, std::string symbol, const std::string& message)
        : std::runtime_error(message), code_(code), symbol_(std::move(symbol)) {}

    ErrorCode code() const noexcept { return code_; }

    // Name of the offending quantity or config key, for diagnostics.
    const std::string& symbol() const noexcept { return symbol_; }

    // Input/validation failures, as opposed to singular evaluation points.
    bool is_validation() const noexcept {
        return code_ == ErrorCode::InvalidParams || code_ == ErrorCode::InvalidState ||
               code_ == ErrorCode::InvalidSlip;
    }

  private:
    ErrorCode code_;
    std::string symbol_;
};

}  // namespace skidsim
