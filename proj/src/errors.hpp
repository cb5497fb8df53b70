#pragma once

#include <limits>
#include <stdexcept>
#include <string>

namespace plaser {

// Failure taxonomy. Every throw site names the offending quantity and value.
enum class ErrCode {
  NonPositiveRate,     // gamma, gamma_m, omega_m must be > 0
  NegativeQuantity,    // J, g_m, E, n_th, t_end, horizon must be >= 0
  GainBelowPassive,    // g < -gamma is outside the model
  UnknownMode,         // unrecognized enum token (method, noise mode, ...)
  StepTooLarge,        // grid violates h <= 1/(20 * fastest rate)
  Overflow,            // state norm beyond 1e300 (unstable gain regime)
  IllConditioned,      // propagator condition number beyond 1e12
  GridMismatch,        // series does not cover the requested interval
  NoThresholdInRange,  // threshold scan found no crossing
  ConfigError,         // config file syntax/semantics (field path in message)
  ExceptionalPoint,    // eigenmodes coalesce, overlap undefined
};

inline const char* errcode_name(ErrCode c) {
  switch (c) {
    case ErrCode::NonPositiveRate: return "NonPositiveRate";
    case ErrCode::NegativeQuantity: return "NegativeQuantity";
    case ErrCode::GainBelowPassive: return "GainBelowPassive";
    case ErrCode::UnknownMode: return "UnknownMode";
    case ErrCode::StepTooLarge: return "StepTooLarge";
    case ErrCode::Overflow: return "Overflow";
    case ErrCode::IllConditioned: return "IllConditioned";
    case ErrCode::GridMismatch: return "GridMismatch";
    case ErrCode::NoThresholdInRange: return "NoThresholdInRange";
    case ErrCode::ConfigError: return "ConfigError";
    case ErrCode::ExceptionalPoint: return "ExceptionalPoint";
  }
  return "UnknownError";
}

class SimError : public std::runtime_error {
 public:
  SimError(ErrCode code, const std::string& msg)
      : std::runtime_error(std::string(errcode_name(code)) + ": " + msg),
        code_(code) {}
  ErrCode code() const { return code_; }

  // Optional numeric attachment, e.g. the blow-up time for Overflow.
  double payload = std::numeric_limits<double>::quiet_NaN();

 private:
  ErrCode code_;
};

[[noreturn]] inline void fail(ErrCode code, const std::string& msg) {
  throw SimError(code, msg);
}

}  // namespace plaser
