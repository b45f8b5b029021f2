#include "dampo/errors.hpp"

#include <cstdio>
#include <mutex>

namespace dampo {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::NonPhysicalPoles: return "NonPhysicalPoles";
    case ErrorCode::NegativeFrequency: return "NegativeFrequency";
    case ErrorCode::QuadratureNonConvergence: return "QuadratureNonConvergence";
    case ErrorCode::DegenerateRates: return "DegenerateRates";
    case ErrorCode::DivergentIntegral: return "DivergentIntegral";
    case ErrorCode::ZeroCoupling: return "ZeroCoupling";
    case ErrorCode::ValidationFailure: return "ValidationFailure";
    case ErrorCode::NonPhysicalState: return "NonPhysicalState";
    case ErrorCode::UnsupportedOrder: return "UnsupportedOrder";
    case ErrorCode::InconclusiveHorizon: return "InconclusiveHorizon";
    case ErrorCode::InsufficientSamples: return "InsufficientSamples";
    case ErrorCode::DivergentMoment: return "DivergentMoment";
    case ErrorCode::DivergentKernel: return "DivergentKernel";
    case ErrorCode::NonDecayedKernel: return "NonDecayedKernel";
    case ErrorCode::PositivityViolation: return "PositivityViolation";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& what, double residual)
    : std::runtime_error(std::string(to_string(code)) + ": " + what),
      code_(code),
      residual_(residual) {}

namespace {
std::mutex sink_mutex;
WarningSink& sink() {
  static WarningSink s = [](std::string_view msg) {
    std::fprintf(stderr, "dampo: warning: %.*s\n", static_cast<int>(msg.size()), msg.data());
  };
  return s;
}
}  // namespace

WarningSink set_warning_sink(WarningSink s) {
  std::lock_guard lock(sink_mutex);
  WarningSink old = std::move(sink());
  sink() = std::move(s);
  return old;
}

void warn(std::string_view message) {
  std::lock_guard lock(sink_mutex);
  if (sink()) sink()(message);
}

}  // namespace dampo
