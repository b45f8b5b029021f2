#pragma once

#include <functional>
#include <limits>
#include <stdexcept>
#include <string>
#include <string_view>

namespace dampo {

enum class ErrorCode {
  InvalidArgument,
  NonPhysicalPoles,
  NegativeFrequency,
  QuadratureNonConvergence,
  DegenerateRates,
  DivergentIntegral,
  ZeroCoupling,
  ValidationFailure,
  NonPhysicalState,
  UnsupportedOrder,
  InconclusiveHorizon,
  InsufficientSamples,
  DivergentMoment,
  DivergentKernel,
  NonDecayedKernel,
  PositivityViolation,
};

const char* to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what,
        double residual = std::numeric_limits<double>::quiet_NaN());

  ErrorCode code() const noexcept { return code_; }
  // achieved error estimate for quadrature failures, NaN otherwise
  double residual() const noexcept { return residual_; }

 private:
  ErrorCode code_;
  double residual_;
};

// Non-fatal diagnostics (recurrence window, large level shift, ...).
// The default sink writes to stderr.
using WarningSink = std::function<void(std::string_view)>;
WarningSink set_warning_sink(WarningSink sink);
void warn(std::string_view message);

}  // namespace dampo
