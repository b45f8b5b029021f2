#pragma once

#include <complex>
#include <limits>
#include <optional>

#include "dampo/spectral.hpp"

namespace dampo {

// beta = kZeroTemperature means T = 0
inline constexpr double kZeroTemperature = std::numeric_limits<double>::infinity();

struct GaussianState {
  double mean_x = 0.0;
  double mean_p = 0.0;
  double var_x = 0.5;
  double var_p = 0.5;
  double cov_xp = 0.0;

  // var_x var_p - cov_xp^2, >= 1/4 for a physical state
  double uncertainty_product() const { return var_x * var_p - cov_xp * cov_xp; }
};

struct DiagonalForm {
  double omega_diag = 0.0;
  double n_bar_c = 0.0;
  double T_eff = 0.0;
  double entropy = 0.0;  // nats
  std::optional<double> mutual_information;  // only when the global state is pure
};

// coth(beta w / 2) = 1 + 2 nbar(w)
double thermal_weight(double beta, double omega);
// 1/(e^{beta w} - 1)
double bose_occupation(double beta, double omega);

// Uncoupled oscillator eigenstates for reference
GaussianState vacuum_state(double m, double Omega0);
GaussianState uncoupled_thermal_state(double m, double Omega0, double beta);

GaussianState ground_state(const SpectralDensity& sd, double m, const AverageOptions& opt = {});
// Throws DivergentMoment if pi(w)/w^2 is not integrable at 0.
GaussianState thermal_state(const SpectralDensity& sd, double m, double beta, const AverageOptions& opt = {});

double oscillator_energy(const GaussianState& s, double m, double f0);

// global_pure selects whether the mutual information (2S) is reported.
DiagonalForm diagonal_form(const GaussianState& s, double m, bool global_pure = false);

// Symmetrically ordered characteristic function, real part. For zero-mean
// states this is exp(-(a xr^2 + b xi^2)/2), a = 2 var_p/(m Omega0), b = 2 m Omega0 var_x.
double characteristic_function(const GaussianState& s, double m, double Omega0, cplx xi);
cplx characteristic_function_complex(const GaussianState& s, double m, double Omega0, cplx xi);

// Symmetrically ordered <(a^dagger)^p a^q>, p + q <= 4 (UnsupportedOrder above).
cplx symmetric_moment_complex(const GaussianState& s, double m, double Omega0, int order_dagger, int order_a);
double symmetric_moment(const GaussianState& s, double m, double Omega0, int order_dagger, int order_a);
// Normally ordered <a^dagger a> = S<a^dagger a> - 1/2
double mean_occupation(const GaussianState& s, double m, double Omega0);

}  // namespace dampo
