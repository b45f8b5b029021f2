#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "dampo/spectral.hpp"
#include "dampo/states.hpp"

namespace dampo {

// c = <<cos wt>>, s = <<sin(wt)/w>>, d = <<w sin wt>>
struct EvolutionSeries {
  std::vector<double> times;
  std::vector<double> c, s, d;
  std::vector<double> mean_x, mean_p;
  // per-time quadrature diagnostics (empty for closed forms)
  std::vector<double> error;
  std::vector<bool> converged;

  bool all_converged() const;
};

struct KernelOptions {
  quad::Options quad{1e-12, 0.0, 200000};
  // W = max(support, tail_cycles / t) when pi has an algebraic tail
  double tail_cycles = 60.0;
};

// Oscillatory quadrature; failing time points are flagged, not thrown.
EvolutionSeries kernels(const SpectralDensity& sd, const std::vector<double>& times, const KernelOptions& opt = {});
// Triple-exponential closed forms (Parametric only; DegenerateRates).
EvolutionSeries closed_form_kernels(const SpectralDensity& sd, const std::vector<double>& times);
EvolutionSeries closed_form_kernels(const ParametricParams& p, const std::vector<double>& times);

// mean_x = c x0 + s p0/m, mean_p = c p0 - m d x0
EvolutionSeries evolve_means(double x0, double p0, double m, EvolutionSeries series);

enum class DampingClass { Underdamped, OverOrCritical };
const char* to_string(DampingClass c);

struct ClassifyOptions {
  double horizon = 0.0;          // 0: use the whole series
  bool allow_undecayed = false;  // no stationary point and |c| >= 1e-3 -> OverOrCritical
  double decay_threshold = 1e-3;
};

struct DampingReport {
  DampingClass strict = DampingClass::OverOrCritical;     // stationary point of c within horizon
  std::optional<DampingClass> classical;                  // discriminant of gamma+/- (Parametric)
  std::optional<double> stationary_time;
  double horizon = 0.0;
  double c_at_horizon = 0.0;
};

// Throws InconclusiveHorizon when no zero of d is found and c has not decayed.
DampingClass classify_damping(const EvolutionSeries& series, const ClassifyOptions& opt = {});
DampingReport damping_report(const EvolutionSeries& series, const ClassifyOptions& opt = {});
// Parametric: horizon defaults to 10/Re(min rate); closed-form kernels on a fine grid.
DampingReport damping_report(const SpectralDensity& sd, const ClassifyOptions& opt = {});
// 5 / Re(min(gamma+, gamma-)): the window on which the Gamma -> 0 oscillator has decayed
double classical_horizon(const ParametricParams& p);

// Intercept of a quadratic fit of -2(c - 1)/t^2 against t over
// t in (0, 0.01/sqrt(estimate)]. Throws InsufficientSamples below 5 points.
double short_time_frequency(const EvolutionSeries& series);

// Mean-force Gibbs state
GaussianState steady_state(const SpectralDensity& sd, double m, double beta, const AverageOptions& opt = {});

// x'' + gamma x' + omega0^2 x = 0; returns (x(t), x'(t))
std::pair<double, double> damped_oscillator(double gamma, double omega0, double x0, double v0, double t);
// Classical comparison curve for a parametric density: gamma = g+ + g-, omega0^2 = g+ g-,
// x0 = 1, v0 = 0.
std::vector<double> classical_comparison(const ParametricParams& p, const std::vector<double>& times);

// Grid helpers
std::vector<double> linear_grid(double start, double stop, int points);
std::vector<double> log_grid(double start, double stop, int points);

}  // namespace dampo
