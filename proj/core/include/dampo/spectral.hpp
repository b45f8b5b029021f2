#pragma once

#include <complex>
#include <functional>
#include <optional>
#include <vector>

#include "dampo/errors.hpp"
#include "dampo/interp.hpp"
#include "dampo/quadrature.hpp"

namespace dampo {

using cplx = std::complex<double>;

enum class DensityKind { Parametric, FanoDerived, Tabulated };
const char* to_string(DensityKind kind);

// pi(w) = (2 w^2 / pi) K / ((w^2+G^2)(w^2+g+^2)(w^2+g-^2)),
// K = (g+ + g-)(g- + G)(G + g+)
struct ParametricParams {
  double Gamma = 0.0;
  cplx gamma_plus{0.0, 0.0};
  cplx gamma_minus{0.0, 0.0};
};

struct DensityTable {
  std::vector<double> omega_grid;
  std::vector<double> values;
  double tail_exponent = 4.0;  // pi ~ C / w^p beyond the grid
};

struct OscillatorParams {
  double m = 1.0;
  double Omega0 = 1.0;  // short-time frequency
  double omega0 = 1.0;  // long-time frequency
  void check() const;   // throws InvalidArgument
};

// Immutable; cheap to copy.
class SpectralDensity {
 public:
  DensityKind kind() const { return kind_; }
  const std::optional<ParametricParams>& parametric() const { return parametric_; }
  const std::optional<DensityTable>& table() const { return table_; }
  std::optional<double> omega0_sq_hint() const { return hint_; }

  // Throws NegativeFrequency for omega < 0.
  double operator()(double omega) const;

  // Quadrature geometry: a characteristic frequency, the frequency beyond
  // which pi is a pure C/w^q tail (q = tail_exponent(), infinite for compact
  // support), and interior features worth splitting at.
  double scale() const { return scale_; }
  double support() const { return support_; }
  double tail_exponent() const { return tail_q_; }
  const std::vector<double>& breakpoints() const { return breaks_; }

  // Used by the Fano module: a density evaluated by `eval`, with the node
  // table kept for export.
  static SpectralDensity fano_derived(DensityTable nodes, std::function<double(double)> eval,
                                      std::vector<double> breaks, double scale, double support,
                                      std::optional<double> omega0_sq);

 private:
  friend SpectralDensity make_parametric_density(double, cplx, cplx);
  friend SpectralDensity make_tabulated_density(std::vector<double>, std::vector<double>, double);

  double tabulated_value(double omega) const;

  DensityKind kind_ = DensityKind::Parametric;
  std::optional<ParametricParams> parametric_;
  std::optional<DensityTable> table_;
  std::optional<double> hint_;

  // parametric coefficients
  double pref_ = 0.0, g2_ = 0.0, s1_ = 0.0, s2_ = 0.0;
  // tabulated
  MonotoneCubic interp_;
  double tail_c_ = 0.0;
  // FanoDerived
  std::function<double(double)> eval_;

  double scale_ = 1.0;
  double support_ = 0.0;
  double tail_q_ = 4.0;
  std::vector<double> breaks_;
};

SpectralDensity make_parametric_density(double Gamma, cplx gamma_plus, cplx gamma_minus);
SpectralDensity make_tabulated_density(std::vector<double> omega_grid, std::vector<double> values,
                                       double tail_exponent = 4.0);
// Re-tabulates any density on its own node table (FanoDerived -> Tabulated).
SpectralDensity to_tabulated(const SpectralDensity& sd);

double density_value(const SpectralDensity& sd, double omega);

struct AverageOptions {
  quad::Options quad{1e-15, 1e-11, 4000};
};

// <<f>> = int_0^inf pi(w) f(w) dw. Result carries the error estimate.
quad::Result weighted_average_result(const SpectralDensity& sd, const std::function<double(double)>& f,
                                     const AverageOptions& opt = {});
// Throws QuadratureNonConvergence with the achieved residual.
double weighted_average(const SpectralDensity& sd, const std::function<double(double)>& f,
                        const AverageOptions& opt = {});

struct ClosedFormMoments {
  double mean_omega = 0.0;
  double mean_inv_omega = 0.0;
  double mean_inv_omega_sq = 0.0;
  double omega0_sq = 0.0;
  double imag_residue = 0.0;  // largest |Im| discarded from the complex-log forms
};
// Parametric only. Throws DegenerateRates if two of G, g+, g- coincide.
ClosedFormMoments closed_form_moments(const SpectralDensity& sd);
ClosedFormMoments closed_form_moments(const ParametricParams& p);

struct ValidationOptions {
  double tolerance = 1e-6;  // physics checks (absolute)
  int positivity_samples = 10000;
  AverageOptions average{};
};

struct ValidationReport {
  double normalization_residual = 0.0;
  double pi_at_zero = 0.0;
  double min_value = 0.0;  // over the log-grid scan
  double second_moment = 0.0;
  double mean_omega = 0.0;
  double mean_inv_omega = 0.0;
  double cauchy_schwartz_product = 0.0;
  struct Flags {
    bool normalization = false;
    bool pi_at_zero = false;
    bool non_negative = false;
    bool second_moment_finite = false;
    bool second_moment_matches_hint = true;
    bool mean_below_rms = false;
    bool cauchy_schwartz = false;
    bool all() const {
      return normalization && pi_at_zero && non_negative && second_moment_finite && second_moment_matches_hint &&
             mean_below_rms && cauchy_schwartz;
    }
  } passed;
};

// Never throws on physics failure; failing checks are flagged.
ValidationReport validate(const SpectralDensity& sd, const ValidationOptions& opt = {});

class ValidationError : public Error {
 public:
  ValidationError(const std::string& what, ValidationReport report)
      : Error(ErrorCode::ValidationFailure, what), report_(report) {}
  const ValidationReport& report() const { return report_; }

 private:
  ValidationReport report_;
};

}  // namespace dampo
