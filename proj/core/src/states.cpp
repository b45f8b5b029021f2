#include "dampo/states.hpp"

#include <cmath>
#include <string>
#include <vector>

namespace dampo {

double thermal_weight(double beta, double omega) {
  if (std::isinf(beta)) return 1.0;
  const double x = beta * omega;
  if (x == 0.0) return std::numeric_limits<double>::infinity();
  return 1.0 + 2.0 / std::expm1(x);
}

double bose_occupation(double beta, double omega) {
  if (std::isinf(beta)) return 0.0;
  return 1.0 / std::expm1(beta * omega);
}

GaussianState vacuum_state(double m, double Omega0) { return uncoupled_thermal_state(m, Omega0, kZeroTemperature); }

GaussianState uncoupled_thermal_state(double m, double Omega0, double beta) {
  const double w = thermal_weight(beta, Omega0);
  GaussianState s;
  s.var_x = w / (2.0 * m * Omega0);
  s.var_p = m * Omega0 * w / 2.0;
  return s;
}

namespace {

void check_beta(double beta) {
  if (!(beta > 0.0)) throw Error(ErrorCode::InvalidArgument, "beta must be positive (or infinite)");
}

// pi(w)/w^2 must stay bounded as w -> 0 for the coth-weighted position moment
void check_low_frequency(const SpectralDensity& sd) {
  const double s = sd.scale();
  const double w1 = 1e-7 * s, w2 = 1e-5 * s;
  const double r1 = sd(w1) / (w1 * w1), r2 = sd(w2) / (w2 * w2);
  if (r1 > 10.0 * r2 + 1e-300)
    throw Error(ErrorCode::DivergentMoment, "<<coth(beta w/2)/w>> diverges: pi(w) vanishes slower than w^2 at 0");
}

double moment(const SpectralDensity& sd, const std::function<double(double)>& f, const AverageOptions& opt,
              const char* what) {
  const quad::Result r = weighted_average_result(sd, f, opt);
  if (!std::isfinite(r.value)) throw Error(ErrorCode::DivergentMoment, std::string(what) + " is not finite");
  if (!r.converged) throw Error(ErrorCode::QuadratureNonConvergence, what, r.error);
  return r.value;
}

}  // namespace

GaussianState ground_state(const SpectralDensity& sd, double m, const AverageOptions& opt) {
  if (!(m > 0.0)) throw Error(ErrorCode::InvalidArgument, "mass must be positive");
  GaussianState s;
  s.var_x = moment(sd, [](double w) { return 1.0 / w; }, opt, "<<1/w>>") / (2.0 * m);
  s.var_p = m * moment(sd, [](double w) { return w; }, opt, "<<w>>") / 2.0;
  return s;
}

GaussianState thermal_state(const SpectralDensity& sd, double m, double beta, const AverageOptions& opt) {
  check_beta(beta);
  if (std::isinf(beta)) return ground_state(sd, m, opt);
  if (!(m > 0.0)) throw Error(ErrorCode::InvalidArgument, "mass must be positive");
  check_low_frequency(sd);
  GaussianState s;
  s.var_x = moment(sd, [beta](double w) { return thermal_weight(beta, w) / w; }, opt, "<<coth/w>>") / (2.0 * m);
  s.var_p = m * moment(sd, [beta](double w) { return w * thermal_weight(beta, w); }, opt, "<<w coth>>") / 2.0;
  return s;
}

double oscillator_energy(const GaussianState& s, double m, double f0) {
  const double p2 = s.var_p + s.mean_p * s.mean_p;
  const double x2 = s.var_x + s.mean_x * s.mean_x;
  return p2 / (2.0 * m) + m * f0 * f0 * x2 / 2.0;
}

DiagonalForm diagonal_form(const GaussianState& s, double m, bool global_pure) {
  const double prod = s.var_x * s.var_p;
  if (!(s.var_x > 0.0) || !(s.var_p > 0.0) || prod < 0.25 - 1e-10)
    throw Error(ErrorCode::NonPhysicalState,
                "var_x var_p = " + std::to_string(prod) + " violates the uncertainty bound 1/4");
  DiagonalForm d;
  d.omega_diag = std::sqrt(s.var_p / (m * m * s.var_x));
  d.n_bar_c = std::max(0.0, (std::sqrt(4.0 * prod) - 1.0) / 2.0);
  const double n = d.n_bar_c;
  d.T_eff = n > 0.0 ? d.omega_diag / std::log1p(1.0 / n) : 0.0;
  d.entropy = n > 0.0 ? (n + 1.0) * std::log1p(n) - n * std::log(n) : 0.0;
  if (global_pure) d.mutual_information = 2.0 * d.entropy;
  return d;
}

cplx characteristic_function_complex(const GaussianState& s, double m, double Omega0, cplx xi) {
  const double vx = m * Omega0 * s.var_x;  // dimensionless quadratures
  const double vp = s.var_p / (m * Omega0);
  const double xr = xi.real(), xim = xi.imag();
  const double expo = -(vp * xr * xr + vx * xim * xim - 2.0 * s.cov_xp * xr * xim);
  const double X = s.mean_x * std::sqrt(m * Omega0), P = s.mean_p / std::sqrt(m * Omega0);
  const double phase = std::sqrt(2.0) * (xim * X - xr * P);
  return std::exp(expo) * cplx(std::cos(phase), std::sin(phase));
}

double characteristic_function(const GaussianState& s, double m, double Omega0, cplx xi) {
  return characteristic_function_complex(s, m, Omega0, xi).real();
}

namespace {

// Gaussian moments of operators labelled 1 (a^dagger) or 0 (a): sum over
// partitions into centred pairs and singletons (means).
cplx isserlis(std::vector<int>& ops, cplx mean_a, cplx pair_dd, cplx pair_aa, double pair_da) {
  if (ops.empty()) return 1.0;
  const int first = ops.front();
  std::vector<int> rest(ops.begin() + 1, ops.end());
  const cplx single = first == 1 ? std::conj(mean_a) : mean_a;
  cplx total = single * isserlis(rest, mean_a, pair_dd, pair_aa, pair_da);
  for (std::size_t j = 0; j < rest.size(); ++j) {
    const int other = rest[j];
    cplx pair;
    if (first == 1 && other == 1) pair = pair_dd;
    else if (first == 0 && other == 0) pair = pair_aa;
    else pair = pair_da;
    std::vector<int> remaining;
    for (std::size_t k = 0; k < rest.size(); ++k)
      if (k != j) remaining.push_back(rest[k]);
    total += pair * isserlis(remaining, mean_a, pair_dd, pair_aa, pair_da);
  }
  return total;
}

}  // namespace

cplx symmetric_moment_complex(const GaussianState& s, double m, double Omega0, int p, int q) {
  if (p < 0 || q < 0 || p + q > 4)
    throw Error(ErrorCode::UnsupportedOrder, "symmetric moments are implemented up to total order 4");
  const double vx = m * Omega0 * s.var_x;
  const double vp = s.var_p / (m * Omega0);
  const double c = s.cov_xp;
  const cplx mean_a = cplx(s.mean_x * std::sqrt(m * Omega0), s.mean_p / std::sqrt(m * Omega0)) / std::sqrt(2.0);
  const cplx pair_aa = cplx(vx - vp, 2.0 * c) / 2.0;
  const cplx pair_dd = std::conj(pair_aa);
  const double pair_da = (vx + vp) / 2.0;
  std::vector<int> ops;
  for (int i = 0; i < p; ++i) ops.push_back(1);
  for (int i = 0; i < q; ++i) ops.push_back(0);
  return isserlis(ops, mean_a, pair_dd, pair_aa, pair_da);
}

double symmetric_moment(const GaussianState& s, double m, double Omega0, int p, int q) {
  return symmetric_moment_complex(s, m, Omega0, p, q).real();
}

double mean_occupation(const GaussianState& s, double m, double Omega0) {
  return symmetric_moment(s, m, Omega0, 1, 1) - 0.5;
}

}  // namespace dampo
