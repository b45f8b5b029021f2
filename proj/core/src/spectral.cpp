#include "dampo/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace dampo {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();

bool is_real(cplx z) { return std::abs(z.imag()) <= 1e-14 * std::max(1.0, std::abs(z)); }
}  // namespace

const char* to_string(DensityKind kind) {
  switch (kind) {
    case DensityKind::Parametric: return "Parametric";
    case DensityKind::FanoDerived: return "FanoDerived";
    case DensityKind::Tabulated: return "Tabulated";
  }
  return "Unknown";
}

void OscillatorParams::check() const {
  if (!(m > 0.0)) throw Error(ErrorCode::InvalidArgument, "mass must be positive");
  if (!(omega0 > 0.0)) throw Error(ErrorCode::InvalidArgument, "omega0 must be positive");
  if (!(Omega0 >= omega0)) throw Error(ErrorCode::InvalidArgument, "Omega0 must be >= omega0");
}

double SpectralDensity::operator()(double omega) const {
  if (omega < 0.0 || std::isnan(omega))
    throw Error(ErrorCode::NegativeFrequency, "density evaluated at omega = " + std::to_string(omega));
  switch (kind_) {
    case DensityKind::Parametric: {
      const double w2 = omega * omega;
      return pref_ * w2 / ((w2 + g2_) * (w2 * w2 + s1_ * w2 + s2_));
    }
    case DensityKind::Tabulated: return tabulated_value(omega);
    case DensityKind::FanoDerived: return eval_(omega);
  }
  return 0.0;
}

double SpectralDensity::tabulated_value(double omega) const {
  const auto& x = interp_.x();
  const auto& y = interp_.y();
  if (omega < x.front()) {
    const double r = omega / x.front();
    return y.front() * r * r;
  }
  if (omega > x.back()) return tail_c_ == 0.0 ? 0.0 : tail_c_ * std::pow(omega, -tail_q_);
  return std::max(0.0, interp_(omega));
}

SpectralDensity SpectralDensity::fano_derived(DensityTable nodes, std::function<double(double)> eval,
                                              std::vector<double> breaks, double scale, double support,
                                              std::optional<double> omega0_sq) {
  SpectralDensity sd;
  sd.kind_ = DensityKind::FanoDerived;
  sd.table_ = std::move(nodes);
  sd.eval_ = std::move(eval);
  sd.breaks_ = std::move(breaks);
  sd.scale_ = scale;
  sd.support_ = support;
  sd.tail_q_ = kInf;
  sd.hint_ = omega0_sq;
  return sd;
}

SpectralDensity make_parametric_density(double Gamma, cplx gp, cplx gm) {
  if (!(Gamma > 0.0) || !std::isfinite(Gamma))
    throw Error(ErrorCode::NonPhysicalPoles, "Gamma must be real and positive");
  const bool both_real = is_real(gp) && is_real(gm) && gp.real() > 0.0 && gm.real() > 0.0;
  const bool conj_pair = !is_real(gp) && std::abs(gp - std::conj(gm)) <= 1e-14 * std::abs(gp) && gp.real() > 0.0;
  if (!both_real && !conj_pair)
    throw Error(ErrorCode::NonPhysicalPoles,
                "gamma_plus/gamma_minus must be real positive or a conjugate pair with positive real part");
  if (both_real) {
    gp = gp.real();
    gm = gm.real();
  } else {
    gm = std::conj(gp);
  }

  SpectralDensity sd;
  sd.kind_ = DensityKind::Parametric;
  sd.parametric_ = ParametricParams{Gamma, gp, gm};
  const double K = ((gp + gm) * (gm + Gamma) * (Gamma + gp)).real();
  sd.pref_ = 2.0 * K / M_PI;
  sd.g2_ = Gamma * Gamma;
  sd.s1_ = (gp * gp + gm * gm).real();
  sd.s2_ = (gp * gp * gm * gm).real();
  sd.hint_ = (Gamma * (gp + gm) + gp * gm).real();
  sd.scale_ = std::max({Gamma, std::abs(gp), 1.0});
  sd.support_ = 30.0 * std::max({Gamma, std::abs(gp), std::abs(gm)});
  sd.tail_q_ = 4.0;
  sd.breaks_ = {Gamma, std::abs(gp), std::abs(gm)};
  std::sort(sd.breaks_.begin(), sd.breaks_.end());
  sd.breaks_.erase(std::unique(sd.breaks_.begin(), sd.breaks_.end()), sd.breaks_.end());

  const quad::Result norm = weighted_average_result(sd, [](double) { return 1.0; });
  if (!(std::abs(norm.value - 1.0) < 1e-9))
    throw Error(ErrorCode::NonPhysicalPoles, "parametric density does not normalize: residual " +
                                                 std::to_string(norm.value - 1.0));
  return sd;
}

SpectralDensity make_tabulated_density(std::vector<double> omega, std::vector<double> values, double p) {
  if (omega.size() != values.size() || omega.size() < 2)
    throw Error(ErrorCode::InvalidArgument, "tabulated density needs matching omega/value columns (>= 2 rows)");
  if (omega.front() < 0.0) throw Error(ErrorCode::NegativeFrequency, "tabulated grid has negative frequency");
  for (double v : values)
    if (!(v >= 0.0)) throw Error(ErrorCode::InvalidArgument, "tabulated density has a negative or NaN value");
  if (!(p > 1.0)) throw Error(ErrorCode::InvalidArgument, "tail exponent must exceed 1");

  SpectralDensity sd;
  sd.kind_ = DensityKind::Tabulated;
  sd.interp_ = MonotoneCubic(omega, values);
  sd.table_ = DensityTable{omega, values, p};
  sd.tail_q_ = p;
  sd.tail_c_ = (std::isinf(p) || values.back() == 0.0) ? 0.0 : values.back() * std::pow(omega.back(), p);
  sd.support_ = omega.back();
  sd.breaks_ = omega;
  const auto peak = std::max_element(values.begin(), values.end()) - values.begin();
  sd.scale_ = std::max(omega[static_cast<std::size_t>(peak)], omega.back() * 1e-6);
  if (sd.tail_c_ == 0.0) sd.tail_q_ = kInf;
  return sd;
}

SpectralDensity to_tabulated(const SpectralDensity& sd) {
  if (sd.kind() == DensityKind::Tabulated) return sd;
  if (sd.table()) return make_tabulated_density(sd.table()->omega_grid, sd.table()->values, sd.table()->tail_exponent);
  throw Error(ErrorCode::InvalidArgument, "density carries no node table");
}

double density_value(const SpectralDensity& sd, double omega) { return sd(omega); }

quad::Result weighted_average_result(const SpectralDensity& sd, const std::function<double(double)>& f,
                                     const AverageOptions& opt) {
  auto g = [&](double w) {
    const double p = sd(w);
    return p == 0.0 ? 0.0 : p * f(w);
  };
  if (sd.kind() == DensityKind::Parametric)
    return quad::integrate_to_infinity(g, 0.0, sd.scale(), opt.quad, std::span<const double>(sd.breakpoints()));

  std::vector<double> br{0.0};
  for (double b : sd.breakpoints())
    if (b > 0.0 && b < sd.support()) br.push_back(b);
  br.push_back(sd.support());
  quad::Result head = quad::integrate(g, std::span<const double>(br), opt.quad);
  if (std::isinf(sd.tail_exponent())) return head;
  quad::Result tail = quad::integrate_to_infinity(g, sd.support(), sd.support(), opt.quad);
  head.value += tail.value;
  head.error += tail.error;
  head.subdivisions += tail.subdivisions;
  head.evaluations += tail.evaluations;
  head.converged = head.converged && tail.converged;
  return head;
}

double weighted_average(const SpectralDensity& sd, const std::function<double(double)>& f,
                        const AverageOptions& opt) {
  const quad::Result r = weighted_average_result(sd, f, opt);
  if (!r.converged || !std::isfinite(r.value))
    throw Error(ErrorCode::QuadratureNonConvergence, "weighted average did not converge", r.error);
  return r.value;
}

ClosedFormMoments closed_form_moments(const ParametricParams& p) {
  const cplx G = p.Gamma, a = p.gamma_plus, b = p.gamma_minus;
  const double scale = std::max({std::abs(G), std::abs(a), std::abs(b)});
  const double eps = 1e-12 * scale;
  if (std::abs(G - a) < eps || std::abs(a - b) < eps || std::abs(b - G) < eps)
    throw Error(ErrorCode::DegenerateRates, "closed forms need pairwise distinct Gamma, gamma_plus, gamma_minus");
  const cplx den = (G - a) * (a - b) * (b - G);
  const cplx l_ba = std::log(b / a), l_Gb = std::log(G / b), l_aG = std::log(a / G);
  const cplx G2 = G * G, a2 = a * a, b2 = b * b;
  const cplx mw = (2.0 / M_PI) * (a2 * b2 * l_ba + b2 * G2 * l_Gb + G2 * a2 * l_aG) / den;
  const cplx mi = (2.0 / M_PI) * (G2 * l_ba + a2 * l_Gb + b2 * l_aG) / den;
  ClosedFormMoments m;
  m.mean_omega = mw.real();
  m.mean_inv_omega = mi.real();
  m.mean_inv_omega_sq = ((G + a + b) / (G * a * b)).real();
  m.omega0_sq = (G * (a + b) + a * b).real();
  m.imag_residue = std::max(std::abs(mw.imag()) / std::max(1.0, std::abs(mw)),
                            std::abs(mi.imag()) / std::max(1.0, std::abs(mi)));
  return m;
}

ClosedFormMoments closed_form_moments(const SpectralDensity& sd) {
  if (sd.kind() != DensityKind::Parametric || !sd.parametric())
    throw Error(ErrorCode::InvalidArgument, "closed forms exist only for the parametric density");
  return closed_form_moments(*sd.parametric());
}

ValidationReport validate(const SpectralDensity& sd, const ValidationOptions& opt) {
  ValidationReport r;
  const double tol = opt.tolerance;
  auto avg = [&](const std::function<double(double)>& f, double& out) {
    try {
      const quad::Result q = weighted_average_result(sd, f, opt.average);
      out = q.value;
      return q.converged && std::isfinite(q.value);
    } catch (const std::exception&) {
      out = std::numeric_limits<double>::quiet_NaN();
      return false;
    }
  };

  double norm = 0.0;
  const bool norm_ok = avg([](double) { return 1.0; }, norm);
  r.normalization_residual = std::abs(norm - 1.0);
  r.passed.normalization = norm_ok && r.normalization_residual <= tol;

  r.pi_at_zero = sd(0.0);
  r.passed.pi_at_zero = std::abs(r.pi_at_zero) <= tol;

  // log-grid scan for negative values
  double first = sd.scale();
  for (double b : sd.breakpoints())
    if (b > 0.0) {
      first = std::min(first, b);
      break;
    }
  const double lo = first * 1e-4;
  const double hi = std::max(sd.scale(), sd.support()) * 1e3;
  r.min_value = sd(0.0);
  const int n = std::max(2, opt.positivity_samples);
  for (int i = 0; i < n; ++i) {
    const double w = lo * std::pow(hi / lo, static_cast<double>(i) / (n - 1));
    r.min_value = std::min(r.min_value, sd(w));
  }
  r.passed.non_negative = r.min_value >= -tol;

  const bool m2_ok = sd.tail_exponent() > 3.0 && avg([](double w) { return w * w; }, r.second_moment);
  if (sd.tail_exponent() <= 3.0) r.second_moment = std::numeric_limits<double>::infinity();
  r.passed.second_moment_finite = m2_ok;
  if (m2_ok && sd.omega0_sq_hint())
    r.passed.second_moment_matches_hint = std::abs(r.second_moment - *sd.omega0_sq_hint()) <= tol * std::max(1.0, *sd.omega0_sq_hint());

  const bool m1_ok = avg([](double w) { return w; }, r.mean_omega);
  const bool mi_ok = avg([](double w) { return 1.0 / w; }, r.mean_inv_omega);
  r.cauchy_schwartz_product = r.mean_omega * r.mean_inv_omega;
  r.passed.mean_below_rms = m1_ok && m2_ok && r.mean_omega * r.mean_omega <= r.second_moment * (1.0 + tol);
  r.passed.cauchy_schwartz = m1_ok && mi_ok && r.cauchy_schwartz_product >= 1.0 - tol;
  return r;
}

}  // namespace dampo
