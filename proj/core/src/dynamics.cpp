#include "dampo/dynamics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

#include <Eigen/Dense>

#include "dampo/parallel.hpp"

namespace dampo {

bool EvolutionSeries::all_converged() const {
  return std::all_of(converged.begin(), converged.end(), [](bool b) { return b; });
}

const char* to_string(DampingClass c) {
  return c == DampingClass::Underdamped ? "Underdamped" : "OverOrCritical";
}

EvolutionSeries kernels(const SpectralDensity& sd, const std::vector<double>& times, const KernelOptions& opt) {
  for (double t : times)
    if (!(t >= 0.0)) throw Error(ErrorCode::InvalidArgument, "kernel times must be >= 0");
  const std::size_t n = times.size();
  EvolutionSeries out;
  out.times = times;
  out.c.assign(n, 0.0);
  out.s.assign(n, 0.0);
  out.d.assign(n, 0.0);
  out.error.assign(n, 0.0);
  std::vector<char> ok(n, 1);
  const double q = sd.tail_exponent();
  const bool has_tail = std::isfinite(q);

  parallel_for(n, [&](std::size_t i) {
    const double t = times[i];
    if (t == 0.0) {
      const quad::Result r = weighted_average_result(sd, [](double) { return 1.0; });
      out.c[i] = r.value;
      out.error[i] = r.error;
      ok[i] = r.converged;
      return;
    }
    const double W = has_tail ? std::max(sd.support(), opt.tail_cycles / t) : sd.support();
    const std::vector<double> br = quad::oscillatory_breaks(t, W, sd.breakpoints());
    auto f = [&](double w) -> std::array<double, 3> {
      const double p = sd(w);
      if (p == 0.0) return {0.0, 0.0, 0.0};
      const double sn = std::sin(w * t), cs = std::cos(w * t);
      return {p * cs, p * sn / w, p * w * sn};
    };
    const auto r = quad::integrate(f, std::span<const double>(br), opt.quad);
    double c = r.value[0], s = r.value[1], d = r.value[2];
    if (has_tail) {
      const double C = sd(W) * std::pow(W, q);
      c += quad::algebraic_fourier_tail(C, q, W, t).real();
      s += quad::algebraic_fourier_tail(C, q + 1.0, W, t).imag();
      d += quad::algebraic_fourier_tail(C, q - 1.0, W, t).imag();
    }
    out.c[i] = c;
    out.s[i] = s;
    out.d[i] = d;
    out.error[i] = r.error;
    ok[i] = r.converged;
  });
  out.converged.assign(ok.begin(), ok.end());
  return out;
}

EvolutionSeries closed_form_kernels(const ParametricParams& p, const std::vector<double>& times) {
  const cplx G = p.Gamma, a = p.gamma_plus, b = p.gamma_minus;
  const double scale = std::max({std::abs(G), std::abs(a), std::abs(b)});
  const double eps = 1e-12 * scale;
  if (std::abs(G - a) < eps || std::abs(a - b) < eps || std::abs(b - G) < eps)
    throw Error(ErrorCode::DegenerateRates, "closed forms need pairwise distinct Gamma, gamma_plus, gamma_minus");
  const std::array<cplx, 3> rate{G, a, b};
  const std::array<cplx, 3> amp{G * (a + b) / ((G - a) * (b - G)), a * (G + b) / ((G - a) * (a - b)),
                                b * (G + a) / ((b - G) * (a - b))};
  EvolutionSeries out;
  out.times = times;
  const std::size_t n = times.size();
  out.c.resize(n);
  out.s.resize(n);
  out.d.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double t = times[i];
    if (!(t >= 0.0)) throw Error(ErrorCode::InvalidArgument, "kernel times must be >= 0");
    cplx c = 0.0, s = 0.0, d = 0.0;
    for (std::size_t k = 0; k < 3; ++k) {
      const cplx e = std::exp(-rate[k] * t);
      c += amp[k] * e;
      d += amp[k] * rate[k] * e;
      // 1 - e^{-rt} without cancellation at small t
      const double a = rate[k].real() * t, b = rate[k].imag() * t;
      const double hb = std::sin(0.5 * b);
      const cplx one_minus = -std::expm1(-a) + std::exp(-a) * cplx(2.0 * hb * hb, std::sin(b));
      s += amp[k] * one_minus / rate[k];
    }
    out.c[i] = c.real();
    out.s[i] = s.real();
    out.d[i] = d.real();
  }
  return out;
}

EvolutionSeries closed_form_kernels(const SpectralDensity& sd, const std::vector<double>& times) {
  if (sd.kind() != DensityKind::Parametric || !sd.parametric())
    throw Error(ErrorCode::InvalidArgument, "closed-form kernels exist only for the parametric density");
  return closed_form_kernels(*sd.parametric(), times);
}

EvolutionSeries evolve_means(double x0, double p0, double m, EvolutionSeries series) {
  const std::size_t n = series.times.size();
  if (series.c.size() != n || series.s.size() != n || series.d.size() != n)
    throw Error(ErrorCode::InvalidArgument, "evolve_means needs c, s and d on every time point");
  series.mean_x.resize(n);
  series.mean_p.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    series.mean_x[i] = series.c[i] * x0 + series.s[i] * p0 / m;
    series.mean_p[i] = series.c[i] * p0 - m * series.d[i] * x0;
  }
  return series;
}

DampingReport damping_report(const EvolutionSeries& series, const ClassifyOptions& opt) {
  const auto& t = series.times;
  const auto& d = series.d;
  if (t.size() < 2 || d.size() != t.size() || series.c.size() != t.size())
    throw Error(ErrorCode::InvalidArgument, "classification needs a series with c and d");
  const double horizon = opt.horizon > 0.0 ? opt.horizon : t.back();
  double dmax = 0.0;
  for (std::size_t i = 0; i < t.size() && t[i] <= horizon; ++i) dmax = std::max(dmax, std::abs(d[i]));
  const double noise = 1e-10 * dmax;

  DampingReport rep;
  rep.horizon = horizon;
  int last_sign = 0;
  std::size_t last = 0;
  for (std::size_t i = 0; i < t.size() && t[i] <= horizon; ++i) {
    last = i;
    if (t[i] <= 0.0 || std::abs(d[i]) <= noise) continue;
    const int sg = d[i] > 0.0 ? 1 : -1;
    if (last_sign != 0 && sg != last_sign && !rep.stationary_time) {
      std::size_t j = i - 1;
      while (j > 0 && std::abs(d[j]) <= noise) --j;
      const double tz = t[j] + (t[i] - t[j]) * d[j] / (d[j] - d[i]);
      rep.stationary_time = tz;
    }
    last_sign = sg;
  }
  rep.c_at_horizon = series.c[last];
  if (rep.stationary_time) {
    rep.strict = DampingClass::Underdamped;
  } else if (std::abs(rep.c_at_horizon) < opt.decay_threshold || opt.allow_undecayed) {
    rep.strict = DampingClass::OverOrCritical;
  } else {
    throw Error(ErrorCode::InconclusiveHorizon,
                "no stationary point of c(t) up to t = " + std::to_string(t[last]) +
                    " and |c| = " + std::to_string(std::abs(rep.c_at_horizon)) + " has not decayed");
  }
  return rep;
}

DampingClass classify_damping(const EvolutionSeries& series, const ClassifyOptions& opt) {
  return damping_report(series, opt).strict;
}

double classical_horizon(const ParametricParams& p) {
  return 5.0 / std::min(p.gamma_plus.real(), p.gamma_minus.real());
}

DampingReport damping_report(const SpectralDensity& sd, const ClassifyOptions& opt) {
  if (sd.kind() != DensityKind::Parametric || !sd.parametric())
    throw Error(ErrorCode::InvalidArgument, "automatic horizon needs a parametric density; supply a series instead");
  const ParametricParams& p = *sd.parametric();
  const double min_rate = std::min({p.Gamma, p.gamma_plus.real(), p.gamma_minus.real()});
  const double max_rate = std::max({p.Gamma, std::abs(p.gamma_plus), std::abs(p.gamma_minus)});
  const double horizon = opt.horizon > 0.0 ? opt.horizon : 10.0 / min_rate;
  const int points = static_cast<int>(std::clamp(horizon * max_rate * 40.0, 2001.0, 2.0e6));
  const EvolutionSeries series = closed_form_kernels(p, linear_grid(0.0, horizon, points));
  ClassifyOptions o = opt;
  o.horizon = horizon;
  DampingReport rep = damping_report(series, o);
  const bool complex_pair = p.gamma_plus.imag() != 0.0;
  rep.classical = complex_pair ? DampingClass::Underdamped : DampingClass::OverOrCritical;
  return rep;
}

double short_time_frequency(const EvolutionSeries& series) {
  const auto& t = series.times;
  const auto& c = series.c;
  std::size_t first = 0;
  while (first < t.size() && !(t[first] > 0.0)) ++first;
  if (first == t.size()) throw Error(ErrorCode::InsufficientSamples, "no positive time samples");
  const double est = -2.0 * (c[first] - 1.0) / (t[first] * t[first]);
  if (!(est > 0.0)) throw Error(ErrorCode::InsufficientSamples, "c(t) does not decrease from 1 at the first sample");
  const double window = 0.01 / std::sqrt(est);
  std::vector<std::size_t> idx;
  for (std::size_t i = first; i < t.size(); ++i)
    if (t[i] > 0.0 && t[i] <= window * (1.0 + 1e-12)) idx.push_back(i);
  if (idx.size() < 5)
    throw Error(ErrorCode::InsufficientSamples, "need at least 5 samples in (0, " + std::to_string(window) +
                                                    "], found " + std::to_string(idx.size()));
  Eigen::MatrixXd A(static_cast<Eigen::Index>(idx.size()), 3);
  Eigen::VectorXd y(static_cast<Eigen::Index>(idx.size()));
  for (std::size_t k = 0; k < idx.size(); ++k) {
    const double tk = t[idx[k]];
    const auto r = static_cast<Eigen::Index>(k);
    A(r, 0) = 1.0;
    A(r, 1) = tk / window;
    A(r, 2) = (tk / window) * (tk / window);
    y(r) = -2.0 * (c[idx[k]] - 1.0) / (tk * tk);
  }
  const Eigen::VectorXd coef = A.colPivHouseholderQr().solve(y);
  return coef(0);
}

GaussianState steady_state(const SpectralDensity& sd, double m, double beta, const AverageOptions& opt) {
  return thermal_state(sd, m, beta, opt);
}

std::pair<double, double> damped_oscillator(double gamma, double omega0, double x0, double v0, double t) {
  const cplx disc = std::sqrt(cplx(gamma * gamma / 4.0 - omega0 * omega0, 0.0));
  const cplx l1 = -gamma / 2.0 + disc, l2 = -gamma / 2.0 - disc;
  if (std::abs(l1 - l2) < 1e-9 * std::max(1.0, std::abs(l1))) {
    const double k = gamma / 2.0;
    const double e = std::exp(-k * t);
    const double x = (x0 + (v0 + k * x0) * t) * e;
    const double v = (v0 + k * x0) * e - k * x;
    return {x, v};
  }
  const cplx A = (v0 - l2 * x0) / (l1 - l2);
  const cplx B = x0 - A;
  const cplx e1 = std::exp(l1 * t), e2 = std::exp(l2 * t);
  return {(A * e1 + B * e2).real(), (A * l1 * e1 + B * l2 * e2).real()};
}

std::vector<double> classical_comparison(const ParametricParams& p, const std::vector<double>& times) {
  const double gamma = (p.gamma_plus + p.gamma_minus).real();
  const double w0sq = (p.gamma_plus * p.gamma_minus).real();
  std::vector<double> x(times.size());
  for (std::size_t i = 0; i < times.size(); ++i) x[i] = damped_oscillator(gamma, std::sqrt(w0sq), 1.0, 0.0, times[i]).first;
  return x;
}

std::vector<double> linear_grid(double start, double stop, int points) {
  if (points < 1) throw Error(ErrorCode::InvalidArgument, "grid needs at least one point");
  if (points == 1) return {start};
  std::vector<double> g(static_cast<std::size_t>(points));
  for (int i = 0; i < points; ++i) g[static_cast<std::size_t>(i)] = start + (stop - start) * i / (points - 1);
  g.back() = stop;
  return g;
}

std::vector<double> log_grid(double start, double stop, int points) {
  if (!(start > 0.0) || !(stop > start)) throw Error(ErrorCode::InvalidArgument, "log grid needs 0 < start < stop");
  if (points < 2) return {start};
  std::vector<double> g(static_cast<std::size_t>(points));
  const double r = std::log(stop / start);
  for (int i = 0; i < points; ++i) g[static_cast<std::size_t>(i)] = start * std::exp(r * i / (points - 1));
  g.back() = stop;
  return g;
}

}  // namespace dampo
