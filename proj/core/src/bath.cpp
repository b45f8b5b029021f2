#include "dampo/bath.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "dampo/parallel.hpp"

namespace dampo {

namespace {
constexpr double kPi = std::numbers::pi;
}

void OhmicBath::check() const {
  if (!(gamma > 0.0) || !(omega_c > 0.0) || !(m > 0.0))
    throw Error(ErrorCode::InvalidArgument, "Ohmic bath needs gamma > 0, omega_c > 0, m > 0");
}

double OhmicBath::J(double omega) const { return m * gamma * omega * std::exp(-omega / omega_c); }

double OhmicBath::kappa0() const { return 2.0 * gamma * omega_c / kPi; }

MemoryKernel ohmic_kernel(const OhmicBath& b, const std::vector<double>& times) {
  b.check();
  MemoryKernel k;
  k.times = times;
  k.kappa0 = b.kappa0();
  k.kappa.resize(times.size());
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (!(times[i] >= 0.0)) throw Error(ErrorCode::InvalidArgument, "kernel times must be >= 0");
    const double wt = b.omega_c * times[i];
    k.kappa[i] = k.kappa0 / (1.0 + wt * wt);
  }
  return k;
}

MemoryKernel kernel_from_density(const std::function<double(double)>& J, double m, double omega_max,
                                 const std::vector<double>& times, const KernelQuadOptions& opt) {
  if (!(m > 0.0) || !(omega_max > 0.0)) throw Error(ErrorCode::InvalidArgument, "need m > 0 and omega_max > 0");
  // integrability at 0: J(w)/w must not grow like 1/w
  const double w1 = 1e-8 * omega_max, w2 = 1e-6 * omega_max;
  const double j1 = J(w1), j2 = J(w2);
  if (j1 != 0.0 || j2 != 0.0) {
    const double slope = std::log(std::abs(j2) / std::abs(j1)) / std::log(w2 / w1);
    if (!std::isfinite(slope) || slope < 0.25)
      throw Error(ErrorCode::DivergentKernel, "J(w)/w is not integrable at w = 0 (local exponent " +
                                                  std::to_string(slope) + ")");
  }
  MemoryKernel k;
  k.times = times;
  k.kappa.assign(times.size(), 0.0);
  std::vector<char> ok(times.size(), 1);
  auto f = [&](double w) { return J(w) / w; };
  parallel_for(times.size(), [&](std::size_t i) {
    const double t = times[i];
    if (!(t >= 0.0)) throw Error(ErrorCode::InvalidArgument, "kernel times must be >= 0");
    const std::vector<double> br = quad::oscillatory_breaks(t, omega_max);
    const auto r = quad::integrate([&](double w) { return f(w) * std::cos(w * t); }, std::span<const double>(br),
                                   opt.quad);
    k.kappa[i] = 2.0 / (kPi * m) * r.value;
    ok[i] = r.converged;
  });
  for (std::size_t i = 0; i < times.size(); ++i)
    if (!ok[i])
      throw Error(ErrorCode::QuadratureNonConvergence, "memory kernel quadrature failed at t = " + std::to_string(times[i]));
  const auto r0 = quad::integrate(f, 0.0, omega_max, opt.quad);
  k.kappa0 = 2.0 / (kPi * m) * r0.value;
  return k;
}

MemoryKernel kernel_from_density(const SpectralFunction& J, double m, const std::vector<double>& times,
                                 const KernelQuadOptions& opt) {
  const auto& w = J.omega_grid;
  if (w.size() < 2 || J.J.size() != w.size()) throw Error(ErrorCode::InvalidArgument, "J table needs >= 2 rows");
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (w[i] < 0.0) throw Error(ErrorCode::NegativeFrequency, "J table has negative frequencies");
    if (i > 0 && !(w[i] > w[i - 1])) throw Error(ErrorCode::InvalidArgument, "J table frequencies must ascend");
  }
  if (w[0] == 0.0 && J.J[0] != 0.0) throw Error(ErrorCode::DivergentKernel, "J(0) != 0 makes J/w non-integrable");
  bool zero = std::all_of(J.J.begin(), J.J.end(), [](double v) { return v == 0.0; });
  if (zero) {
    MemoryKernel k;
    k.times = times;
    k.kappa.assign(times.size(), 0.0);
    return k;
  }
  MonotoneCubic interp(w, J.J);
  const double x0 = w[0], y0 = J.J[0];
  auto fn = [interp, x0, y0](double x) {
    if (x < x0) return x0 > 0.0 ? y0 * x / x0 : 0.0;
    return interp(x);
  };
  if (x0 > 0.0 && w.size() >= 2 && J.J[0] != 0.0 && J.J[1] != 0.0) {
    const double slope = std::log(std::abs(J.J[1] / J.J[0])) / std::log(w[1] / w[0]);
    if (slope < 0.25)
      throw Error(ErrorCode::DivergentKernel, "J(w)/w is not integrable at w = 0 (local exponent " +
                                                  std::to_string(slope) + ")");
  }
  // Interior nodes are not breakpoints; the oscillatory panels are fine enough
  // for a table with more than a few nodes per oscillation.
  return kernel_from_density(fn, m, w.back(), times, opt);
}

FrequencyReport frequency_constraints(const OhmicBath& b, double Omega0, std::optional<double> omega0) {
  FrequencyReport r;
  r.kappa0 = b.kappa0();
  r.Omega0_sq = Omega0 * Omega0;
  r.omega0_sq = omega0 ? *omega0 * *omega0 : r.Omega0_sq - r.kappa0;
  r.implied_Omega0_sq = r.omega0_sq + r.kappa0;
  r.omega0_nonnegative = omega0 ? *omega0 >= 0.0 : r.omega0_sq >= 0.0;
  r.Omega0_bound = r.Omega0_sq > r.kappa0;
  r.consistent = std::abs(r.implied_Omega0_sq - r.Omega0_sq) <= 1e-9 * std::max(1.0, r.Omega0_sq);
  return r;
}

double markov_damping(const MemoryKernel& k, const MarkovOptions& opt) {
  const auto& t = k.times;
  const auto& y = k.kappa;
  if (t.size() < 2 || y.size() != t.size()) throw Error(ErrorCode::InvalidArgument, "kernel needs >= 2 samples");
  for (std::size_t i = 1; i < t.size(); ++i)
    if (!(t[i] > t[i - 1])) throw Error(ErrorCode::InvalidArgument, "kernel times must ascend");
  double kmax = 0.0;
  for (double v : y) kmax = std::max(kmax, std::abs(v));
  if (kmax == 0.0) return 0.0;

  // exact integral of the natural cubic spline through the samples
  const CubicSpline sp(t, y);
  const auto r = quad::integrate([&](double x) { return sp(x); }, std::span<const double>(t), {1e-14, 1e-13, 100000});
  double total = r.value;
  if (opt.tail == TailModel::None) return total;

  const std::size_t n = t.size();
  const double T = t[n - 1], yT = y[n - 1];
  if (std::abs(yT) > opt.decay_fraction * kmax)
    throw Error(ErrorCode::NonDecayedKernel, "kappa(t_max) = " + std::to_string(yT) + " is " +
                                                 std::to_string(std::abs(yT) / kmax) + " of its peak");
  const double Ts = t[n - 2], ys = y[n - 2];
  if (yT == 0.0) return total;
  if (!(yT * ys > 0.0)) {
    if (std::abs(yT) < 1e-3 * kmax) return total;  // oscillating residue, tail negligible
    throw Error(ErrorCode::NonDecayedKernel, "kappa changes sign at the end of the window; no tail model applies");
  }
  if (opt.tail == TailModel::Lorentzian) {
    // kappa = A / (1 + B t^2) through the last two samples
    const double ratio = ys / yT;  // (1 + B T^2)/(1 + B Ts^2)
    const double B = (ratio - 1.0) / (T * T - ratio * Ts * Ts);
    if (!(B > 0.0)) throw Error(ErrorCode::NonDecayedKernel, "Lorentzian tail fit failed");
    const double A = yT * (1.0 + B * T * T);
    const double sb = std::sqrt(B);
    total += A / sb * (0.5 * kPi - std::atan(sb * T));
    return total;
  }
  // kappa ~ C t^-q
  const double q = std::log(ys / yT) / std::log(T / Ts);
  if (!(q > 1.0)) throw Error(ErrorCode::NonDecayedKernel, "kernel tail decays no faster than 1/t (q = " + std::to_string(q) + ")");
  total += yT * T / (q - 1.0);
  return total;
}

CouplingSpectrum coupling_from_J(const SpectralFunction& J, double m, double Omega0) {
  if (!(m > 0.0) || !(Omega0 > 0.0)) throw Error(ErrorCode::InvalidArgument, "need m > 0 and Omega0 > 0");
  if (J.J.size() != J.omega_grid.size()) throw Error(ErrorCode::InvalidArgument, "J table size mismatch");
  CouplingSpectrum V;
  V.omega_grid = J.omega_grid;
  V.v_values.resize(J.J.size());
  for (std::size_t i = 0; i < J.J.size(); ++i) {
    if (J.J[i] < 0.0) throw Error(ErrorCode::InvalidArgument, "J must be non-negative");
    V.v_values[i] = std::sqrt(2.0 * J.J[i] / (kPi * m * Omega0));
  }
  return V;
}

SpectralFunction J_from_coupling(const CouplingSpectrum& V, double m, double Omega0) {
  SpectralFunction J;
  J.omega_grid = V.omega_grid;
  J.J.resize(V.v_values.size());
  for (std::size_t i = 0; i < J.J.size(); ++i) J.J[i] = 0.5 * kPi * m * Omega0 * V.v_values[i] * V.v_values[i];
  return J;
}

double ohmic_v(const OhmicBath& b, double Omega0, double omega) {
  return std::sqrt(2.0 * b.J(omega) / (kPi * b.m * Omega0));
}

CouplingSpectrum ohmic_coupling(const OhmicBath& b, double Omega0, int points, double omega_max) {
  b.check();
  if (!(Omega0 > 0.0)) throw Error(ErrorCode::InvalidArgument, "Omega0 must be positive");
  const double wmax = omega_max > 0.0 ? omega_max : 45.0 * b.omega_c;
  return sample_coupling([&](double w) { return ohmic_v(b, Omega0, w); }, 1e-6 * b.omega_c, wmax, points);
}

}  // namespace dampo
