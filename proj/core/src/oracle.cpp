#include "dampo/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include <Eigen/Eigenvalues>
#include <boost/math/tools/toms748_solve.hpp>

#include "dampo/parallel.hpp"

namespace dampo {

void DiscreteBath::check() const {
  if (n_modes < 0 || omegas.size() != static_cast<std::size_t>(n_modes) || couplings.size() != omegas.size())
    throw Error(ErrorCode::InvalidArgument, "discrete bath sizes disagree");
  if (!(m > 0.0) || !(Omega0 > 0.0)) throw Error(ErrorCode::InvalidArgument, "need m > 0 and Omega0 > 0");
  for (double w : omegas)
    if (!(w > 0.0)) throw Error(ErrorCode::InvalidArgument, "bath frequencies must be positive");
}

double DiscreteBath::positivity_sum() const {
  double s = 0.0;
  for (std::size_t i = 0; i < omegas.size(); ++i) s += couplings[i] * couplings[i] / omegas[i];
  return s;
}

DiscreteBath discretize(const std::function<double(double)>& v, double Omega0, double m, int n_modes,
                        double omega_max) {
  if (n_modes < 2) throw Error(ErrorCode::InvalidArgument, "need at least 2 bath modes");
  if (!(omega_max > 0.0)) throw Error(ErrorCode::InvalidArgument, "omega_max must be positive");
  DiscreteBath b;
  b.n_modes = n_modes;
  b.m = m;
  b.Omega0 = Omega0;
  quad::gauss_legendre(n_modes, 0.0, omega_max, b.omegas, b.weights);
  b.couplings.resize(b.omegas.size());
  for (std::size_t i = 0; i < b.omegas.size(); ++i) b.couplings[i] = v(b.omegas[i]) * std::sqrt(b.weights[i]);
  b.check();
  const double sum = b.positivity_sum();
  if (!(Omega0 > sum))
    throw Error(ErrorCode::PositivityViolation,
                "discrete positivity fails: sum V^2/w = " + std::to_string(sum) + " >= Omega0", sum - Omega0);
  return b;
}

DiscreteBath discretize(const CouplingSpectrum& V, double Omega0, double m, int n_modes, double omega_max) {
  const Coupling c(V);
  return discretize([&](double w) { return c.v(w); }, Omega0, m, n_modes, omega_max);
}

DiscreteBath discretize(const OhmicBath& b, double Omega0, int n_modes, double omega_max) {
  b.check();
  return discretize([&](double w) { return ohmic_v(b, Omega0, w); }, Omega0, b.m, n_modes, omega_max);
}

namespace {

Eigen::MatrixXd dynamical_matrix(const DiscreteBath& b, Eigen::VectorXd& nu) {
  b.check();
  const Eigen::Index n = b.n_modes + 1;
  nu.resize(n);
  nu(0) = b.Omega0;
  for (Eigen::Index i = 1; i < n; ++i) nu(i) = b.omegas[static_cast<std::size_t>(i - 1)];
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) A(i, i) = nu(i) * nu(i);
  for (Eigen::Index i = 1; i < n; ++i) {
    const double v = b.couplings[static_cast<std::size_t>(i - 1)] * std::sqrt(nu(0) * nu(i));
    A(0, i) = v;
    A(i, 0) = v;
  }
  return A;
}

double coth_half(double beta, double w) { return std::isinf(beta) ? 1.0 : 1.0 / std::tanh(0.5 * beta * w); }

EvolutionSeries spectrum_kernels(const Eigen::VectorXd& W, const Eigen::VectorXd& w, const std::vector<double>& times) {
  EvolutionSeries out;
  out.times = times;
  const std::size_t n = times.size();
  out.c.assign(n, 0.0);
  out.s.assign(n, 0.0);
  out.d.assign(n, 0.0);
  parallel_for(n, [&](std::size_t i) {
    const double t = times[i];
    double c = 0.0, s = 0.0, d = 0.0;
    for (Eigen::Index k = 0; k < W.size(); ++k) {
      const double sn = std::sin(W(k) * t);
      c += w(k) * std::cos(W(k) * t);
      s += w(k) * sn / W(k);
      d += w(k) * W(k) * sn;
    }
    out.c[i] = c;
    out.s[i] = s;
    out.d[i] = d;
  });
  return out;
}

double spectrum_recurrence(const Eigen::VectorXd& W, const Eigen::VectorXd& w) {
  const Eigen::Index n = W.size();
  if (n < 2) return std::numeric_limits<double>::infinity();
  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) order[static_cast<std::size_t>(i)] = i;
  std::sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) { return W(a) < W(b); });
  const double total = w.sum();
  double cum = 0.0, gap = 0.0;
  for (std::size_t i = 0; i + 1 < order.size(); ++i) {
    cum += w(order[i]);
    const double frac = cum / total;
    if (frac >= 0.01 && frac <= 0.99) gap = std::max(gap, W(order[i + 1]) - W(order[i]));
  }
  if (gap == 0.0) {
    for (std::size_t i = 0; i + 1 < order.size(); ++i) gap = std::max(gap, W(order[i + 1]) - W(order[i]));
  }
  return 2.0 * std::numbers::pi / gap;
}

// Root of the secular function f(lam) = lam - a0 - sum z_j^2/(lam - d_j),
// written as lam = d[o] + delta so that lam - d_j = (d[o] - d_j) + delta keeps
// full relative accuracy near the pole at d[o].
struct Secular {
  double a0;
  std::vector<double> w, d, z2;  // bath frequency, its square, squared arrow entries

  double diff(std::size_t o, std::size_t j) const { return (w[o] - w[j]) * (w[o] + w[j]); }

  double f(std::size_t o, double delta) const {
    double s = d[o] - a0 + delta;
    for (std::size_t j = 0; j < d.size(); ++j) s -= z2[j] / (diff(o, j) + delta);
    return s;
  }
  double fprime(std::size_t o, double delta) const {
    double s = 1.0;
    for (std::size_t j = 0; j < d.size(); ++j) {
      const double q = diff(o, j) + delta;
      s += z2[j] / (q * q);
    }
    return s;
  }
  // f increases on (lo, hi), with the root between them
  double solve(std::size_t o, double lo, double hi) const {
    auto g = [&](double x) { return f(o, x); };
    double flo = g(lo), fhi = g(hi);
    if (flo >= 0.0) return lo;
    if (fhi <= 0.0) return hi;
    std::uintmax_t iters = 200;
    const auto r = boost::math::tools::toms748_solve(g, lo, hi, flo, fhi, boost::math::tools::eps_tolerance<double>(52),
                                                     iters);
    return 0.5 * (r.first + r.second);
  }
};

}  // namespace

EvolutionSeries OscillatorSpectrum::kernels(const std::vector<double>& times) const {
  return spectrum_kernels(frequencies, weights, times);
}

OscillatorSpectrum oscillator_spectrum(const DiscreteBath& b) {
  b.check();
  // merge coincident bath frequencies and drop uncoupled ones; neither carries oscillator weight
  std::vector<std::size_t> order(b.omegas.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) { return b.omegas[i] < b.omegas[j]; });
  Secular sec;
  sec.a0 = b.Omega0 * b.Omega0;
  double zsum = 0.0, zmax = 0.0;
  for (std::size_t i : order) {
    const double w = b.omegas[i];
    const double z2 = b.Omega0 * w * b.couplings[i] * b.couplings[i];
    if (z2 == 0.0) continue;
    if (!sec.w.empty() && sec.w.back() == w) {
      sec.z2.back() += z2;
    } else {
      sec.w.push_back(w);
      sec.d.push_back(w * w);
      sec.z2.push_back(z2);
    }
  }
  OscillatorSpectrum out;
  const std::size_t n = sec.d.size();
  if (n == 0) {
    out.frequencies = Eigen::VectorXd::Constant(1, b.Omega0);
    out.weights = Eigen::VectorXd::Ones(1);
    return out;
  }
  const double fzero = -sec.a0;
  double s0 = 0.0;
  for (std::size_t j = 0; j < n; ++j) s0 += sec.z2[j] / sec.d[j];
  if (!(fzero + s0 < 0.0))
    throw Error(ErrorCode::PositivityViolation, "lowest normal-mode frequency squared is not positive", fzero + s0);
  for (double z2 : sec.z2) {
    zsum += std::sqrt(z2);
    zmax = std::max(zmax, std::sqrt(z2));
  }
  // roots closer to a pole than this carry weight below ~1e-28 and are pinned there
  constexpr double kOffset = 1e-14;
  std::vector<double> lam(n + 1), wt(n + 1);
  parallel_for(n + 1, [&](std::size_t k) {
    std::size_t o;
    double delta;
    if (k == 0) {
      o = 0;
      const double lower = std::min(sec.a0 - zsum, sec.d[0] - zmax) - 1.0;
      delta = sec.solve(o, lower - sec.d[0], -kOffset * sec.d[0]);
    } else if (k == n) {
      o = n - 1;
      const double upper = std::max(sec.a0 + zsum, sec.d[n - 1] + zmax) + 1.0;
      delta = sec.solve(o, kOffset * sec.d[n - 1], upper - sec.d[n - 1]);
    } else {
      const double gap = sec.diff(k, k - 1);
      if (sec.f(k - 1, 0.5 * gap) > 0.0) {
        o = k - 1;
        delta = sec.solve(o, kOffset * gap, 0.5 * gap);
      } else {
        o = k;
        delta = sec.solve(o, -0.5 * gap, -kOffset * gap);
      }
    }
    lam[k] = sec.d[o] + delta;
    wt[k] = 1.0 / sec.fprime(o, delta);
  });
  out.frequencies.resize(static_cast<Eigen::Index>(n + 1));
  out.weights.resize(static_cast<Eigen::Index>(n + 1));
  for (std::size_t k = 0; k <= n; ++k) {
    out.frequencies(static_cast<Eigen::Index>(k)) = std::sqrt(lam[k]);
    out.weights(static_cast<Eigen::Index>(k)) = wt[k];
  }
  return out;
}

Eigen::VectorXd dynamical_eigenvalues(const DiscreteBath& b) {
  Eigen::VectorXd nu;
  const Eigen::MatrixXd A = dynamical_matrix(b, nu);
  return Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(A, Eigen::EigenvaluesOnly).eigenvalues();
}

NormalModes::NormalModes(const DiscreteBath& b) : bath_(b) {
  const Eigen::MatrixXd A = dynamical_matrix(b, nu_);
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(A);
  if (es.info() != Eigen::Success) throw Error(ErrorCode::InvalidArgument, "eigen-decomposition failed");
  const Eigen::VectorXd lam = es.eigenvalues();
  if (!(lam.minCoeff() > 0.0))
    throw Error(ErrorCode::PositivityViolation,
                "normal-mode frequency squared " + std::to_string(lam.minCoeff()) + " is not positive", lam.minCoeff());
  Omega_ = lam.array().sqrt();
  U_ = es.eigenvectors();
}

double NormalModes::alpha(Eigen::Index k) const {
  return U_(0, k) * (Omega_(k) + nu_(0)) / (2.0 * std::sqrt(Omega_(k) * nu_(0)));
}

double NormalModes::beta(Eigen::Index k) const {
  return U_(0, k) * (Omega_(k) - nu_(0)) / (2.0 * std::sqrt(Omega_(k) * nu_(0)));
}

double NormalModes::delta(Eigen::Index k, Eigen::Index mu) const {
  const double w = nu_(mu + 1);
  return U_(mu + 1, k) * (Omega_(k) - w) / (2.0 * std::sqrt(Omega_(k) * w));
}

EvolutionSeries NormalModes::kernels(const std::vector<double>& times) const {
  return spectrum_kernels(Omega_, weights(), times);
}

// X(t) = K^{1/2} [C K^{-1/2} X0 + S K^{1/2} P0]
// P(t) = K^{-1/2} [-SA K^{-1/2} X0 + C K^{1/2} P0]
// with C = U cos U^T, S = U (sin/Omega) U^T, SA = U (Omega sin) U^T.
Eigen::MatrixXd NormalModes::propagator(double t) const {
  const Eigen::Index n = nu_.size();
  const Eigen::ArrayXd ph = Omega_.array() * t;
  const Eigen::MatrixXd C = U_ * ph.cos().matrix().asDiagonal() * U_.transpose();
  const Eigen::MatrixXd S = U_ * (ph.sin() / Omega_.array()).matrix().asDiagonal() * U_.transpose();
  const Eigen::MatrixXd SA = U_ * (ph.sin() * Omega_.array()).matrix().asDiagonal() * U_.transpose();
  const Eigen::ArrayXd r = nu_.array().sqrt();
  Eigen::MatrixXd M(2 * n, 2 * n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) {
      M(i, j) = r(i) * C(i, j) / r(j);
      M(i, n + j) = r(i) * S(i, j) * r(j);
      M(n + i, j) = -SA(i, j) / (r(i) * r(j));
      M(n + i, n + j) = C(i, j) * r(j) / r(i);
    }
  return M;
}

Eigen::MatrixXd NormalModes::oscillator_rows(double t) const {
  const Eigen::Index n = nu_.size();
  const Eigen::ArrayXd ph = Omega_.array() * t;
  const Eigen::ArrayXd u0 = U_.row(0).transpose().array();
  const Eigen::VectorXd c0 = U_ * (u0 * ph.cos()).matrix();
  const Eigen::VectorXd s0 = U_ * (u0 * ph.sin() / Omega_.array()).matrix();
  const Eigen::VectorXd a0 = U_ * (u0 * ph.sin() * Omega_.array()).matrix();
  const Eigen::ArrayXd r = nu_.array().sqrt();
  const double r0 = r(0);
  Eigen::MatrixXd R(2, 2 * n);
  for (Eigen::Index j = 0; j < n; ++j) {
    R(0, j) = r0 * c0(j) / r(j);
    R(0, n + j) = r0 * s0(j) * r(j);
    R(1, j) = -a0(j) / (r0 * r(j));
    R(1, n + j) = c0(j) * r(j) / r0;
  }
  return R;
}

double recurrence_time(const NormalModes& nm) { return spectrum_recurrence(nm.frequencies(), nm.weights()); }

double recurrence_time(const OscillatorSpectrum& s) { return spectrum_recurrence(s.frequencies, s.weights); }

double recurrence_time(const DiscreteBath& b) { return recurrence_time(oscillator_spectrum(b)); }

EvolutionSeries evolve_means_discrete(const DiscreteBath& b, double x0, double p0, const std::vector<double>& times) {
  return evolve_means(x0, p0, b.m, oscillator_spectrum(b).kernels(times));
}

GaussianState CovarianceTrajectory::state(std::size_t i) const {
  GaussianState s;
  s.mean_x = mean_x[i];
  s.mean_p = mean_p[i];
  s.var_x = var_x[i];
  s.var_p = var_p[i];
  s.cov_xp = cov_xp[i];
  return s;
}

double CovarianceTrajectory::min_uncertainty() const {
  double m = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < times.size(); ++i) m = std::min(m, var_x[i] * var_p[i] - cov_xp[i] * cov_xp[i]);
  return m;
}

namespace {

// Initial covariance diagonal blocks in natural units; the oscillator block
// is the only one with an X-P correlation.
struct InitialCov {
  Eigen::VectorXd vx, vp;  // per degree of freedom
  double cxp = 0.0;
};

InitialCov initial_cov(const DiscreteBath& b, double beta, const GaussianState& s) {
  const Eigen::Index n = b.n_modes + 1;
  InitialCov ic;
  ic.vx.resize(n);
  ic.vp.resize(n);
  const double mw = b.m * b.Omega0;
  ic.vx(0) = s.var_x * mw;
  ic.vp(0) = s.var_p / mw;
  ic.cxp = s.cov_xp;
  for (Eigen::Index i = 1; i < n; ++i) {
    const double v = 0.5 * coth_half(beta, b.omegas[static_cast<std::size_t>(i - 1)]);
    ic.vx(i) = v;
    ic.vp(i) = v;
  }
  return ic;
}

}  // namespace

CovarianceTrajectory evolve_covariance_discrete(const DiscreteBath& b, double beta, const GaussianState& initial,
                                                const std::vector<double>& times) {
  if (!(beta > 0.0)) throw Error(ErrorCode::InvalidArgument, "beta must be positive (inf for zero temperature)");
  if (initial.uncertainty_product() < 0.25 - 1e-10)
    throw Error(ErrorCode::NonPhysicalState, "initial oscillator state violates the uncertainty relation");
  const NormalModes nm(b);
  const InitialCov ic = initial_cov(b, beta, initial);
  const Eigen::Index n = b.n_modes + 1;
  const double mw = b.m * b.Omega0;
  CovarianceTrajectory tr;
  tr.times = times;
  tr.recurrence_time = recurrence_time(nm);
  const std::size_t nt = times.size();
  tr.var_x.resize(nt);
  tr.var_p.resize(nt);
  tr.cov_xp.resize(nt);
  tr.mean_x.resize(nt);
  tr.mean_p.resize(nt);
  for (double t : times) {
    if (t > 0.8 * tr.recurrence_time) {
      warn("RecurrenceWindowExceeded: t = " + std::to_string(t) + " passes 0.8 of the recurrence estimate " +
           std::to_string(tr.recurrence_time));
      break;
    }
  }
  const double X0 = initial.mean_x * std::sqrt(mw), P0 = initial.mean_p / std::sqrt(mw);
  parallel_for(nt, [&](std::size_t i) {
    const Eigen::MatrixXd R = nm.oscillator_rows(times[i]);
    double xx = 0.0, pp = 0.0, xp = 0.0;
    for (Eigen::Index j = 0; j < n; ++j) {
      xx += R(0, j) * R(0, j) * ic.vx(j) + R(0, n + j) * R(0, n + j) * ic.vp(j);
      pp += R(1, j) * R(1, j) * ic.vx(j) + R(1, n + j) * R(1, n + j) * ic.vp(j);
      xp += R(0, j) * R(1, j) * ic.vx(j) + R(0, n + j) * R(1, n + j) * ic.vp(j);
    }
    // oscillator X-P correlation
    xx += 2.0 * R(0, 0) * R(0, n) * ic.cxp;
    pp += 2.0 * R(1, 0) * R(1, n) * ic.cxp;
    xp += (R(0, 0) * R(1, n) + R(0, n) * R(1, 0)) * ic.cxp;
    tr.var_x[i] = xx / mw;
    tr.var_p[i] = pp * mw;
    tr.cov_xp[i] = xp;
    tr.mean_x[i] = (R(0, 0) * X0 + R(0, n) * P0) / std::sqrt(mw);
    tr.mean_p[i] = (R(1, 0) * X0 + R(1, n) * P0) * std::sqrt(mw);
  });
  return tr;
}

Eigen::MatrixXd global_covariance(const NormalModes& nm, double beta, const GaussianState& initial, double t) {
  const DiscreteBath& b = nm.bath();
  const InitialCov ic = initial_cov(b, beta, initial);
  const Eigen::Index n = b.n_modes + 1;
  Eigen::MatrixXd S0 = Eigen::MatrixXd::Zero(2 * n, 2 * n);
  for (Eigen::Index i = 0; i < n; ++i) {
    S0(i, i) = ic.vx(i);
    S0(n + i, n + i) = ic.vp(i);
  }
  S0(0, n) = S0(n, 0) = ic.cxp;
  const Eigen::MatrixXd M = nm.propagator(t);
  return M * S0 * M.transpose();
}

Eigen::VectorXd symplectic_eigenvalues(const Eigen::MatrixXd& sigma) {
  const Eigen::Index n2 = sigma.rows();
  if (n2 % 2 != 0 || sigma.cols() != n2) throw Error(ErrorCode::InvalidArgument, "covariance must be 2n x 2n");
  const Eigen::Index n = n2 / 2;
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n2, n2);
  J.topRightCorner(n, n).setIdentity();
  J.bottomLeftCorner(n, n) = -Eigen::MatrixXd::Identity(n, n);
  const Eigen::VectorXcd ev = (J * sigma).eigenvalues();
  std::vector<double> mags;
  for (Eigen::Index i = 0; i < ev.size(); ++i) mags.push_back(std::abs(ev(i)));
  std::sort(mags.begin(), mags.end());
  Eigen::VectorXd out(n);
  for (Eigen::Index i = 0; i < n; ++i) out(i) = 0.5 * (mags[static_cast<std::size_t>(2 * i)] + mags[static_cast<std::size_t>(2 * i + 1)]);
  return out;
}

GaussianState discrete_thermal_state(const NormalModes& nm, double beta) {
  const DiscreteBath& b = nm.bath();
  const Eigen::VectorXd w = nm.weights();
  const Eigen::VectorXd& W = nm.frequencies();
  double vx = 0.0, vp = 0.0;
  for (Eigen::Index k = 0; k < W.size(); ++k) {
    const double ct = coth_half(beta, W(k));
    vx += w(k) * ct / (2.0 * W(k));
    vp += w(k) * ct * W(k) / 2.0;
  }
  GaussianState s;
  s.var_x = vx / b.m;
  s.var_p = vp * b.m;
  s.cov_xp = 0.0;
  return s;
}

MemoryKernel memory_kernel_discrete(const DiscreteBath& b, const std::vector<double>& times) {
  b.check();
  MemoryKernel k;
  k.times = times;
  k.kappa.assign(times.size(), 0.0);
  for (std::size_t i = 0; i < times.size(); ++i) {
    double s = 0.0;
    for (std::size_t mu = 0; mu < b.omegas.size(); ++mu)
      s += b.couplings[mu] * b.couplings[mu] / b.omegas[mu] * std::cos(b.omegas[mu] * times[i]);
    k.kappa[i] = b.Omega0 * s;
  }
  k.kappa0 = b.Omega0 * b.positivity_sum();
  return k;
}

}  // namespace dampo
