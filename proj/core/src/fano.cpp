#include "dampo/fano.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include <boost/math/tools/roots.hpp>

namespace dampo {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double horner(const std::array<double, 7>& c, double u) {
  double r = c[6];
  for (int k = 5; k >= 0; --k) r = r * u + c[static_cast<std::size_t>(k)];
  return r;
}

struct Legendre10 {
  std::vector<double> x, w;
  Legendre10() { quad::gauss_legendre(10, 0.0, 1.0, x, w); }
};
const Legendre10& gl10() {
  static const Legendre10 rule;
  return rule;
}

}  // namespace

CouplingSpectrum sample_coupling(const std::function<double(double)>& v, double omega_min, double omega_max, int n) {
  if (!(omega_min > 0.0) || !(omega_max > omega_min) || n < 2)
    throw Error(ErrorCode::InvalidArgument, "sample_coupling needs 0 < omega_min < omega_max and n >= 2");
  CouplingSpectrum s;
  s.omega_grid.resize(static_cast<std::size_t>(n));
  s.v_values.resize(static_cast<std::size_t>(n));
  const double r = std::log(omega_max / omega_min);
  for (int i = 0; i < n; ++i) {
    const double w = i == n - 1 ? omega_max : omega_min * std::exp(r * i / (n - 1));
    s.omega_grid[static_cast<std::size_t>(i)] = w;
    s.v_values[static_cast<std::size_t>(i)] = v(w);
  }
  s.cutoff = omega_max;
  return s;
}

Coupling::Coupling(const CouplingSpectrum& spec) {
  const auto& g = spec.omega_grid;
  const auto& val = spec.v_values;
  if (g.size() != val.size() || g.size() < 2)
    throw Error(ErrorCode::InvalidArgument, "coupling spectrum needs matching omega/v columns (>= 2 rows)");
  if (g.front() < 0.0) throw Error(ErrorCode::NegativeFrequency, "coupling grid has negative frequency");
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (!std::isfinite(val[i])) throw Error(ErrorCode::InvalidArgument, "coupling value is not finite");
    if (i > 0 && !(g[i] > g[i - 1])) throw Error(ErrorCode::InvalidArgument, "coupling grid must be strictly ascending");
  }
  const double cutoff = spec.cutoff > 0.0 ? std::min(spec.cutoff, g.back()) : g.back();

  // user nodes up to the cutoff, then the decay extension
  MonotoneCubic base(g, val);
  std::vector<double> x, y;
  for (std::size_t i = 0; i < g.size() && g[i] < cutoff; ++i) {
    x.push_back(g[i]);
    y.push_back(val[i]);
  }
  x.push_back(cutoff);
  y.push_back(base(cutoff));
  if (spec.decay == DecayModel::Exponential) {
    if (!(spec.decay_scale > 0.0)) throw Error(ErrorCode::InvalidArgument, "exponential decay needs decay_scale > 0");
    const double h = spec.decay_scale / 8.0;
    const double vc = y.back();
    for (int k = 1; k <= 320; ++k) {
      const double w = cutoff + h * k;
      x.push_back(w);
      y.push_back(vc * std::exp(-(w - cutoff) / (2.0 * spec.decay_scale)));
    }
  }
  if (x.size() < 2) throw Error(ErrorCode::InvalidArgument, "coupling cutoff leaves fewer than two nodes");

  for (double v : y) zero_ = zero_ && v == 0.0;
  MonotoneCubic shape(x, y);

  // V ~ const near 0 makes int V^2/w diverge
  if (x.front() == 0.0 && y.front() != 0.0) divergent_ = true;
  for (std::size_t i = 0; i + 1 < x.size(); ++i) {
    if (x[i] > 0.0 && y[i] != 0.0 && y[i + 1] != 0.0) {
      const double a = std::log((y[i + 1] * y[i + 1]) / (y[i] * y[i])) / std::log(x[i + 1] / x[i]);
      if (a < 0.25) divergent_ = true;
      break;
    }
  }

  nodes_.clear();
  v_.clear();
  dv_.clear();
  sq_.clear();
  if (x.front() > 0.0) {
    // V^2 linear in w on [0, x0]
    nodes_.push_back(0.0);
    v_.push_back(0.0);
    dv_.push_back(0.0);
    std::array<double, 7> c{};
    c[1] = y.front() * y.front();
    sq_.push_back(c);
    lin_head_ = true;
  }
  for (std::size_t i = 0; i < x.size(); ++i) {
    nodes_.push_back(x[i]);
    v_.push_back(y[i]);
    dv_.push_back(shape.derivative(x[i]));
  }
  const std::size_t first = x.front() > 0.0 ? 1 : 0;
  for (std::size_t i = first; i + 1 < nodes_.size(); ++i) {
    const double h = nodes_[i + 1] - nodes_[i];
    const double y0 = v_[i], y1 = v_[i + 1], d0 = h * dv_[i], d1 = h * dv_[i + 1];
    const std::array<double, 4> a{y0, d0, -3.0 * y0 - 2.0 * d0 + 3.0 * y1 - d1, 2.0 * y0 + d0 - 2.0 * y1 + d1};
    std::array<double, 7> c{};
    for (std::size_t p = 0; p < 4; ++p)
      for (std::size_t q = 0; q < 4; ++q) c[p + q] += a[p] * a[q];
    sq_.push_back(c);
  }
}

double Coupling::v(double omega) const {
  if (omega <= 0.0 || omega >= nodes_.back()) return omega == nodes_.back() ? v_.back() : 0.0;
  auto it = std::upper_bound(nodes_.begin(), nodes_.end(), omega);
  const auto i = static_cast<std::size_t>(it - nodes_.begin()) - 1;
  const double h = nodes_[i + 1] - nodes_[i];
  const double u = (omega - nodes_[i]) / h;
  if (i == 0 && lin_head_) return v_[1] * std::sqrt(u);
  const double y0 = v_[i], y1 = v_[i + 1], d0 = h * dv_[i], d1 = h * dv_[i + 1];
  const double u2 = u * u, u3 = u2 * u;
  return y0 * (2 * u3 - 3 * u2 + 1) + d0 * (u3 - 2 * u2 + u) + y1 * (-2 * u3 + 3 * u2) + d1 * (u3 - u2);
}

double Coupling::v_sq(double omega) const {
  if (omega <= 0.0 || omega > nodes_.back()) return 0.0;
  auto it = std::upper_bound(nodes_.begin(), nodes_.end(), omega);
  std::size_t i = static_cast<std::size_t>(it - nodes_.begin());
  i = std::min(i, nodes_.size() - 1) - 1;
  const double u = (omega - nodes_[i]) / (nodes_[i + 1] - nodes_[i]);
  return horner(sq_[i], u);
}

double Coupling::hilbert(double z) const {
  if (zero_) return 0.0;
  const auto& rule = gl10();
  double sum = 0.0;
  for (std::size_t s = 0; s < sq_.size(); ++s) {
    const double a = nodes_[s];
    const double h = nodes_[s + 1] - a;
    const auto& c = sq_[s];
    const double zeta = (z - a) / h;
    if (std::abs(zeta - 0.5) > 4.0) {
      double part = 0.0;
      for (std::size_t j = 0; j < rule.x.size(); ++j) part += rule.w[j] * horner(c, rule.x[j]) / (zeta - rule.x[j]);
      sum += part;
      continue;
    }
    // p(u) = p(zeta) + (u - zeta) q(u); int_0^1 p/(zeta - u) = p(zeta) L - int_0^1 q
    std::array<double, 6> b{};
    b[5] = c[6];
    for (int j = 4; j >= 0; --j) b[static_cast<std::size_t>(j)] = c[static_cast<std::size_t>(j) + 1] + zeta * b[static_cast<std::size_t>(j) + 1];
    const double pz = c[0] + zeta * b[0];
    double iq = 0.0;
    for (std::size_t j = 0; j < 6; ++j) iq += b[j] / static_cast<double>(j + 1);
    // log terms at a node cancel against the neighbouring segment
    double L = 0.0;
    if (zeta != 0.0) L += std::log(std::abs(zeta));
    if (zeta != 1.0) L -= std::log(std::abs(zeta - 1.0));
    sum += (pz == 0.0 ? 0.0 : pz * L) - iq;
  }
  return sum;
}

double Coupling::inverse_moment() const {
  if (zero_) return 0.0;
  if (divergent_)
    throw Error(ErrorCode::DivergentIntegral, "int V^2/w diverges: V(w) does not vanish at w -> 0");
  return -hilbert(0.0);
}

PositivityResult positivity_check(const CouplingSpectrum& V, double Omega0) {
  const Coupling c(V);
  PositivityResult r;
  r.integral = c.inverse_moment();
  r.ok = r.integral < Omega0;
  return r;
}

FanoSolver::FanoSolver(const CouplingSpectrum& V, double Omega0, const FanoOptions& opt)
    : coupling_(V), Omega0_(Omega0) {
  if (!(Omega0 > 0.0)) throw Error(ErrorCode::InvalidArgument, "Omega0 must be positive");
  if (coupling_.zero()) throw Error(ErrorCode::ZeroCoupling, "V vanishes identically; the density is a delta at Omega0");
  const double integral = coupling_.inverse_moment();
  if (!(integral < Omega0))
    throw Error(ErrorCode::PositivityViolation,
                "int V^2/w = " + std::to_string(integral) + " is not below Omega0 = " + std::to_string(Omega0));

  const auto& cn = coupling_.nodes();
  const double w_hi = coupling_.support();
  double first = cn.size() > 1 ? cn[1] : w_hi * 1e-6;
  const double w_lo = std::min(first, 1e-3 * std::min(Omega0, w_hi));
  const int n = std::max(16, opt.base_points);
  std::vector<double> base(static_cast<std::size_t>(n));
  const double r = std::log(w_hi / w_lo);
  for (int i = 0; i < n; ++i) base[static_cast<std::size_t>(i)] = i == n - 1 ? w_hi : w_lo * std::exp(r * i / (n - 1));

  std::vector<double> dbase(base.size());
  for (std::size_t i = 0; i < base.size(); ++i) dbase[i] = d_exact(base[i]);

  // zeros of D where V > 0
  for (std::size_t i = 0; i + 1 < base.size(); ++i) {
    if (dbase[i] == 0.0 || (dbase[i] < 0.0) != (dbase[i + 1] < 0.0)) {
      double root = base[i];
      if (dbase[i] != 0.0) {
        std::uintmax_t iters = 200;
        auto f = [this](double w) { return d_exact(w); };
        auto br = boost::math::tools::toms748_solve(f, base[i], base[i + 1], dbase[i], dbase[i + 1],
                                                    boost::math::tools::eps_tolerance<double>(50), iters);
        root = 0.5 * (br.first + br.second);
      }
      const double v2 = coupling_.v_sq(root);
      if (v2 > 0.0) {
        roots_.push_back(root);
        widths_.push_back(M_PI * v2 / 2.0);
      } else {
        warn("D(w) vanishes at w = " + std::to_string(root) +
             " where V = 0: a dressed mode sits outside the continuum and its weight is not represented");
      }
    }
  }

  std::vector<double> extra;
  for (std::size_t k = 0; k < roots_.size(); ++k) {
    const double lo = roots_[k] - opt.refine_widths * widths_[k];
    const double hi = roots_[k] + opt.refine_widths * widths_[k];
    for (double m : {-opt.refine_widths, -1.0, 0.0, 1.0, opt.refine_widths}) {
      const double w = roots_[k] + m * widths_[k];
      if (w > w_lo && w < w_hi) extra.push_back(w);
    }
    for (std::size_t i = 0; i + 1 < base.size(); ++i) {
      if (base[i + 1] < lo || base[i] > hi) continue;
      // up to refine_factor x denser, never finer than width/16
      const double h = base[i + 1] - base[i];
      const int sub = std::clamp(static_cast<int>(std::ceil(16.0 * h / widths_[k])), 1, opt.refine_factor);
      for (int j = 1; j < sub; ++j) extra.push_back(base[i] + h * j / sub);
    }
  }
  grid_ = base;
  d_nodes_ = dbase;
  if (!extra.empty()) {
    std::vector<double> ed(extra.size());
    for (std::size_t i = 0; i < extra.size(); ++i) ed[i] = d_exact(extra[i]);
    std::vector<std::pair<double, double>> all;
    for (std::size_t i = 0; i < base.size(); ++i) all.emplace_back(base[i], dbase[i]);
    for (std::size_t i = 0; i < extra.size(); ++i) all.emplace_back(extra[i], ed[i]);
    std::sort(all.begin(), all.end());
    grid_.clear();
    d_nodes_.clear();
    for (const auto& [w, d] : all) {
      if (!grid_.empty() && w - grid_.back() <= 1e-14 * w) continue;
      grid_.push_back(w);
      d_nodes_.push_back(d);
    }
  }
  d_spline_ = CubicSpline(grid_, d_nodes_);

  double nearest = std::numeric_limits<double>::infinity();
  for (double rt : roots_)
    if (std::abs(rt - Omega0) < std::abs(nearest - Omega0)) nearest = rt;
  if (roots_.empty()) {
    warn("no resonance root of Y(w) found; the coupling is far outside the weak-coupling regime");
  } else if (std::abs(nearest - Omega0) > opt.shift_warning * Omega0) {
    warn("resonance root of Y(w) at " + std::to_string(nearest) + " is displaced by more than " +
         std::to_string(static_cast<int>(opt.shift_warning * 100)) + "% from Omega0 = " + std::to_string(Omega0) +
         "; level-shift renormalisation is not applied");
  }
}

double FanoSolver::level_shift(double omega) const {
  return 0.25 * (coupling_.hilbert(omega) + coupling_.hilbert(-omega));
}

double FanoSolver::d_exact(double omega) const {
  return 2.0 * (omega * omega - Omega0_ * Omega0_) / Omega0_ - 4.0 * level_shift(omega);
}

double FanoSolver::d(double omega) const { return d_spline_(omega); }

double FanoSolver::y_exact(double omega) const {
  const double v2 = coupling_.v_sq(omega);
  if (!(v2 > 0.0)) throw Error(ErrorCode::ZeroCoupling, "Y(w) is undefined where V(w) = 0 (w = " + std::to_string(omega) + ")");
  return d_exact(omega) / v2;
}

cplx FanoSolver::alpha(double omega) const {
  const double v = coupling_.v(omega);
  if (v == 0.0) return {0.0, 0.0};
  const double v2 = coupling_.v_sq(omega);
  return (omega + Omega0_) * v / (Omega0_ * cplx(d(omega), -M_PI * v2));
}

cplx FanoSolver::beta(double omega) const { return (omega - Omega0_) / (omega + Omega0_) * alpha(omega); }

double FanoSolver::alpha_sq(double omega) const {
  const double v2 = coupling_.v_sq(omega);
  if (v2 == 0.0) return 0.0;
  const double dd = d(omega);
  const double s = omega + Omega0_;
  return s * s * v2 / (Omega0_ * Omega0_ * (dd * dd + M_PI * M_PI * v2 * v2));
}

double FanoSolver::pi(double omega) const {
  const double v2 = coupling_.v_sq(omega);
  if (v2 == 0.0) return 0.0;
  const double dd = d(omega);
  return 4.0 * omega * v2 / (Omega0_ * (dd * dd + M_PI * M_PI * v2 * v2));
}

std::vector<double> FanoSolver::breakpoints() const {
  std::vector<double> br;
  const auto& cn = coupling_.nodes();
  // thin very fine coupling grids; adaptivity covers the rest
  const std::size_t stride = std::max<std::size_t>(1, cn.size() / 1024);
  for (std::size_t i = 1; i < cn.size(); i += stride) br.push_back(cn[i]);
  br.push_back(grid_.front());
  for (std::size_t k = 0; k < roots_.size(); ++k)
    for (double m : {-8.0, -3.0, -1.0, 0.0, 1.0, 3.0, 8.0}) {
      const double w = roots_[k] + m * widths_[k];
      if (w > 0.0 && w < coupling_.support()) br.push_back(w);
    }
  std::sort(br.begin(), br.end());
  br.erase(std::unique(br.begin(), br.end()), br.end());
  return br;
}

double y_function(const CouplingSpectrum& V, double Omega0, double omega) {
  if (!(omega > 0.0)) throw Error(ErrorCode::NegativeFrequency, "y_function needs omega > 0");
  const Coupling c(V);
  const double v2 = c.v_sq(omega);
  if (!(v2 > 0.0)) throw Error(ErrorCode::ZeroCoupling, "Y(w) is undefined where V(w) = 0");
  const double d = 2.0 * (omega * omega - Omega0 * Omega0) / Omega0 - c.hilbert(omega) - c.hilbert(-omega);
  return d / v2;
}

FanoCoefficients alpha_beta(const FanoSolver& s, const std::vector<double>& grid) {
  FanoCoefficients c;
  c.Omega0 = s.Omega0();
  c.omega_grid = grid;
  const std::size_t n = grid.size();
  c.Y.resize(n);
  c.D.resize(n);
  c.alpha_sq.resize(n);
  c.alpha.resize(n);
  c.beta.resize(n);
  c.F.resize(n);
  c.v.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double w = grid[i];
    const double v2 = s.coupling().v_sq(w);
    c.D[i] = s.d(w);
    c.Y[i] = v2 > 0.0 ? c.D[i] / v2 : kNaN;
    c.alpha_sq[i] = s.alpha_sq(w);
    c.alpha[i] = s.alpha(w);
    c.beta[i] = s.beta(w);
    c.F[i] = s.level_shift(w);
    c.v[i] = s.coupling().v(w);
  }
  return c;
}

FanoCoefficients alpha_beta(const CouplingSpectrum& V, double Omega0, const FanoOptions& opt) {
  const FanoSolver s(V, Omega0, opt);
  return alpha_beta(s, s.grid());
}

FanoCoefficients apply_phase(const FanoCoefficients& c, double theta) {
  FanoCoefficients out = c;
  const cplx ph = std::polar(1.0, theta);
  for (auto& a : out.alpha) a *= ph;
  for (auto& b : out.beta) b *= ph;
  return out;
}

std::vector<double> density_values(const FanoCoefficients& c) {
  std::vector<double> pi(c.omega_grid.size());
  for (std::size_t i = 0; i < pi.size(); ++i) {
    const double w = c.omega_grid[i];
    const double s = c.Omega0 + w;
    pi[i] = std::norm(c.alpha[i]) * 4.0 * c.Omega0 * w / (s * s);
  }
  return pi;
}

SpectralDensity density_from_solver(std::shared_ptr<const FanoSolver> solver, const FanoOptions& opt) {
  DensityTable nodes;
  nodes.omega_grid = solver->grid();
  nodes.values.resize(nodes.omega_grid.size());
  for (std::size_t i = 0; i < nodes.values.size(); ++i) nodes.values[i] = solver->pi(nodes.omega_grid[i]);
  nodes.tail_exponent = 4.0;
  double scale = solver->Omega0();
  for (double r : solver->roots())
    if (std::abs(r - solver->Omega0()) < std::abs(scale - solver->Omega0()) || scale == solver->Omega0()) scale = r;
  const double support = solver->coupling().support();
  auto eval = [solver](double w) { return solver->pi(w); };
  SpectralDensity sd = SpectralDensity::fano_derived(std::move(nodes), eval, solver->breakpoints(), scale, support,
                                                     solver->Omega0() * solver->Omega0());
  if (opt.validate) {
    const ValidationReport rep = validate(sd, opt.validation);
    if (!rep.passed.all()) throw ValidationError("Fano-derived density failed validation", rep);
  }
  return sd;
}

SpectralDensity density_from_coupling(const CouplingSpectrum& V, double Omega0, const FanoOptions& opt) {
  return density_from_solver(std::make_shared<const FanoSolver>(V, Omega0, opt), opt);
}

double normalization_identity(const FanoSolver& s) {
  auto f = [&](double w) { return std::norm(s.alpha(w)) - std::norm(s.beta(w)); };
  std::vector<double> br{0.0};
  for (double b : s.breakpoints()) br.push_back(b);
  br.push_back(s.coupling().support());
  std::sort(br.begin(), br.end());
  br.erase(std::unique(br.begin(), br.end()), br.end());
  const quad::Result r = quad::integrate(f, std::span<const double>(br), quad::Options{1e-14, 1e-11, 8000});
  if (!r.converged) throw Error(ErrorCode::QuadratureNonConvergence, "normalization identity integral", r.error);
  return r.value;
}

FanoKernels gamma_delta_kernels(const FanoCoefficients& coeffs, const CouplingSpectrum& V,
                                const std::vector<double>& omega_prime) {
  const Coupling c(V);
  FanoKernels k;
  k.omega = coeffs.omega_grid;
  k.omega_prime = omega_prime;
  const std::size_t n = k.omega.size(), m = omega_prime.size();
  std::vector<double> vp(m);
  for (std::size_t j = 0; j < m; ++j) vp[j] = c.v(omega_prime[j]);
  k.delta.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(m));
  k.gamma_principal.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(m));
  k.gamma_prefactor.resize(n);
  k.gamma_diagonal = coeffs.Y;
  const double W0 = coeffs.Omega0;
  for (std::size_t i = 0; i < n; ++i) {
    const double w = k.omega[i];
    k.gamma_prefactor[i] = W0 * coeffs.alpha[i] / (w + W0);
    for (std::size_t j = 0; j < m; ++j) {
      const double wp = omega_prime[j];
      const auto ii = static_cast<Eigen::Index>(i), jj = static_cast<Eigen::Index>(j);
      k.delta(ii, jj) = vp[j] * W0 * coeffs.alpha[i] / ((w + wp) * (w + W0));
      k.gamma_principal(ii, jj) = w == wp ? 0.0 : vp[j] / (w - wp);
    }
  }
  return k;
}

FanoKernels gamma_delta_kernels(const FanoCoefficients& coeffs, const CouplingSpectrum& V) {
  return gamma_delta_kernels(coeffs, V, coeffs.omega_grid);
}

}  // namespace dampo
