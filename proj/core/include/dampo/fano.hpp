#pragma once

#include <array>
#include <memory>
#include <vector>

#include <Eigen/Dense>

#include "dampo/spectral.hpp"

namespace dampo {

enum class DecayModel { None, Exponential };

struct CouplingSpectrum {
  std::vector<double> omega_grid;  // ascending, >= 0
  std::vector<double> v_values;    // V(w), units frequency^(1/2)
  double cutoff = 0.0;             // 0 means the last grid point
  DecayModel decay = DecayModel::None;
  double decay_scale = 0.0;        // V^2 ~ exp(-(w - cutoff)/decay_scale) beyond cutoff
};

// Samples v on a geometric grid of n points over [omega_min, omega_max].
CouplingSpectrum sample_coupling(const std::function<double(double)>& v, double omega_min, double omega_max,
                                 int n);

// V(w) as a shape-preserving cubic; V^2 held as exact piecewise sextics so
// Hilbert-type integrals of V^2 are computed segment by segment.
class Coupling {
 public:
  explicit Coupling(const CouplingSpectrum& spec);

  double v(double omega) const;
  double v_sq(double omega) const;
  // V = 0 beyond this frequency
  double support() const { return nodes_.back(); }
  const std::vector<double>& nodes() const { return nodes_; }
  bool zero() const { return zero_; }

  // PV int_0^support V^2(x) / (z - x) dx for any real z
  double hilbert(double z) const;
  // int_0^inf V^2/w dw; throws DivergentIntegral if V(0) != 0 or V ~ const near 0
  double inverse_moment() const;

 private:
  std::vector<double> nodes_;  // segment boundaries, nodes_[0] = 0
  std::vector<double> v_;      // V at nodes
  std::vector<double> dv_;     // dV/dw at nodes
  std::vector<std::array<double, 7>> sq_;  // V^2 in local u on each segment
  bool zero_ = true;
  bool lin_head_ = false;  // V = V(x0) sqrt(w/x0) on the prepended [0, x0]
  bool divergent_ = false;
};

struct PositivityResult {
  double integral = 0.0;  // int V^2/w
  bool ok = false;        // integral < Omega0
};
PositivityResult positivity_check(const CouplingSpectrum& V, double Omega0);

struct FanoOptions {
  int base_points = 2048;
  int refine_factor = 16;
  double refine_widths = 5.0;
  double shift_warning = 0.25;   // relative root displacement that triggers a warning
  bool validate = true;
  ValidationOptions validation{};
};

// D(w) = V^2 Y = 2(w^2 - Omega0^2)/Omega0 - 4F(w), tabulated on the density
// grid and spline-interpolated; everything else follows algebraically.
class FanoSolver {
 public:
  FanoSolver(const CouplingSpectrum& V, double Omega0, const FanoOptions& opt = {});

  double Omega0() const { return Omega0_; }
  const Coupling& coupling() const { return coupling_; }

  double level_shift(double omega) const;  // F(w), exact
  double d_exact(double omega) const;      // V^2 Y, exact
  double d(double omega) const;            // spline of d_exact
  double y_exact(double omega) const;      // throws ZeroCoupling where V = 0

  cplx alpha(double omega) const;
  cplx beta(double omega) const;
  double alpha_sq(double omega) const;
  double pi(double omega) const;

  const std::vector<double>& grid() const { return grid_; }
  const std::vector<double>& roots() const { return roots_; }   // zeros of D
  const std::vector<double>& widths() const { return widths_; } // pi V(root)^2 / 2
  std::vector<double> breakpoints() const;

 private:
  Coupling coupling_;
  double Omega0_;
  std::vector<double> grid_, d_nodes_;
  CubicSpline d_spline_;
  std::vector<double> roots_, widths_;
};

struct FanoCoefficients {
  double Omega0 = 0.0;
  std::vector<double> omega_grid;
  std::vector<double> Y;
  std::vector<double> D;          // V^2 Y, finite where V = 0
  std::vector<double> alpha_sq;
  std::vector<cplx> alpha;
  std::vector<cplx> beta;
  std::vector<double> F;
  std::vector<double> v;          // V on the grid
};

double y_function(const CouplingSpectrum& V, double Omega0, double omega);
FanoCoefficients alpha_beta(const CouplingSpectrum& V, double Omega0, const FanoOptions& opt = {});
// Same coefficients on a caller-supplied grid.
FanoCoefficients alpha_beta(const FanoSolver& solver, const std::vector<double>& grid);
// alpha -> e^{i theta} alpha, beta -> e^{i theta} beta
FanoCoefficients apply_phase(const FanoCoefficients& c, double theta);
// pi_k = |alpha_k|^2 4 Omega0 w_k / (Omega0 + w_k)^2 on the coefficient grid
std::vector<double> density_values(const FanoCoefficients& c);

// Throws PositivityViolation, or ValidationError (report attached).
SpectralDensity density_from_coupling(const CouplingSpectrum& V, double Omega0, const FanoOptions& opt = {});
SpectralDensity density_from_solver(std::shared_ptr<const FanoSolver> solver, const FanoOptions& opt = {});

// int (|alpha|^2 - |beta|^2) dw, integrated from alpha/beta directly
double normalization_identity(const FanoSolver& solver);

// delta(w, w') dense; gamma(w, w') split as prefactor(w) * V(w')/(w - w')
// off the diagonal plus Y(w) on it.
struct FanoKernels {
  std::vector<double> omega;        // rows (dressed-mode frequency)
  std::vector<double> omega_prime;  // columns (bath frequency)
  Eigen::MatrixXcd delta;
  std::vector<cplx> gamma_prefactor;  // Omega0 alpha(w) / (w + Omega0)
  Eigen::MatrixXd gamma_principal;    // V(w')/(w - w'), 0 where w == w'
  std::vector<double> gamma_diagonal; // Y(w)

  cplx gamma_offdiag(std::size_t i, std::size_t j) const { return gamma_prefactor[i] * gamma_principal(i, j); }
};
FanoKernels gamma_delta_kernels(const FanoCoefficients& coeffs, const CouplingSpectrum& V);
FanoKernels gamma_delta_kernels(const FanoCoefficients& coeffs, const CouplingSpectrum& V,
                                const std::vector<double>& omega_prime);

}  // namespace dampo
