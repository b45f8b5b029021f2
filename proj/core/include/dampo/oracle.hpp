#pragma once

#include <functional>
#include <vector>

#include <Eigen/Dense>

#include "dampo/bath.hpp"
#include "dampo/dynamics.hpp"
#include "dampo/states.hpp"

namespace dampo {

// H = 1/2 [Omega0 (X^2 + P^2) + sum w_mu (X_mu^2 + P_mu^2)] + sum V_mu X X_mu
// in natural units X = x sqrt(m Omega0), P = p / sqrt(m Omega0).
struct DiscreteBath {
  int n_modes = 0;
  std::vector<double> omegas;
  std::vector<double> weights;    // quadrature weights w_mu (empty if built by hand)
  std::vector<double> couplings;  // V_mu = V(w_mu) sqrt(w_mu weight)
  double m = 1.0;
  double Omega0 = 1.0;

  void check() const;              // sizes, w_mu > 0, m, Omega0 > 0
  double positivity_sum() const;   // sum V_mu^2 / w_mu
  bool positive() const { return Omega0 > positivity_sum(); }
};

// Gauss-Legendre nodes on [0, omega_max]. Throws PositivityViolation.
DiscreteBath discretize(const std::function<double(double)>& v, double Omega0, double m, int n_modes, double omega_max);
DiscreteBath discretize(const CouplingSpectrum& V, double Omega0, double m, int n_modes, double omega_max);
DiscreteBath discretize(const OhmicBath& b, double Omega0, int n_modes, double omega_max);

// Eigenvalues of Kp^{1/2} Kx Kp^{1/2}; all positive iff the bath is positive.
Eigen::VectorXd dynamical_eigenvalues(const DiscreteBath& b);

// Exact normal-mode propagator. Throws PositivityViolation.
class NormalModes {
 public:
  explicit NormalModes(const DiscreteBath& b);

  const DiscreteBath& bath() const { return bath_; }
  const Eigen::VectorXd& frequencies() const { return Omega_; }   // ascending
  const Eigen::MatrixXd& vectors() const { return U_; }
  // overlap of each normal mode with the oscillator: the discrete density
  Eigen::VectorXd weights() const { return U_.row(0).transpose().array().square(); }

  // c, s, d of the discrete density
  EvolutionSeries kernels(const std::vector<double>& times) const;
  // Full phase-space map at time t, ordering (X, X_1..X_N, P, P_1..P_N).
  Eigen::MatrixXd propagator(double t) const;
  // Bogoliubov components of normal mode k: alpha_k, beta_k on the oscillator,
  // delta_{k mu} on bath mode mu (mu is 0-based over the bath).
  double alpha(Eigen::Index k) const;
  double beta(Eigen::Index k) const;
  double delta(Eigen::Index k, Eigen::Index mu) const;

  // Rows of the propagator for the oscillator X and P only (2 x (2N+2)).
  Eigen::MatrixXd oscillator_rows(double t) const;

 private:
  DiscreteBath bath_;
  Eigen::VectorXd nu_;     // (Omega0, w_mu)
  Eigen::VectorXd Omega_;
  Eigen::MatrixXd U_;
};

// Normal-mode frequencies and oscillator weights U_{0k}^2 only, from the
// secular equation of the arrowhead matrix: O(N^2) instead of a dense
// eigensolve. Modes with zero oscillator weight are dropped.
// Throws PositivityViolation.
struct OscillatorSpectrum {
  Eigen::VectorXd frequencies;  // ascending
  Eigen::VectorXd weights;

  EvolutionSeries kernels(const std::vector<double>& times) const;
};
OscillatorSpectrum oscillator_spectrum(const DiscreteBath& b);

// 2 pi / (largest normal-mode spacing among modes holding the central 98% of the oscillator weight)
double recurrence_time(const NormalModes& nm);
double recurrence_time(const OscillatorSpectrum& s);
double recurrence_time(const DiscreteBath& b);

// Means with the bath at rest in expectation. Physical units.
EvolutionSeries evolve_means_discrete(const DiscreteBath& b, double x0, double p0, const std::vector<double>& times);

struct CovarianceTrajectory {
  std::vector<double> times;
  std::vector<double> var_x, var_p, cov_xp;
  std::vector<double> mean_x, mean_p;
  double recurrence_time = 0.0;

  GaussianState state(std::size_t i) const;
  double min_uncertainty() const;
};

// Bath modes start thermal (variances coth(beta w/2)/2), uncorrelated with the
// oscillator. Warns once when a time passes 0.8 of the recurrence estimate.
CovarianceTrajectory evolve_covariance_discrete(const DiscreteBath& b, double beta, const GaussianState& initial,
                                                const std::vector<double>& times);

// Full (2N+2) covariance at time t, natural units, same ordering as propagator().
Eigen::MatrixXd global_covariance(const NormalModes& nm, double beta, const GaussianState& initial, double t);
// Symplectic eigenvalues of a covariance with ordering (X..., P...).
Eigen::VectorXd symplectic_eigenvalues(const Eigen::MatrixXd& sigma);

// Gibbs state of the full discrete Hamiltonian, oscillator marginal.
GaussianState discrete_thermal_state(const NormalModes& nm, double beta);

// kappa(t) = Omega0 sum V_mu^2 / w_mu cos(w_mu t)
MemoryKernel memory_kernel_discrete(const DiscreteBath& b, const std::vector<double>& times);

}  // namespace dampo
