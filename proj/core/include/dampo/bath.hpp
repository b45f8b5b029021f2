#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "dampo/fano.hpp"

namespace dampo {

// J(w) = m gamma w exp(-w/omega_c)
struct OhmicBath {
  double gamma = 0.0;
  double omega_c = 0.0;
  double m = 1.0;
  void check() const;  // InvalidArgument
  double J(double omega) const;
  double kappa0() const;  // 2 gamma omega_c / pi
};

struct MemoryKernel {
  std::vector<double> times;
  std::vector<double> kappa;
  double kappa0 = 0.0;
};

// Tabulated spectral function, `omega,J` CSV layout.
struct SpectralFunction {
  std::vector<double> omega_grid;
  std::vector<double> J;
};

MemoryKernel ohmic_kernel(const OhmicBath& b, const std::vector<double>& times);

struct KernelQuadOptions {
  quad::Options quad{1e-13, 1e-11, 200000};
};
// kappa(t) = (2/(pi m)) int_0^omega_max J(w)/w cos(wt) dw. J is sampled at the
// given frequencies only through the callable.
MemoryKernel kernel_from_density(const std::function<double(double)>& J, double m, double omega_max,
                                 const std::vector<double>& times, const KernelQuadOptions& opt = {});
// PCHIP through the table, J ~ w below the first node; zero beyond the last.
// Throws DivergentKernel when J/w is not integrable at 0.
MemoryKernel kernel_from_density(const SpectralFunction& J, double m, const std::vector<double>& times,
                                 const KernelQuadOptions& opt = {});

struct FrequencyReport {
  double kappa0 = 0.0;
  double Omega0_sq = 0.0;
  double omega0_sq = 0.0;          // given, or Omega0^2 - kappa0
  double implied_Omega0_sq = 0.0;  // omega0^2 + kappa0
  bool omega0_nonnegative = false; // omega0 = 0+ is allowed
  bool Omega0_bound = false;       // Omega0^2 > kappa0
  bool consistent = false;         // Omega0^2 = omega0^2 + kappa0
  bool ok() const { return omega0_nonnegative && Omega0_bound && consistent; }
};
FrequencyReport frequency_constraints(const OhmicBath& b, double Omega0, std::optional<double> omega0 = {});

enum class TailModel { None, Lorentzian, Algebraic };
struct MarkovOptions {
  TailModel tail = TailModel::Algebraic;
  double decay_fraction = 0.05;  // |kappa(t_max)| / kappa_max above this counts as not decayed
};
// int_0^t_max kappa dt (natural spline through the samples) plus a tail
// estimate. Throws NonDecayedKernel when a tail is requested and kappa has not decayed.
double markov_damping(const MemoryKernel& k, const MarkovOptions& opt = {});

// V^2 = 2 J / (pi m Omega0)
CouplingSpectrum coupling_from_J(const SpectralFunction& J, double m, double Omega0);
SpectralFunction J_from_coupling(const CouplingSpectrum& V, double m, double Omega0);
// Ohmic coupling sampled on a geometric grid up to omega_max (default 45 omega_c).
CouplingSpectrum ohmic_coupling(const OhmicBath& b, double Omega0, int points = 3000, double omega_max = 0.0);
double ohmic_v(const OhmicBath& b, double Omega0, double omega);

}  // namespace dampo
