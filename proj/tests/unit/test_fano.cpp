#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "dampo/bath.hpp"
#include "dampo/fano.hpp"

using namespace dampo;

namespace {

// V^2 = w e^{-w}: H(z) = PV int x e^{-x}/(z - x) dx = -1 + z e^{-z} Ei(z) for z > 0,
// which holds for z < 0 as well with the real Ei.
CouplingSpectrum exp_coupling(int n = 4000) {
  return sample_coupling([](double w) { return std::sqrt(w * std::exp(-w)); }, 1e-7, 60.0, n);
}

double exp_hilbert(double z) { return -1.0 + z * std::exp(-z) * std::expint(z); }

CouplingSpectrum ohmic(double gamma, double omega_c, double Omega0, int n = 3000) {
  return ohmic_coupling(OhmicBath{gamma, omega_c, 1.0}, Omega0, n, 20.0 * omega_c);
}

}  // namespace

TEST(Fano, HilbertTransformMatchesClosedForm) {
  const Coupling c(exp_coupling());
  for (double z : {-3.0, -0.2, 0.05, 0.7, 1.0, 2.5, 9.0}) {
    SCOPED_TRACE(z);
    EXPECT_NEAR(c.hilbert(z), exp_hilbert(z), 1e-6 * (1.0 + std::abs(exp_hilbert(z))));
  }
  // int V^2/w = int e^{-w} = 1
  EXPECT_NEAR(c.inverse_moment(), 1.0, 1e-8);
}

TEST(Fano, PositivityCheck) {
  CouplingSpectrum zero = exp_coupling(50);
  for (auto& v : zero.v_values) v = 0.0;
  const auto z = positivity_check(zero, 1.0);
  EXPECT_EQ(z.integral, 0.0);
  EXPECT_TRUE(z.ok);

  // Ohmic: int V^2/w = 2 gamma omega_c / (pi Omega0), so ok iff Omega0^2 > 2 gamma omega_c / pi
  const double gamma = 1.0, wc = 2.0, bound = std::sqrt(2.0 * gamma * wc / std::numbers::pi);
  const auto above = positivity_check(ohmic(gamma, wc, 1.1 * bound), 1.1 * bound);
  EXPECT_TRUE(above.ok);
  EXPECT_NEAR(above.integral, 2.0 * gamma * wc / (std::numbers::pi * 1.1 * bound), 1e-6);
  EXPECT_FALSE(positivity_check(ohmic(gamma, wc, 0.9 * bound), 0.9 * bound).ok);

  // V ~ const at 0 makes V^2/w non-integrable
  const auto flat = sample_coupling([](double) { return 0.3; }, 1e-6, 10.0, 100);
  try {
    positivity_check(flat, 1.0);
    ADD_FAILURE() << "expected DivergentIntegral";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::DivergentIntegral);
  }
}

TEST(Fano, YFunction) {
  const auto V = ohmic(0.01, 2.0, 1.0);
  const FanoSolver s(V, 1.0);
  // weak coupling near Omega0: Y ~ 4(w - Omega0 - F)/V^2
  for (double w : {0.999, 1.001}) {
    const double y = y_function(V, 1.0, w);
    const double approx = 4.0 * (w - 1.0 - s.level_shift(w)) / s.coupling().v_sq(w);
    EXPECT_NEAR(y, approx, 2e-3 * std::abs(approx));
    EXPECT_NEAR(y, s.y_exact(w), 1e-9 * std::abs(y));
  }
  EXPECT_THROW(y_function(V, 1.0, 100.0), Error);  // beyond support, V = 0
}

TEST(Fano, AlphaSquaredPeaksAtYRoot) {
  const FanoSolver s(ohmic(0.05, 2.0, 1.0), 1.0);
  ASSERT_EQ(s.roots().size(), 1u);
  const double r = s.roots()[0], width = s.widths()[0];
  const double peak = s.alpha_sq(r);
  for (int i = -400; i <= 400; ++i) {
    if (i == 0) continue;
    EXPECT_LE(s.alpha_sq(r + i * width / 40.0), peak * (1.0 + 1e-6));
  }
}

TEST(Fano, AlphaBetaRelations) {
  const FanoSolver s(ohmic(0.4, 2.0, 1.0), 1.0);
  EXPECT_EQ(std::abs(s.beta(1.0)), 0.0);
  const auto c = alpha_beta(s, s.grid());
  for (std::size_t i = 0; i < c.omega_grid.size(); i += 37) {
    const double w = c.omega_grid[i];
    const double ratio = (w - 1.0) / (w + 1.0);
    EXPECT_NEAR(std::norm(c.beta[i]), std::norm(c.alpha[i]) * ratio * ratio, 1e-13 * (1.0 + std::norm(c.alpha[i])));
    EXPECT_NEAR(std::norm(c.alpha[i]), c.alpha_sq[i], 1e-12 * (1.0 + c.alpha_sq[i]));
  }
  EXPECT_NEAR(normalization_identity(s), 1.0, 1e-6);
}

TEST(Fano, NormalizationIdentityAcrossCouplings) {
  for (double gamma : {0.001, 0.05, 0.4}) {
    SCOPED_TRACE(gamma);
    const FanoSolver s(ohmic(gamma, 2.0, 1.0), 1.0);
    EXPECT_NEAR(normalization_identity(s), 1.0, 1e-6);
  }
  const FanoSolver e(exp_coupling(), 1.5);
  EXPECT_NEAR(normalization_identity(e), 1.0, 1e-6);
}

TEST(Fano, DensityFromCoupling) {
  const auto sd = density_from_coupling(ohmic(0.05, 2.0, 1.0), 1.0);
  EXPECT_EQ(sd.kind(), DensityKind::FanoDerived);
  EXPECT_EQ(sd(0.0), 0.0);
  EXPECT_NEAR(weighted_average(sd, [](double w) { return w * w; }), 1.0, 1e-4);
  EXPECT_NEAR(weighted_average(sd, [](double) { return 1.0; }), 1.0, 1e-8);
  const auto tab = to_tabulated(sd);
  const auto& t = *tab.table();
  for (std::size_t i = 0; i < t.omega_grid.size(); i += 101) EXPECT_EQ(tab(t.omega_grid[i]), t.values[i]);
}

TEST(Fano, WeakCouplingLorentzian) {
  const auto V = ohmic(0.002, 2.0, 1.0);
  const FanoSolver s(V, 1.0);
  ASSERT_EQ(s.roots().size(), 1u);
  const double r = s.roots()[0];
  const double width = s.widths()[0];
  for (int i = -30; i <= 30; ++i) {
    const double w = r + i * width / 10.0;
    const double v2 = s.coupling().v_sq(w);
    const double F = s.level_shift(w);
    const double lor = (v2 / 4.0) / ((w - 1.0 - F) * (w - 1.0 - F) + std::numbers::pi * std::numbers::pi * v2 * v2 / 16.0);
    EXPECT_NEAR(s.pi(w), lor, 0.02 * lor) << "w = " << w;
  }
}

TEST(Fano, WeakCouplingPeakAndWidth) {
  // global scale s on V: peak -> Omega0, FWHM -> pi s^2 V(Omega0)^2 / 2
  const auto base = ohmic(1.0, 2.0, 1.0);
  for (double scale : {0.08, 0.04}) {
    CouplingSpectrum V = base;
    for (auto& v : V.v_values) v *= scale;
    const FanoSolver s(V, 1.0);
    const double target = std::numbers::pi * s.coupling().v_sq(1.0) / 2.0;
    ASSERT_LT(target, 0.01);
    // locate peak and half-maximum points by scanning
    double best = 0.0, wpk = 0.0;
    for (int i = -20000; i <= 20000; ++i) {
      const double w = 1.0 + i * target * 1e-3;
      const double p = s.pi(w);
      if (p > best) best = p, wpk = w;
    }
    auto half = [&](double dir) {
      double lo = wpk, hi = wpk + dir * 10.0 * target;
      for (int it = 0; it < 80; ++it) {
        const double mid = 0.5 * (lo + hi);
        (s.pi(mid) > 0.5 * best ? lo : hi) = mid;
      }
      return lo;
    };
    const double fwhm = half(1.0) - half(-1.0);
    EXPECT_NEAR(wpk, 1.0, 0.05);
    EXPECT_NEAR(fwhm, target, 0.05 * target) << "scale " << scale;
  }
}

TEST(Fano, PhaseConventionInvariance) {
  const FanoSolver s(ohmic(0.2, 2.0, 1.0), 1.0);
  const auto c = alpha_beta(s, s.grid());
  const auto p0 = density_values(c);
  for (double th : {0.3, 1.7, -2.9}) {
    const auto p = density_values(apply_phase(c, th));
    for (std::size_t i = 0; i < p.size(); ++i) EXPECT_NEAR(p[i], p0[i], 1e-12 * (1.0 + p0[i]));
  }
}

TEST(Fano, GammaDeltaKernels) {
  const auto V = ohmic(0.2, 2.0, 1.0);
  const FanoSolver s(V, 1.0);
  const std::vector<double> grid{0.3, 0.8, 1.0, 1.4, 3.0};
  const auto c = alpha_beta(s, grid);
  const auto k = gamma_delta_kernels(c, V);
  const Coupling cp(V);
  for (std::size_t i = 0; i < grid.size(); ++i)
    for (std::size_t j = 0; j < grid.size(); ++j) {
      const auto ii = static_cast<Eigen::Index>(i), jj = static_cast<Eigen::Index>(j);
      const cplx lhs = k.delta(ii, jj) * (grid[i] + grid[j]);
      const cplx rhs = cp.v(grid[j]) * 1.0 * c.alpha[i] / (grid[i] + 1.0);
      EXPECT_NEAR(std::abs(lhs - rhs), 0.0, 1e-14);
      if (i != j) {
        const cplx g = k.gamma_offdiag(i, j);
        EXPECT_TRUE(std::isfinite(g.real()) && std::isfinite(g.imag()));
        EXPECT_NEAR(std::abs(g - c.alpha[i] / (grid[i] + 1.0) * cp.v(grid[j]) / (grid[i] - grid[j])), 0.0, 1e-14);
      } else {
        EXPECT_EQ(k.gamma_principal(ii, jj), 0.0);
        EXPECT_EQ(k.gamma_diagonal[i], c.Y[i]);
      }
    }
}

TEST(Fano, ZeroCouplingRejected) {
  CouplingSpectrum V = exp_coupling(50);
  for (auto& v : V.v_values) v = 0.0;
  try {
    FanoSolver s(V, 1.0);
    ADD_FAILURE();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::ZeroCoupling);
  }
}

TEST(Fano, PositivityViolationRejected) {
  try {
    FanoSolver s(ohmic(1.0, 2.0, 1.0), 1.0);
    ADD_FAILURE();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::PositivityViolation);
  }
}
