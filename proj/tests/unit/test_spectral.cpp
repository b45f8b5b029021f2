#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "common.hpp"
#include "dampo/spectral.hpp"

using namespace dampo;
using dampo::test::figure_sets;

namespace {

// 30-digit reference moments (direct quadrature of the density, independent of the closed forms)
struct Ref {
  double m1, mi, mi2, m2;
};
const Ref kRef[] = {
    {0.27529752827018064, 11.046819180330045, 538.66666666666666, 0.1975},
    {4.7314300481393756, 0.34054721613897919, 4.0, 25.26},
    {1.7320385524924445, 1.523978629409984, 5.8666666666666667, 10.1875},
    {5.4388184713528769, 0.19894831035654175, 0.043564356435643564, 35.25},
};

SpectralDensity narrow_peak(double center, double width) {
  std::vector<double> w, p;
  const int n = 4001;
  for (int i = 0; i < n; ++i) {
    const double x = center + 40.0 * width * (2.0 * i / (n - 1) - 1.0);
    w.push_back(x);
    const double u = (x - center) / width;
    p.push_back(std::exp(-0.5 * u * u) / (width * std::sqrt(2.0 * std::numbers::pi)));
  }
  w.insert(w.begin(), 0.0);
  p.insert(p.begin(), 0.0);
  return make_tabulated_density(w, p, std::numeric_limits<double>::infinity());
}

}  // namespace

TEST(Spectral, NormalizationAndClosedFormsMatchReference) {
  for (std::size_t i = 0; i < figure_sets().size(); ++i) {
    SCOPED_TRACE(figure_sets()[i].name);
    const auto sd = test::density(figure_sets()[i]);
    EXPECT_NEAR(weighted_average(sd, [](double) { return 1.0; }), 1.0, 1e-9);
    const auto cf = closed_form_moments(sd);
    EXPECT_NEAR(cf.mean_omega, kRef[i].m1, 1e-12 * kRef[i].m1);
    EXPECT_NEAR(cf.mean_inv_omega, kRef[i].mi, 1e-12 * kRef[i].mi);
    EXPECT_NEAR(cf.mean_inv_omega_sq, kRef[i].mi2, 1e-12 * kRef[i].mi2);
    EXPECT_NEAR(cf.omega0_sq, kRef[i].m2, 1e-12 * kRef[i].m2);
    EXPECT_LT(cf.imag_residue, 1e-12);
    EXPECT_NEAR(weighted_average(sd, [](double w) { return w * w; }), kRef[i].m2, 1e-9 * kRef[i].m2);
    EXPECT_NEAR(weighted_average(sd, [](double w) { return w; }), kRef[i].m1, 1e-9 * kRef[i].m1);
    EXPECT_NEAR(weighted_average(sd, [](double w) { return 1.0 / w; }), kRef[i].mi, 1e-9 * kRef[i].mi);
    ASSERT_TRUE(sd.omega0_sq_hint());
    EXPECT_NEAR(*sd.omega0_sq_hint(), kRef[i].m2, 1e-14 * kRef[i].m2);
  }
}

TEST(Spectral, Fig2aSecondMoment) {
  const auto sd = make_parametric_density(0.01, 0.75, 0.25);
  EXPECT_NEAR(*sd.omega0_sq_hint(), 0.1975, 1e-15);
}

TEST(Spectral, RejectsNonPhysicalPoles) {
  auto bad = [](double G, cplx a, cplx b) {
    try {
      make_parametric_density(G, a, b);
    } catch (const Error& e) {
      return e.code() == ErrorCode::NonPhysicalPoles;
    }
    return false;
  };
  EXPECT_TRUE(bad(0.01, {0.75, 0.0}, {-0.25, 0.0}));
  EXPECT_TRUE(bad(0.01, {0.5, 5.0}, {0.5, 4.0}));    // not conjugate
  EXPECT_TRUE(bad(0.01, {-0.5, 5.0}, {-0.5, -5.0}));  // negative real part
  EXPECT_TRUE(bad(0.01, {0.5, 5.0}, {0.25, 0.0}));    // mixed
  EXPECT_TRUE(bad(-1.0, {0.75, 0.0}, {0.25, 0.0}));
}

TEST(Spectral, PointValues) {
  for (const auto& f : figure_sets()) {
    const auto sd = test::density(f);
    EXPECT_EQ(sd(0.0), 0.0);
    EXPECT_THROW(density_value(sd, -1e-3), Error);
  }
  // w^-4 tail: pi w^4 -> 2K/pi
  const auto sd = make_parametric_density(0.01, 0.75, 0.25);
  const double K = 1.0 * 0.26 * 0.76;
  EXPECT_NEAR(sd(1e4) * std::pow(1e4, 4), 2.0 * K / std::numbers::pi, 1e-6);
  EXPECT_NEAR(sd(1e5) * std::pow(1e5, 4), 2.0 * K / std::numbers::pi, 1e-8);
}

TEST(Spectral, ComplexPairDensityRealAndNonNegative) {
  const auto sd = make_parametric_density(10.0, {0.5, 5.0}, {0.5, -5.0});
  for (int i = 0; i < 10000; ++i) {
    const double w = 1e-4 * std::pow(1e9, i / 9999.0);
    const double v = sd(w);
    ASSERT_TRUE(std::isfinite(v));
    ASSERT_GE(v, 0.0) << "w = " << w;
  }
}

TEST(Spectral, TabulatedNodesExactAndTail) {
  std::vector<double> w{0.0, 0.5, 1.0, 1.5, 2.0, 3.0};
  std::vector<double> p{0.0, 0.3, 0.6, 0.4, 0.1, 0.05};
  // scale so the table integrates near 1; only node identity is checked here
  const auto sd = make_tabulated_density(w, p, 4.0);
  for (std::size_t i = 0; i < w.size(); ++i) EXPECT_EQ(density_value(sd, w[i]), p[i]);
  EXPECT_NEAR(sd(6.0), 0.05 * std::pow(3.0 / 6.0, 4), 1e-15);
  EXPECT_EQ(sd.kind(), DensityKind::Tabulated);
}

TEST(Spectral, DegenerateRates) {
  EXPECT_THROW(
      {
        try {
          closed_form_moments(make_parametric_density(0.25, 0.75, 0.25));
        } catch (const Error& e) {
          EXPECT_EQ(e.code(), ErrorCode::DegenerateRates);
          throw;
        }
      },
      Error);
}

TEST(Spectral, ValidateFig2aPasses) {
  const auto rep = validate(make_parametric_density(0.01, 0.75, 0.25));
  EXPECT_TRUE(rep.passed.all());
  EXPECT_LT(rep.normalization_residual, 1e-9);
  EXPECT_GE(rep.cauchy_schwartz_product, 1.0);
  EXPECT_LT(rep.mean_omega, std::sqrt(rep.second_moment));
}

TEST(Spectral, ValidateFlagsPiAtZero) {
  std::vector<double> w, p;
  for (int i = 0; i <= 200; ++i) {
    const double x = 0.05 * i;
    w.push_back(x);
    p.push_back(0.1 * std::exp(-x) + 0.9 * x * std::exp(-x));
  }
  const auto rep = validate(make_tabulated_density(w, p, 4.0));
  EXPECT_FALSE(rep.passed.pi_at_zero);
  EXPECT_NEAR(rep.pi_at_zero, 0.1, 1e-15);
  EXPECT_FALSE(rep.passed.all());
}

TEST(Spectral, NarrowPeakSaturatesCauchySchwartz) {
  const auto sd = narrow_peak(2.0, 1e-3);
  const auto rep = validate(sd);
  EXPECT_GE(rep.cauchy_schwartz_product, 1.0);
  EXPECT_LT(rep.cauchy_schwartz_product - 1.0, 1e-6);
  EXPECT_NEAR(rep.second_moment, 4.0, 1e-5);
}

TEST(Spectral, RandomSweepClosedFormsMatchQuadrature) {
  std::mt19937 rng(20240611);
  std::uniform_real_distribution<double> G(0.01, 10.0), re(0.05, 5.0), im(0.05, 8.0);
  std::bernoulli_distribution complex_pair(0.5);
  for (int k = 0; k < 50; ++k) {
    const double g = G(rng);
    cplx a, b;
    if (complex_pair(rng)) {
      a = {re(rng), im(rng)};
      b = std::conj(a);
    } else {
      a = re(rng);
      b = re(rng);
    }
    const auto sd = make_parametric_density(g, a, b);
    const auto cf = closed_form_moments(sd);
    SCOPED_TRACE(k);
    EXPECT_NEAR(weighted_average(sd, [](double w) { return w; }), cf.mean_omega, 1e-8 * cf.mean_omega);
    EXPECT_NEAR(weighted_average(sd, [](double w) { return 1.0 / w; }), cf.mean_inv_omega, 1e-8 * cf.mean_inv_omega);
    EXPECT_NEAR(weighted_average(sd, [](double w) { return w * w; }), cf.omega0_sq, 1e-8 * cf.omega0_sq);
    EXPECT_LE(cf.mean_omega * cf.mean_omega, cf.omega0_sq);
    EXPECT_GE(cf.mean_omega * cf.mean_inv_omega, 1.0);
    EXPECT_NEAR(weighted_average(sd, [](double) { return 1.0; }), 1.0, 1e-8);
  }
}

TEST(Spectral, QuadratureInvariantUnderDoubledLimit) {
  const auto sd = make_parametric_density(10.0, {0.5, 5.0}, {0.5, -5.0});
  AverageOptions a, b;
  b.quad.max_subdivisions = 2 * a.quad.max_subdivisions;
  auto f = [](double w) { return std::sqrt(w); };
  EXPECT_NEAR(weighted_average(sd, f, a), weighted_average(sd, f, b), 1e-12);
}

TEST(Spectral, OscillatorParamsCheck) {
  EXPECT_NO_THROW((OscillatorParams{1.0, 2.0, 1.0}.check()));
  EXPECT_THROW((OscillatorParams{1.0, 1.0, 2.0}.check()), Error);
  EXPECT_THROW((OscillatorParams{0.0, 1.0, 1.0}.check()), Error);
}
