#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "oracles.hpp"
#include "vdw/lifshitz.hpp"

using namespace vdw;

namespace {

const double omega_he = phys::ev_to_angular(1.18);
const double wp_au = 1.37e16;
const double gamma_au = phys::ev_to_angular(0.035);

PolarizabilityModel helium() { return PolarizabilityModel::oscillator(315.63, omega_he); }

const std::vector<double>& table_separations() {
  static const std::vector<double> a{3e-9, 5e-9, 10e-9, 15e-9, 20e-9, 25e-9, 50e-9, 75e-9, 100e-9, 125e-9, 150e-9};
  return a;
}

}  // namespace

TEST(Geometry, CharacteristicFrequency) {
  const Geometry g(150e-9);
  EXPECT_DOUBLE_EQ(g.omega_c(), phys::speed_of_light / 300e-9);
  EXPECT_DOUBLE_EQ(g.zeta(2.0 * g.omega_c()), 2.0);
  EXPECT_THROW(Geometry(0.0), DomainError);
}

TEST(Reflection, Limits) {
  for (double eps : {1.5, 4.88, 11.66, 100.0}) {
    const auto r = reflection_coeffs(eps, 0.0, 0.7);
    EXPECT_DOUBLE_EQ(r.r_par, (eps - 1.0) / (eps + 1.0));
    EXPECT_EQ(r.r_perp, 0.0);
  }
  const auto vac = reflection_coeffs(1.0, 2.0, 3.0);
  EXPECT_EQ(vac.r_par, 0.0);
  EXPECT_EQ(vac.r_perp, 0.0);
  const auto ideal = reflection_coeffs(ideal_metal_eps, 2.0, 3.0);
  EXPECT_EQ(ideal.r_par, 1.0);
  EXPECT_EQ(ideal.r_perp, 1.0);
  EXPECT_THROW(reflection_coeffs(2.0, 2.0, 1.0), DomainError);
  EXPECT_THROW(reflection_coeffs(0.5, 1.0, 1.0), DomainError);
}

TEST(Reflection, BoundedForPassiveMedia) {
  for (double eps : {1.0, 1.01, 2.0, 50.0, 1e6}) {
    for (double zeta : {0.0, 1e-3, 1.0, 30.0}) {
      for (double dy : {0.0, 1e-4, 0.5, 10.0}) {
        const auto r = reflection_coeffs(eps, zeta, zeta + dy);
        EXPECT_GE(r.r_par, 0.0);
        EXPECT_LE(r.r_par, 1.0);
        EXPECT_GE(r.r_perp, 0.0);
        EXPECT_LE(r.r_perp, 1.0);
      }
    }
  }
}

TEST(Integrand, HandEvaluatedPoint) {
  const double s2 = std::sqrt(2.0);
  const double rp = (2.0 - s2) / (2.0 + s2);
  const double rs = (s2 - 1.0) / (s2 + 1.0);
  EXPECT_NEAR(integrand(2.0, 1.0, 1.0), std::exp(-1.0) * (2.0 * rp + (rs - rp)), 1e-15);
  EXPECT_DOUBLE_EQ(integrand(ideal_metal_eps, 0.3, 1.7), std::exp(-1.7) * 2.0 * 1.7 * 1.7);
  EXPECT_EQ(integrand(1.0, 0.3, 1.7), 0.0);
}

TEST(MatsubaraTerm, IdealMetalClosedForm) {
  for (double zeta : {1e-3, 0.1, 1.0, 10.0, 40.0}) {
    const auto t = matsubara_term(zeta, ideal_metal_eps, 42.0);
    EXPECT_NEAR(t.value / (42.0 * oracle::ideal_y_integral(zeta)), 1.0, 1e-9) << zeta;
  }
}

TEST(MatsubaraTerm, VanishingCases) {
  EXPECT_EQ(matsubara_term(0.5, 3.0, 0.0).value, 0.0);
  EXPECT_EQ(matsubara_term(0.5, 1.0, 10.0).value, 0.0);
  const MatsubaraSpec spec{300.0};
  EXPECT_THROW(matsubara_term(0, 2.0, 1.0, Geometry(3e-9), spec), DomainError);
  const Geometry g(10e-9);
  EXPECT_DOUBLE_EQ(matsubara_term(7, 2.0, 3.0, g, spec).value,
                   matsubara_term(g.zeta(spec.xi(7)), 2.0, 3.0).value);
}

TEST(ComputeC3, VacuumWallGivesZero) {
  const auto p = compute_c3(Geometry(3e-9), MatsubaraSpec{300.0}, DielectricModel::static_eps(1.0), helium());
  EXPECT_EQ(p.C3.value_au, 0.0);
  EXPECT_EQ(p.F, 0.0);
}

TEST(ComputeC3, FreeEnergyRelation) {
  for (double a : {3e-9, 40e-9, 150e-9}) {
    const auto p = compute_c3(Geometry(a), MatsubaraSpec{300.0}, DielectricModel::drude(wp_au, gamma_au), helium());
    EXPECT_GT(p.C3.value_au, 0.0);
    EXPECT_LT(p.F, 0.0);
    EXPECT_NEAR(p.F * a * a * a / -p.C3.value_SI, 1.0, 1e-12);
  }
}

TEST(ComputeC3, PreconditionsAndRanges) {
  const MatsubaraSpec spec{300.0};
  EXPECT_THROW(compute_c3(Geometry(2e-6), spec, DielectricModel::ideal_metal(), helium()), DomainError);
  EXPECT_THROW(compute_c3(Geometry(3e-9), MatsubaraSpec{0.0}, DielectricModel::ideal_metal(), helium()),
               DomainError);
  const auto short_table = PolarizabilityModel::tabulated(TabulatedAlpha({0.0, 1e15, 2e15}, {10.0, 5.0, 2.0}));
  EXPECT_THROW(compute_c3(Geometry(3e-9), spec, DielectricModel::ideal_metal(), short_table), RangeError);
  const MatsubaraSpec capped{300.0, AutoTruncation{.l_cap = 5}};
  EXPECT_THROW(compute_c3(Geometry(3e-9), capped, DielectricModel::ideal_metal(), helium()), NumericalError);
}

TEST(ComputeC3, DoublingLmaxChangesLessThanTolerance) {
  const auto wall = DielectricModel::drude(wp_au, gamma_au);
  for (double a : {3e-9, 30e-9, 150e-9}) {
    const auto p = compute_c3(Geometry(a), MatsubaraSpec{300.0}, wall, helium());
    const auto q =
        compute_c3(Geometry(a), MatsubaraSpec{300.0, FixedTruncation{2 * p.diagnostics.l_used}}, wall, helium());
    EXPECT_LT(std::abs(q.C3.value_au / p.C3.value_au - 1.0), 1e-8) << a;
    EXPECT_EQ(q.diagnostics.l_used, 2 * p.diagnostics.l_used);
  }
}

TEST(ComputeC3, DecreasingInSeparationAndBoundedByIdealMetal) {
  const std::vector<DielectricModel> walls{DielectricModel::drude(wp_au, gamma_au), DielectricModel::plasma(wp_au),
                                           DielectricModel::static_eps(4.88), DielectricModel::static_eps(11.66)};
  const auto ideal = sweep(table_separations(), MatsubaraSpec{300.0}, DielectricModel::ideal_metal(), helium());
  for (const auto& w : walls) {
    const auto pts = sweep(table_separations(), MatsubaraSpec{300.0}, w, helium());
    ASSERT_EQ(pts.size(), table_separations().size());
    for (std::size_t i = 0; i < pts.size(); ++i) {
      EXPECT_LE(pts[i].C3.value_au, ideal[i].C3.value_au) << w.describe();
      if (i > 0) {
        EXPECT_LT(pts[i].C3.value_au, pts[i - 1].C3.value_au) << w.describe();
      }
    }
  }
}

TEST(ComputeC3, SmallSeparationApproachesNonrelativisticLimit) {
  const auto p = compute_c3(Geometry(1e-9), MatsubaraSpec{300.0}, DielectricModel::ideal_metal(), helium());
  const auto nr = compute_c3_nonrel(300.0, DielectricModel::ideal_metal(), helium());
  EXPECT_LT(std::abs(p.C3.value_au / nr.value_au - 1.0), 0.02);
}

TEST(ComputeC3, AgreesWithNaiveEvaluatorAtLargeSeparation) {
  const double a = 150e-9;
  const auto p = compute_c3(Geometry(a), MatsubaraSpec{300.0}, DielectricModel::plasma(wp_au), helium());
  oracle::Naive n;
  n.eps = [](double xi) { return 1.0 + wp_au * wp_au / (xi * xi); };
  n.alpha = [](double xi) { return 315.63 / (1.0 + (xi / omega_he) * (xi / omega_he)); };
  EXPECT_NEAR(p.C3.value_au / oracle::naive_c3_au(a, 300.0, n), 1.0, 1e-6);
}

TEST(Nonrel, IdealMetalOscillator) {
  const double exact = oracle::ideal_oscillator_c3_au(315.63, 1.18);
  EXPECT_NEAR(exact, 1.711, 5e-4);
  const auto nr = compute_c3_nonrel(300.0, DielectricModel::ideal_metal(), helium());
  EXPECT_LT(std::abs(nr.value_au / exact - 1.0), 5e-3);
  EXPECT_EQ(compute_c3_nonrel(300.0, DielectricModel::static_eps(1.0), helium()).value_au, 0.0);
}

TEST(Integral, IdealMetalOscillatorIsExact) {
  const auto c = compute_c3_integral(DielectricModel::ideal_metal(), helium());
  EXPECT_NEAR(c.value_au / oracle::ideal_oscillator_c3_au(315.63, 1.18), 1.0, 1e-6);
}

TEST(Integral, MatchesMatsubaraSumForDrudeGold) {
  const auto wall = DielectricModel::drude(wp_au, gamma_au);
  const auto sum = compute_c3_nonrel(300.0, wall, helium());
  const auto integral = compute_c3_integral(wall, helium());
  EXPECT_LT(std::abs(sum.value_au / integral.value_au - 1.0), 5e-3);
}

TEST(Sweep, ConsistencyAndEdgeCases) {
  const auto wall = DielectricModel::drude(wp_au, gamma_au);
  EXPECT_TRUE(sweep({}, MatsubaraSpec{300.0}, wall, helium()).empty());
  const std::vector<double> one{20e-9};
  const auto s = sweep(one, MatsubaraSpec{300.0}, wall, helium());
  ASSERT_EQ(s.size(), 1u);
  EXPECT_EQ(s[0].C3.value_au, compute_c3(Geometry(20e-9), MatsubaraSpec{300.0}, wall, helium()).C3.value_au);
  const std::vector<double> unsorted{20e-9, 10e-9};
  EXPECT_THROW(sweep(unsorted, MatsubaraSpec{300.0}, wall, helium()), DomainError);
  const std::vector<double> negative{-1e-9};
  EXPECT_THROW(sweep(negative, MatsubaraSpec{300.0}, wall, helium()), DomainError);
}

TEST(Sweep, BitReproducible) {
  const auto wall = DielectricModel::drude(wp_au, gamma_au);
  const auto a = sweep(table_separations(), MatsubaraSpec{300.0}, wall, helium());
  const auto b = sweep(table_separations(), MatsubaraSpec{300.0}, wall, helium());
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_EQ(a[i].C3.value_SI, b[i].C3.value_SI);
}

TEST(SpectralGrid, PresetValuesAreUsed) {
  SpectralGrid grid(DielectricModel::drude(wp_au, gamma_au), helium(), 300.0);
  grid.preset_eps({7.0, 6.0}, 0.25);
  grid.ensure(3);
  EXPECT_EQ(grid.eps(1), 7.0);
  EXPECT_EQ(grid.eps(2), 6.0);
  EXPECT_DOUBLE_EQ(grid.eps(3), oracle::drude_eps(grid.xi(3), wp_au, gamma_au));
  EXPECT_EQ(grid.kk_truncation_bound(), 0.25);
  EXPECT_THROW(grid.preset_eps({1.0}, 0.0), ConfigError);
}
