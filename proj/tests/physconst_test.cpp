#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "vdw/lifshitz.hpp"
#include "vdw/physconst.hpp"

using namespace vdw;

namespace {

bool same_to_sig_figs(double a, double b, int digits) {
  return std::abs(a - b) <= 0.5 * std::pow(10.0, std::floor(std::log10(std::abs(b))) - digits + 1);
}

}  // namespace

TEST(PhysConst, ElectronVoltFactorMatchesFourFigures) {
  EXPECT_TRUE(same_to_sig_figs(phys::ev_to_angular(1.0), 1.519e15, 4));
  EXPECT_EQ(phys::ev_to_angular(0.0), 0.0);
  EXPECT_TRUE(same_to_sig_figs(phys::ev_to_angular(0.035), 5.32e13, 3));
}

TEST(PhysConst, PolarizabilityUnitMatchesThreeFigures) {
  EXPECT_TRUE(same_to_sig_figs(phys::au_polarizability_to_m3, 1.48e-31, 3));
}

TEST(PhysConst, NegativeEnergyIsDomainError) {
  EXPECT_THROW(phys::ev_to_angular(-1e-3), DomainError);
  EXPECT_THROW(phys::angular_to_ev(-1.0), DomainError);
}

TEST(PhysConst, RoundTripsAreIdentity) {
  for (double e : {1e-4, 0.035, 1.18, 2.1, 1e4}) {
    EXPECT_NEAR(phys::angular_to_ev(phys::ev_to_angular(e)) / e, 1.0, 1e-12);
    EXPECT_NEAR(phys::au_to_angular(phys::angular_to_au(e * 1e15)) / (e * 1e15), 1.0, 1e-12);
  }
  for (double c3 : {1e-3, 1.711, 250.0}) {
    EXPECT_NEAR(c3_to_au(C3Value::from_au(c3).value_SI).value_au / c3, 1.0, 1e-12);
  }
}

TEST(PhysConst, C3UnitsAreConsistent) {
  EXPECT_EQ(c3_to_au(0.0).value_au, 0.0);
  EXPECT_EQ(c3_to_au(0.0).value_SI, 0.0);
  const auto one = C3Value::from_au(1.0);
  EXPECT_TRUE(same_to_sig_figs(one.value_SI, 6.46e-49, 3));
  const auto v = c3_to_au(3.3e-49);
  EXPECT_NEAR(v.value_SI / (v.value_au * phys::hartree_in_joule * phys::au_polarizability_to_m3), 1.0, 1e-14);
}

TEST(PhysConst, NonFiniteC3IsDomainError) {
  EXPECT_THROW(c3_to_au(std::numeric_limits<double>::quiet_NaN()), DomainError);
  EXPECT_THROW(c3_to_au(std::numeric_limits<double>::infinity()), DomainError);
}

TEST(PhysConst, FirstMatsubaraFrequencyAtRoomTemperature) {
  EXPECT_TRUE(same_to_sig_figs(matsubara_frequency(300.0, 1), 2.47e14, 3));
  EXPECT_EQ(matsubara_frequency(300.0, 0), 0.0);
  EXPECT_DOUBLE_EQ(matsubara_frequency(300.0, 1850), 1850 * matsubara_frequency(300.0, 1));
}
