#include <gtest/gtest.h>

#include <cmath>

#include "srf/lattice.hpp"
#include "srf/testing/coordinate_oracle.hpp"

using namespace srf;

namespace {
const ProfileSpec kStandard = ProfileSpec::cos_quartic(100.0, 0.1);
}

TEST(Profile, CosQuarticValues) {
  EXPECT_NEAR(kStandard.radius(0.0), 10.0, 1e-12);
  EXPECT_NEAR(kStandard.radius(kStandard.half_length()), 0.0, 1e-12);
  // Lobe maximum where cos^3 = 1 / (4 (1 - rho0)).
  const double c = std::cbrt(1.0 / (4.0 * 0.9));
  EXPECT_NEAR(kStandard.radius(100.0 * std::acos(c)), 100.0 * (c - 0.9 * c * c * c * c), 1e-10);
  EXPECT_NEAR(kStandard.radius(100.0 * std::acos(c)), 48.935845514, 1e-8);
}

TEST(Profile, SphereAndParabolicVariant) {
  const ProfileSpec s = ProfileSpec::sphere(10.0);
  EXPECT_NEAR(s.radius(5.0), 10.0 * std::cos(0.5), 1e-14);
  const ProfileSpec ak = ProfileSpec::angenent_knopf(100.0, 0.1);
  const double edge = 100.0 * kPi / 4.0;
  EXPECT_NEAR(ak.radius(edge - 1e-9), ak.radius(edge + 1e-9), 1e-6);
  EXPECT_NEAR(ak.radius(0.0), 100.0 * std::sqrt(0.1), 1e-12);
}

TEST(Profile, InvalidParametersAreRejected) {
  EXPECT_THROW(ProfileSpec::cos_quartic(-1.0, 0.1).validate(), ConfigError);
  EXPECT_THROW(ProfileSpec::cos_quartic(100.0, 0.0).validate(), ConfigError);
  EXPECT_THROW(ProfileSpec::angenent_knopf(100.0, -0.5).validate(), ConfigError);
  EXPECT_THROW(parse_profile_kind("torus"), ConfigError);
  EXPECT_EQ(parse_profile_kind(to_string(ProfileKind::AngenentKnopf)), ProfileKind::AngenentKnopf);
}

TEST(Lattice, BuiltStateSamplesTheProfile) {
  const LatticeState st = build_lattice(kStandard, 45, Placement::GaussianConcentrated);
  ASSERT_EQ(st.s.size(), 45u);
  ASSERT_EQ(st.a.size(), 44u);
  const auto c = axial_coordinates(st);
  EXPECT_EQ(c[22], 0.0);
  for (std::size_t i = 0; i < 45; ++i) EXPECT_NEAR(kIcosaCircumradius * st.s[i], kStandard.radius(c[i]), 1e-9);
}

TEST(Lattice, BuiltStateIsMirrorSymmetric) {
  const LatticeState st = build_lattice(kStandard, 45, Placement::GaussianConcentrated);
  for (std::size_t i = 0; i < 45; ++i) EXPECT_EQ(st.s[i], st.s[44 - i]);
  for (std::size_t i = 0; i < 44; ++i) EXPECT_EQ(st.a[i], st.a[43 - i]);
}

TEST(Lattice, UniformPlacementHasEqualSpacing) {
  const LatticeState st = build_lattice(kStandard, 21, Placement::Uniform);
  const double h = 2.0 * kStandard.half_length() / 22.0;
  for (double a : st.a) EXPECT_NEAR(a, h, 1e-9);
}

TEST(Lattice, ConcentratedPlacementIsFinestAtTheWaist) {
  const LatticeState st = build_lattice(kStandard, 45, Placement::GaussianConcentrated);
  EXPECT_LT(st.a[21], st.a[10]);
  EXPECT_LT(st.a[10], st.a[0]);
}

TEST(Lattice, MeasurementOfTheStandardProfile) {
  const LatticeState st = build_lattice(kStandard, 45, Placement::GaussianConcentrated);
  const Measurement m = measure(st);
  EXPECT_NEAR(m.waist_radius, 10.0, 1e-9);
  EXPECT_EQ(m.waist_index, 22u);
  EXPECT_GT(m.lobe_radius, 45.0);
  EXPECT_LE(m.lobe_radius, 48.935845515);
  EXPECT_EQ(m.lobe_index_lo + m.lobe_index_hi, 44u);
}

TEST(Lattice, InvalidInputs) {
  EXPECT_THROW(build_lattice(kStandard, 44, Placement::Uniform), ConfigError);
  EXPECT_THROW(build_lattice(kStandard, 3, Placement::Uniform), ConfigError);
  LatticeState st = build_lattice(kStandard, 11, Placement::Uniform);
  st.s[3] = -1.0;
  EXPECT_THROW(validate(st), SingularGeometryError);
  st = build_lattice(kStandard, 11, Placement::Uniform);
  st.a[4] = 1e-6;
  try {
    validate(st);
    FAIL() << "expected DegenerateBlockError";
  } catch (const DegenerateBlockError& e) {
    EXPECT_EQ(e.layer(), 4);
  }
}

TEST(Lattice, DualAreasMatchCoordinatePieces) {
  for (std::size_t n : {11u, 21u, 45u}) {
    const LatticeState st = build_lattice(kStandard, n, Placement::GaussianConcentrated);
    const DualMetrics d = dual_metrics(st);
    const srf::testing::DualAreaOracle o(st);
    const double L2 = std::pow(*std::max_element(st.s.begin(), st.s.end()), 2);
    for (std::size_t i = 0; i < n; ++i) {
      EXPECT_NEAR(d.area_s_star[i], o.s_star[i], 1e-10 * L2) << i;
      EXPECT_NEAR(d.area_alpha_star[i], kSqrt3 / 4.0 * st.s[i] * st.s[i], 1e-12 * L2);
    }
    for (std::size_t i = 0; i + 1 < n; ++i) {
      EXPECT_NEAR(d.area_a_star[i], o.a_star[i], 1e-10 * L2) << i;
      EXPECT_NEAR(d.area_sigma_star[i], o.sigma_star[i], 1e-10 * L2) << i;
    }
  }
}

TEST(Lattice, CylinderHasNoCurvatureAlongTheAxis) {
  LatticeState st;
  st.s.assign(9, 2.0);
  st.a.assign(8, 1.5);
  const DualMetrics d = dual_metrics(st);
  for (std::size_t i = 1; i + 1 < 9; ++i) EXPECT_NEAR(d.eps_s[i], 0.0, 1e-14);
  for (double e : d.eps_a) EXPECT_NEAR(e, kPi / 3.0, 1e-14);
  for (std::size_t i = 1; i + 1 < 9; ++i) EXPECT_NEAR(d.alpha[i], 1.5, 1e-14);
}

TEST(Lattice, WellCenterednessMargin) {
  LatticeState st;
  st.s = {3.0, 1.0, 1.0};
  st.a = {1.5, 1.0};
  const auto m = well_centeredness(st);
  EXPECT_NEAR(m[0], 1.5 - std::sqrt(3.0 * 2.0 / 3.0), 1e-15);
  EXPECT_NEAR(m[1], 1.0, 1e-15);
  const auto r = well_centeredness_ratio(st);
  EXPECT_NEAR(r[0], 1.5 / std::sqrt(2.0), 1e-15);
  EXPECT_TRUE(std::isinf(r[1]));
}

TEST(Lattice, FaceCircumcenterInsideTrapezoidIffAxialEdgeIsLongEnough) {
  // The signed arms to the parallel edges are positive exactly when
  // a^2 > max(s_base, s_cap) |s_base - s_cap| / 2.
  for (double sb : {1.0, 2.0, 5.0})
    for (double sc : {0.5, 1.5, 4.0}) {
      if (sb == sc) continue;
      const double edge = std::sqrt(std::max(sb, sc) * std::abs(sb - sc) / 2.0);
      const BlockMetrics in = block_metrics({1.01 * edge, sb, sc});
      EXPECT_GT(std::min(in.m_sbase_sigma, in.m_scap_sigma), 0.0);
      const BlockMetrics out = block_metrics({0.99 * edge, sb, sc});
      EXPECT_LT(std::min(out.m_sbase_sigma, out.m_scap_sigma), 0.0);
    }
}
