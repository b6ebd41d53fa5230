#include <gtest/gtest.h>

#include <random>

#include "srf/checks.hpp"
#include "srf/rrf_system.hpp"

using namespace srf;

namespace {
LatticeState standard(std::size_t n = 45) {
  return build_lattice(ProfileSpec::cos_quartic(100.0, 0.1), n, Placement::GaussianConcentrated);
}
}  // namespace

TEST(RrfSystem, PackUnpackRoundTrip) {
  const LatticeState st = standard(11);
  const Eigen::VectorXd l = pack(st);
  ASSERT_EQ(static_cast<std::size_t>(l.size()), system_dimension(11));
  EXPECT_EQ(l[0], st.s[0]);
  EXPECT_EQ(l[1], st.a[0]);
  EXPECT_EQ(l[2], st.s[1]);
  const LatticeState back = unpack(l, 3.5);
  EXPECT_EQ(back.s, st.s);
  EXPECT_EQ(back.a, st.a);
  EXPECT_EQ(back.time, 3.5);
}

TEST(RrfSystem, MatrixMatchesFiniteDifferences) {
  CheckOptions opt;
  opt.lattice_states = 40;
  const SuiteResult r = check_partials(opt);
  EXPECT_TRUE(r.passed) << r.worst << " " << r.detail;
}

TEST(RrfSystem, EdgeEquationsHoldForSolvedVelocities) {
  for (std::size_t n : {11u, 21u, 45u}) {
    const LatticeState st = standard(n);
    EXPECT_LE(simplicial_residuals(st, velocity_field(st)).max_abs(), 1e-8);
  }
}

TEST(RrfSystem, FlippedMomentArmBreaksTheEdgeEquations) {
  const LatticeState st = standard();
  EXPECT_GT(simplicial_residuals(st, velocity_field(st, AssemblyFault::FlipAlphaMomentArm)).max_abs(), 1e-3);
}

TEST(RrfSystem, VelocitiesScaleInverselyWithSize) {
  const LatticeState st = standard(21);
  LatticeState big = st;
  for (double& v : big.s) v *= 3.0;
  for (double& v : big.a) v *= 3.0;
  const Eigen::VectorXd v1 = velocity_field(st), v3 = velocity_field(big);
  EXPECT_LE((v3 * 3.0 - v1).norm(), 1e-10 * v1.norm());
}

TEST(RrfSystem, MirrorSymmetricStateHasMirrorSymmetricVelocities) {
  const LatticeState st = standard();
  const Eigen::VectorXd v = velocity_field(st);
  const Eigen::Index d = v.size();
  for (Eigen::Index k = 0; k < d; ++k) EXPECT_NEAR(v[k], v[d - 1 - k], 1e-10 * v.cwiseAbs().maxCoeff());
}

TEST(RrfSystem, NeckShrinksAndLobesShrinkSlower) {
  const LatticeState st = standard();
  const Eigen::VectorXd v = velocity_field(st);
  const Measurement m = measure(st);
  const double waist_rate = v[2 * static_cast<Eigen::Index>(m.waist_index)] / st.s[m.waist_index];
  const double lobe_rate = v[2 * static_cast<Eigen::Index>(m.lobe_index_lo)] / st.s[m.lobe_index_lo];
  EXPECT_LT(waist_rate, 0.0);
  EXPECT_LT(waist_rate, lobe_rate);
}

TEST(RrfSystem, NegativeDualAreaIsReported) {
  LatticeState st;
  st.s = {1.0, 3.0, 1.0};
  st.a = {1.2, 1.2};  // valid blocks, circumcenters outside
  EXPECT_TRUE(is_valid(st));
  EXPECT_THROW((void)ricci(st), SingularGeometryError);
}

TEST(RrfSystem, SingularMatrixIsRejected) {
  FlowSystem sys;
  sys.matrix = Eigen::MatrixXd::Zero(3, 3);
  sys.rhs = Eigen::VectorXd::Ones(3);
  EXPECT_THROW(solve_velocities(sys), SolverError);
}

TEST(RrfSystem, ConditionNumberOfDiagonal) {
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(3, 3);
  A.diagonal() << 4.0, -0.5, 2.0;
  EXPECT_NEAR(condition_number(A), 8.0, 1e-12);
}

TEST(RrfSystem, JacobianDiagnosticsOnTheStandardLattice) {
  const JacobianDiagnostics d = jacobian_diagnostics(standard());
  ASSERT_TRUE(d.available);
  EXPECT_GT(d.condition_number_J, 1.0);
  EXPECT_TRUE(std::isfinite(d.condition_number_M));
  EXPECT_EQ(d.J.rows(), 89);
}
