#include <gtest/gtest.h>

#include <cmath>

#include "srf/integrator.hpp"

using namespace srf;

namespace {
LatticeState standard() {
  return build_lattice(ProfileSpec::cos_quartic(100.0, 0.1), 45, Placement::GaussianConcentrated, PlacementLaw{});
}

Eigen::VectorXd integrate(const LatticeState& st, double t_end, int steps) {
  LatticeState s = st;
  for (int k = 0; k < steps; ++k) s = step_rk4(s, t_end / steps);
  return pack(s);
}
}  // namespace

TEST(Integrator, Rk4IsFourthOrder) {
  const LatticeState st = standard();
  const Eigen::VectorXd ref = integrate(st, 0.4, 64);
  const double e1 = (integrate(st, 0.4, 4) - ref).norm();
  const double e2 = (integrate(st, 0.4, 8) - ref).norm();
  EXPECT_GT(std::log2(e1 / e2), 3.7);
}

TEST(Integrator, StepAdvancesTime) {
  const LatticeState st = standard();
  const StepResult r = step_rk4_ex(st, 0.02);
  EXPECT_DOUBLE_EQ(r.state.time, 0.02);
  EXPECT_EQ(r.first_velocity.size(), 89);
  EXPECT_GT(r.condition_estimate, 1.0);
}

TEST(Integrator, RejectedStepNamesStageAndLayer) {
  LatticeState st = standard();
  try {
    (void)step_rk4(st, 50.0);
    FAIL() << "expected StepError";
  } catch (const StepError& e) {
    EXPECT_GE(e.stage(), 0);
    EXPECT_LE(e.stage(), 4);
    EXPECT_NE(std::string(e.what()).find("RK4"), std::string::npos);
  }
}

TEST(Integrator, StepLimitOutcome) {
  FlowConfig cfg;
  cfg.max_steps = 5;
  const RunResult r = run(standard(), cfg);
  EXPECT_EQ(r.outcome, Outcome::StepLimit);
  EXPECT_EQ(r.steps, 5u);
  ASSERT_EQ(r.trajectory.size(), 6u);
  EXPECT_EQ(r.trajectory.front().time, 0.0);
  for (std::size_t k = 1; k < r.trajectory.size(); ++k) EXPECT_GT(r.trajectory[k].time, r.trajectory[k - 1].time);
  EXPECT_EQ(r.snapshots.back().reason, "final");
}

TEST(Integrator, RecordsCarryDiagnostics) {
  FlowConfig cfg;
  cfg.max_steps = 4;
  cfg.diagnostics_every = 2;
  const RunResult r = run(standard(), cfg);
  const TrajectoryRecord& first = r.trajectory.front();
  EXPECT_NEAR(first.waist_radius, 10.0, 1e-9);
  EXPECT_NEAR(first.radius_gap, first.lobe_radius - first.waist_radius, 1e-12);
  EXPECT_GT(first.condition_number, 1.0);
  EXPECT_TRUE(std::isfinite(first.condition_number_J));
  EXPECT_TRUE(std::isnan(r.trajectory[1].condition_number_J));
  EXPECT_LE(first.residual_max, 1e-8);
}

TEST(Integrator, WithoutRemeshingTheRunFailsEarly) {
  FlowConfig cfg;
  cfg.remesh_enabled = false;
  const RunResult r = run(standard(), cfg);
  EXPECT_EQ(r.outcome, Outcome::Failed);
  EXPECT_FALSE(r.error.empty());
  EXPECT_LT(r.last_state.time, 10.0);
  EXPECT_TRUE(r.remesh_events.empty());
}

TEST(Integrator, RemeshEventsAreLogged) {
  FlowConfig cfg;
  cfg.max_time = 6.0;
  const RunResult r = run(standard(), cfg);
  ASSERT_NE(r.outcome, Outcome::Failed) << r.error;
  ASSERT_FALSE(r.remesh_events.empty());
  for (const RemeshEvent& e : r.remesh_events) {
    EXPECT_GT(e.min_margin_after, e.min_margin_before);
    EXPECT_LT(e.trigger_ratio, 1.0 - cfg.remesh.slack + 1e-12);
  }
  bool flagged = false;
  for (const auto& rec : r.trajectory) flagged = flagged || rec.remesh_flag;
  EXPECT_TRUE(flagged);
}

TEST(Integrator, IdenticalConfigsGiveIdenticalTrajectories) {
  FlowConfig cfg;
  cfg.max_time = 2.0;
  const RunResult a = run(standard(), cfg), b = run(standard(), cfg);
  ASSERT_EQ(a.trajectory.size(), b.trajectory.size());
  for (std::size_t k = 0; k < a.trajectory.size(); ++k) {
    EXPECT_EQ(a.trajectory[k].waist_radius, b.trajectory[k].waist_radius);
    EXPECT_EQ(a.trajectory[k].condition_number, b.trajectory[k].condition_number);
  }
}

TEST(Integrator, ConfigValidation) {
  FlowConfig cfg;
  cfg.dt = 0.0;
  EXPECT_THROW(cfg.validate(), ConfigError);
  cfg = FlowConfig{};
  cfg.pinch_threshold = 1.5;
  EXPECT_THROW(cfg.validate(), ConfigError);
  cfg = FlowConfig{};
  cfg.remesh.slack = 1.0;
  EXPECT_THROW(cfg.validate(), ConfigError);
}
