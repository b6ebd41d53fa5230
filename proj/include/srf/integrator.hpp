#pragma once

// Fixed-step RK4 evolution of the lattice with remeshing and diagnostics.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "srf/errors.hpp"
#include "srf/lattice.hpp"
#include "srf/pinch.hpp"
#include "srf/remesher.hpp"
#include "srf/rrf_system.hpp"

namespace srf {

struct FlowConfig {
  double dt = 0.02;
  double pinch_threshold = 0.01;  ///< fraction of the initial waist radius
  std::size_t max_steps = 200000;
  bool remesh_enabled = true;
  RemeshPolicy remesh;
  std::size_t remesh_every = 0;        ///< also remesh unconditionally every this many steps (0 = never)
  bool dt_shrink = true;               ///< scale dt by (waist/waist0)^2 each time the waist halves
  std::size_t diagnostics_every = 0;   ///< cond_J sampling period in steps (0 = only at remesh events)
  std::size_t snapshot_every = 0;      ///< keep a snapshot every this many steps (0 = none)
  bool check_residuals = true;         ///< evaluate the edge-form residuals on every accepted step
  double max_time = std::numeric_limits<double>::infinity();

  void validate() const {
    if (!(dt > 0.0)) throw ConfigError("dt must be positive");
    if (!(pinch_threshold > 0.0 && pinch_threshold < 1.0)) throw ConfigError("pinch_threshold must lie in (0, 1)");
    remesh.validate();
  }
};

/// A rejected RK4 step; stage is 1..4, layer is the offending block or -1.
class StepError : public std::runtime_error {
 public:
  StepError(int stage, int layer, const std::string& what)
      : std::runtime_error(what), stage_(stage), layer_(layer) {}
  int stage() const noexcept { return stage_; }
  int layer() const noexcept { return layer_; }

 private:
  int stage_, layer_;
};

struct StepResult {
  LatticeState state;
  Eigen::VectorXd first_velocity;  ///< ldot at the start of the step
  double condition_estimate = 0.0;
};

namespace detail {
inline SolveResult stage_velocity(const Eigen::VectorXd& l, double t, int stage) {
  try {
    const LatticeState st = unpack(l, t);
    validate(st);
    return solve_velocities_ex(assemble(st));
  } catch (const DegenerateBlockError& e) {
    throw StepError(stage, e.layer(), "RK4 stage " + std::to_string(stage) + ": " + e.what());
  } catch (const std::exception& e) {
    throw StepError(stage, -1, "RK4 stage " + std::to_string(stage) + ": " + e.what());
  }
}
}  // namespace detail

inline StepResult step_rk4_ex(const LatticeState& st, double dt) {
  const Eigen::VectorXd l = pack(st);
  const SolveResult k1 = detail::stage_velocity(l, st.time, 1);
  const SolveResult k2 = detail::stage_velocity(l + 0.5 * dt * k1.velocities, st.time + 0.5 * dt, 2);
  const SolveResult k3 = detail::stage_velocity(l + 0.5 * dt * k2.velocities, st.time + 0.5 * dt, 3);
  const SolveResult k4 = detail::stage_velocity(l + dt * k3.velocities, st.time + dt, 4);
  const Eigen::VectorXd next =
      l + dt / 6.0 * (k1.velocities + 2.0 * k2.velocities + 2.0 * k3.velocities + k4.velocities);
  StepResult out;
  out.state = unpack(next, st.time + dt);
  try {
    validate(out.state);
  } catch (const DegenerateBlockError& e) {
    throw StepError(0, e.layer(), std::string("RK4 update: ") + e.what());
  } catch (const std::exception& e) {
    throw StepError(0, -1, std::string("RK4 update: ") + e.what());
  }
  out.first_velocity = k1.velocities;
  out.condition_estimate = k1.condition_estimate;
  return out;
}

inline LatticeState step_rk4(const LatticeState& st, double dt) { return step_rk4_ex(st, dt).state; }

struct TrajectoryRecord {
  double time = 0.0;
  double waist_radius = 0.0;
  double lobe_radius = 0.0;
  double radius_gap = 0.0;
  double condition_number = 0.0;  ///< cond_M (2-norm)
  double condition_number_J = std::numeric_limits<double>::quiet_NaN();
  bool remesh_flag = false;
  double min_wc_margin = 0.0;
  double residual_max = 0.0;   ///< largest scaled edge-form residual of the step's velocities
  int axial_sign_changes = 0;  ///< sign alternations of adot along the lattice
};

struct RemeshEvent {
  double time = 0.0;
  double trigger_ratio = 0.0;  ///< min a_i / bound_i that fired the remesh
  double cond_M_before = 0.0, cond_M_after = 0.0;
  double cond_J_before = 0.0, cond_J_after = 0.0;
  double min_margin_before = 0.0, min_margin_after = 0.0;
  double waist_before = 0.0, waist_after = 0.0;
  bool retry = false;  ///< forced by a rejected step rather than the well-centeredness test
};

enum class Outcome { Pinched, StepLimit, Failed };

inline std::string_view to_string(Outcome o) {
  switch (o) {
    case Outcome::Pinched: return "Pinched";
    case Outcome::StepLimit: return "StepLimit";
    case Outcome::Failed:
    default: return "Failed";
  }
}

struct Snapshot {
  std::size_t step = 0;
  std::string reason;  ///< "periodic", "remesh", "final"
  LatticeState state;
};

struct RunResult {
  std::vector<TrajectoryRecord> trajectory;
  std::vector<Snapshot> snapshots;
  std::vector<RemeshEvent> remesh_events;
  Outcome outcome = Outcome::StepLimit;
  std::string error;
  LatticeState last_state;
  double pinch_time_estimate = std::numeric_limits<double>::quiet_NaN();
  double initial_waist = 0.0;
  double initial_lobe = 0.0;
  double max_residual = 0.0;
  std::size_t steps = 0;
};

inline int sign_changes_axial(const Eigen::VectorXd& v) {
  int count = 0;
  double prev = 0.0;
  for (Eigen::Index j = 1; j < v.size(); j += 2) {
    const double x = v[j];
    if (x != 0.0 && prev != 0.0 && (x > 0.0) != (prev > 0.0)) ++count;
    if (x != 0.0) prev = x;
  }
  return count;
}

inline double min_margin(const LatticeState& st) {
  const auto m = well_centeredness(st);
  return m.empty() ? 0.0 : *std::min_element(m.begin(), m.end());
}

inline RunResult run(const LatticeState& initial, const FlowConfig& config) {
  config.validate();
  validate(initial);
  RunResult res;
  LatticeState st = initial;
  const Measurement m0 = measure(st);
  res.initial_waist = m0.waist_radius;
  res.initial_lobe = m0.lobe_radius;
  const double dt0 = config.dt;
  double dt = dt0;
  double waist_ref = m0.waist_radius;

  auto cond_J = [](const LatticeState& s) {
    const JacobianDiagnostics d = jacobian_diagnostics(s);
    return d.available ? d.condition_number_J : std::numeric_limits<double>::quiet_NaN();
  };

  auto do_remesh = [&](const LatticeState& before, bool retry, std::size_t step) -> LatticeState {
    RemeshEvent ev;
    ev.time = before.time;
    ev.retry = retry;
    ev.trigger_ratio = min_wc_ratio(before);
    ev.min_margin_before = min_margin(before);
    ev.waist_before = measure(before).waist_radius;
    try {
      ev.cond_M_before = condition_number(assemble(before).matrix);
      ev.cond_J_before = cond_J(before);
    } catch (const std::exception&) {
      ev.cond_M_before = ev.cond_J_before = std::numeric_limits<double>::quiet_NaN();
    }
    LatticeState after = remesh(before, config.remesh);
    ev.min_margin_after = min_margin(after);
    ev.waist_after = measure(after).waist_radius;
    try {
      ev.cond_M_after = condition_number(assemble(after).matrix);
      ev.cond_J_after = cond_J(after);
    } catch (const std::exception&) {
      ev.cond_M_after = ev.cond_J_after = std::numeric_limits<double>::quiet_NaN();
    }
    res.remesh_events.push_back(ev);
    res.snapshots.push_back({step, "remesh", after});
    return after;
  };

  std::size_t step = 0;
  for (;; ++step) {
    const Measurement m = measure(st);
    if (m.waist_radius < config.pinch_threshold * res.initial_waist) {
      res.outcome = Outcome::Pinched;
      break;
    }
    if (step >= config.max_steps || st.time >= config.max_time) {
      res.outcome = Outcome::StepLimit;
      break;
    }
    if (config.dt_shrink && m.waist_radius < 0.5 * waist_ref) {
      waist_ref = m.waist_radius;
      const double r = m.waist_radius / res.initial_waist;
      dt = dt0 * r * r;
    }

    bool remeshed = false;
    std::optional<StepResult> sr;
    try {
      const bool periodic = config.remesh_every > 0 && step > 0 && step % config.remesh_every == 0;
      if (config.remesh_enabled && (periodic || should_remesh(st, config.remesh))) {
        st = do_remesh(st, false, step);
        remeshed = true;
      }
      try {
        sr = step_rk4_ex(st, dt);
      } catch (const StepError&) {
        if (!config.remesh_enabled) throw;
        st = do_remesh(st, true, step);
        remeshed = true;
        sr = step_rk4_ex(st, dt);
      }
    } catch (const std::exception& e) {
      res.outcome = Outcome::Failed;
      res.error = e.what();
      break;
    }

    TrajectoryRecord rec;
    const Measurement mm = measure(st);
    rec.time = st.time;
    rec.waist_radius = mm.waist_radius;
    rec.lobe_radius = mm.lobe_radius;
    rec.radius_gap = mm.lobe_radius - mm.waist_radius;
    rec.remesh_flag = remeshed;
    rec.min_wc_margin = min_margin(st);
    rec.axial_sign_changes = sign_changes_axial(sr->first_velocity);
    rec.condition_number = condition_number(assemble(st).matrix);
    if (config.diagnostics_every > 0 && step % config.diagnostics_every == 0) rec.condition_number_J = cond_J(st);
    else if (remeshed && !res.remesh_events.empty()) rec.condition_number_J = res.remesh_events.back().cond_J_after;
    if (config.check_residuals) {
      rec.residual_max = simplicial_residuals(st, sr->first_velocity).max_abs();
      res.max_residual = std::max(res.max_residual, rec.residual_max);
    }
    res.trajectory.push_back(rec);
    if (config.snapshot_every > 0 && step % config.snapshot_every == 0) res.snapshots.push_back({step, "periodic", st});
    st = std::move(sr->state);
  }

  // Final sample so the trajectory ends at the terminal state.
  if (res.outcome != Outcome::Failed || res.trajectory.empty() || res.trajectory.back().time < st.time) {
    try {
      TrajectoryRecord rec;
      const Measurement mm = measure(st);
      rec.time = st.time;
      rec.waist_radius = mm.waist_radius;
      rec.lobe_radius = mm.lobe_radius;
      rec.radius_gap = mm.lobe_radius - mm.waist_radius;
      rec.min_wc_margin = min_margin(st);
      try {
        rec.condition_number = condition_number(assemble(st).matrix);
      } catch (const std::exception&) {
        rec.condition_number = std::numeric_limits<double>::quiet_NaN();
      }
      if (res.trajectory.empty() || res.trajectory.back().time < rec.time) res.trajectory.push_back(rec);
    } catch (const std::exception&) {
    }
  }
  res.steps = step;
  res.last_state = st;
  res.snapshots.push_back({step, "final", st});
  if (res.outcome == Outcome::Pinched) res.pinch_time_estimate = extrapolate_pinch_time(res.trajectory);
  return res;
}

}  // namespace srf
