#pragma once

// CSV layouts for lattice runs, continuum runs, snapshots and remesh events.
// Lengths are in the profile's units, times in flow-time units.

#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <ostream>
#include <string>
#include <vector>

#include "srf/comparison.hpp"
#include "srf/continuum.hpp"
#include "srf/csv.hpp"
#include "srf/errors.hpp"
#include "srf/integrator.hpp"
#include "srf/lattice.hpp"

namespace srf {

inline void write_trajectory(std::ostream& os, const std::vector<TrajectoryRecord>& traj) {
  csv::Writer w(os, {"t", "waist_radius", "lobe_radius", "radius_gap", "cond_M", "cond_J", "remesh_flag", "min_wc_margin",
                     "residual_max", "adot_sign_changes"});
  for (const auto& r : traj)
    w.row(r.time, r.waist_radius, r.lobe_radius, r.radius_gap, r.condition_number, r.condition_number_J, r.remesh_flag,
          r.min_wc_margin, r.residual_max, r.axial_sign_changes);
}

inline void write_continuum_trajectory(std::ostream& os, const std::vector<ContinuumRecord>& traj) {
  csv::Writer w(os, {"t", "waist_radius", "lobe_radius", "radius_gap", "proper_length"});
  for (const auto& r : traj) w.row(r.time, r.waist_radius, r.lobe_radius, r.radius_gap, r.proper_length);
}

/// One row per icosahedron: its edge, circumradius, axial coordinate, the
/// axial edge to the next one (empty for the last) and its well-centeredness margin.
inline void write_snapshot(std::ostream& os, const LatticeState& st) {
  csv::Writer w(os, {"index", "time", "s", "radius", "coordinate", "a_next", "wc_margin_next"});
  const std::vector<double> c = axial_coordinates(st);
  const std::vector<double> m = well_centeredness(st);
  const double nan = std::numeric_limits<double>::quiet_NaN();
  for (std::size_t i = 0; i < st.s.size(); ++i) {
    const bool has_next = i + 1 < st.s.size();
    w.row(i, st.time, st.s[i], kIcosaCircumradius * st.s[i], c[i], has_next ? st.a[i] : nan, has_next ? m[i] : nan);
  }
}

inline void write_events(std::ostream& os, const std::vector<RemeshEvent>& events) {
  csv::Writer w(os, {"t", "trigger_ratio", "cond_M_before", "cond_M_after", "cond_J_before", "cond_J_after",
                     "cond_J_ratio", "min_margin_before", "min_margin_after", "waist_before", "waist_after", "retry"});
  for (const auto& e : events)
    w.row(e.time, e.trigger_ratio, e.cond_M_before, e.cond_M_after, e.cond_J_before, e.cond_J_after,
          e.cond_J_after / e.cond_J_before, e.min_margin_before, e.min_margin_after, e.waist_before, e.waist_after,
          e.retry);
}

/// Outcome line read back by the comparison.
inline void write_summary(std::ostream& os, std::string_view kind, std::string_view outcome, double pinch_time,
                          double final_time, std::size_t steps, std::string_view error) {
  csv::Writer w(os, {"run", "outcome", "pinch_time_estimate", "final_time", "steps", "error"});
  w.row(kind, outcome, pinch_time, final_time, steps, error);
}

/// Embedding profile rho(a) sampled at n points from pole to pole.
inline void write_profile(std::ostream& os, const ProfileSpec& p, std::size_t n) {
  csv::Writer w(os, {"a", "radius"});
  const double L = 2.0 * p.half_length();
  for (std::size_t k = 0; k < n; ++k) {
    const double a = -0.5 * L + L * static_cast<double>(k) / static_cast<double>(n - 1);
    w.row(a, k == 0 || k + 1 == n ? 0.0 : p.radius(a));
  }
}

inline std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  return out;
}

/// Trajectory and summary of a finished run, read back from a run directory.
inline Curves read_run_curves(const std::filesystem::path& dir) {
  const csv::Table traj = csv::read_file((dir / "trajectory.csv").string());
  const csv::Table sum = csv::read_file((dir / "summary.csv").string());
  if (sum.rows.empty()) throw std::invalid_argument("empty summary in " + dir.string());
  Curves c;
  c.pinched = sum.rows[0][sum.column("outcome")] == "Pinched";
  c.pinch_time = csv::parse_number(sum.rows[0][sum.column("pinch_time_estimate")]);
  const auto t = traj.numbers("t"), w = traj.numbers("waist_radius"), l = traj.numbers("lobe_radius"),
             g = traj.numbers("radius_gap");
  for (std::size_t k = 0; k < t.size(); ++k) {
    if (!c.t.empty() && !(t[k] > c.t.back())) continue;
    c.t.push_back(t[k]);
    c.waist.push_back(w[k]);
    c.lobe.push_back(l[k]);
    c.gap.push_back(g[k]);
  }
  return c;
}

}  // namespace srf
