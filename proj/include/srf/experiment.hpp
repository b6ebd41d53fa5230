#pragma once

// Subcommand bodies shared by the command-line tool and the acceptance tests.
// Each writes its files into a directory and returns a process exit code.

#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>
#include <string>

#include "srf/checks.hpp"
#include "srf/comparison.hpp"
#include "srf/continuum.hpp"
#include "srf/integrator.hpp"
#include "srf/io.hpp"
#include "srf/lattice.hpp"
#include "srf/manifest.hpp"

namespace srf {

namespace exit_code {
inline constexpr int kSuccess = 0;
inline constexpr int kUsage = 2;
inline constexpr int kFailed = 3;
inline constexpr int kRefused = 4;
inline constexpr int kCheckFailed = 5;
inline constexpr int kStepLimit = 6;
}  // namespace exit_code

inline int exit_code_for(Outcome o) {
  switch (o) {
    case Outcome::Pinched: return exit_code::kSuccess;
    case Outcome::StepLimit: return exit_code::kStepLimit;
    case Outcome::Failed:
    default: return exit_code::kFailed;
  }
}

inline int exit_code_for(ContinuumOutcome o) {
  switch (o) {
    case ContinuumOutcome::Pinched: return exit_code::kSuccess;
    case ContinuumOutcome::StepLimit: return exit_code::kStepLimit;
    case ContinuumOutcome::Failed:
    default: return exit_code::kFailed;
  }
}

inline LatticeState initial_lattice(const RunManifest& m) {
  return build_lattice(m.profile, m.n_s, m.placement, m.placement_law());
}

/// Writes the effective manifest, and the input file verbatim when there was one.
inline void echo_manifest(const std::filesystem::path& dir, const RunManifest& m, const std::string& input_text) {
  auto out = open_output(dir / "manifest.txt");
  write_manifest(out, m);
  if (!input_text.empty()) {
    auto raw = open_output(dir / "manifest_input.txt");
    raw << input_text;
  }
}

/// Lattice run: trajectory.csv, events.csv, summary.csv, snapshots/ and the manifest.
inline RunResult run_srf_to(const RunManifest& m, const std::string& input_text = {}) {
  m.validate();
  const LatticeState initial = initial_lattice(m);
  const std::filesystem::path dir(m.output_dir);
  std::filesystem::create_directories(dir / "snapshots");
  RunResult r = run(initial, m.flow);
  echo_manifest(dir, m, input_text);
  {
    auto out = open_output(dir / "trajectory.csv");
    write_trajectory(out, r.trajectory);
  }
  {
    auto out = open_output(dir / "events.csv");
    write_events(out, r.remesh_events);
  }
  {
    auto out = open_output(dir / "summary.csv");
    write_summary(out, "srf", to_string(r.outcome), r.pinch_time_estimate, r.last_state.time, r.steps, r.error);
  }
  for (const Snapshot& s : r.snapshots) {
    std::ostringstream name;
    name << "step_" << s.step << '_' << s.reason << ".csv";
    auto out = open_output(dir / "snapshots" / name.str());
    write_snapshot(out, s.state);
  }
  return r;
}

/// Continuum run: trajectory.csv, summary.csv, final_profile.csv and the manifest.
inline ContinuumRunResult run_continuum_to(const RunManifest& m, const std::string& input_text = {}) {
  m.validate();
  const std::filesystem::path dir(m.output_dir);
  std::filesystem::create_directories(dir);
  ContinuumRunResult r = continuum_run(m.profile, m.continuum);
  echo_manifest(dir, m, input_text);
  {
    auto out = open_output(dir / "trajectory.csv");
    write_continuum_trajectory(out, r.trajectory);
  }
  {
    auto out = open_output(dir / "summary.csv");
    write_summary(out, "continuum", to_string(r.outcome), r.pinch_time_estimate, r.final_state.time, r.steps,
                  r.error);
  }
  {
    auto out = open_output(dir / "final_profile.csv");
    csv::Writer w(out, {"z", "radius", "phi"});
    const ContinuumState& s = r.final_state;
    for (std::size_t j = 0; j < s.size(); ++j) w.row(s.z[j], s.rho[j], s.phi[j]);
  }
  return r;
}

/// Rescaled comparison of two run directories into comparison.csv and
/// comparison_summary.csv. Throws ComparisonRefused when either did not pinch.
inline Comparison compare_runs_to(const std::filesystem::path& srf_dir, const std::filesystem::path& continuum_dir,
                                  const std::filesystem::path& out_dir, std::size_t points = 200) {
  const Comparison c = compare(read_run_curves(srf_dir), read_run_curves(continuum_dir), points);
  std::filesystem::create_directories(out_dir);
  {
    auto out = open_output(out_dir / "comparison.csv");
    write_comparison(out, c);
  }
  {
    auto out = open_output(out_dir / "comparison_summary.csv");
    write_comparison_summary(out, c);
  }
  return c;
}

inline void write_suite_results(std::ostream& os, const std::vector<SuiteResult>& results) {
  csv::Writer w(os, {"suite", "passed", "cases", "worst", "tolerance", "detail"});
  for (const SuiteResult& r : results) w.row(r.name, r.passed, r.cases, r.worst, r.tolerance, r.detail);
}

inline void write_profile_dump(std::ostream& os, const RunManifest& m, std::size_t points) {
  m.profile.validate();
  if (points < 2) throw ConfigError("profile-dump needs at least two points");
  write_profile(os, m.profile, points);
}

}  // namespace srf
