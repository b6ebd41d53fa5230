// srf: run lattice and continuum flows, compare them, and run the check suites.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "srf/experiment.hpp"

namespace {

using namespace srf;

/// Manifest options common to every subcommand that builds a geometry.
struct ManifestOptions {
  std::string file;
  std::vector<std::string> assignments;  // --set key=value
  std::map<std::string, std::string> flags;

  void attach(CLI::App* app) {
    app->add_option("-m,--manifest", file, "key=value manifest file")->check(CLI::ExistingFile);
    app->add_option("--set", assignments, "override as key=value (repeatable)");
    for (const std::string& key : manifest_key_names()) {
      app->add_option_function<std::string>(
          "--" + key, [this, key](const std::string& v) { flags[key] = v; }, "manifest key " + key);
    }
  }

  /// File first, then per-key flags, then --set, so the command line wins.
  RunManifest resolve(std::string& input_text) const {
    RunManifest m;
    if (!file.empty()) {
      std::ifstream in(file);
      if (!in) throw ConfigError("cannot open manifest " + file);
      std::ostringstream buf;
      buf << in.rdbuf();
      input_text = buf.str();
      std::istringstream text(input_text);
      apply_manifest_text(m, text);
    }
    for (const auto& [key, value] : flags) set_manifest_value(m, key, value);
    for (const std::string& a : assignments) apply_assignment(m, a, "--set " + a);
    m.validate();
    return m;
  }
};

void report_run(const char* kind, std::string_view outcome, double pinch_time, double final_time, std::size_t steps,
               const std::string& error, const std::string& dir) {
  std::cout << kind << ": " << outcome << " at t=" << csv::format_number(final_time) << " after " << steps
            << " steps";
  if (outcome == "Pinched") std::cout << ", pinch time estimate " << csv::format_number(pinch_time);
  std::cout << "; output in " << dir << '\n';
  if (!error.empty()) std::cerr << kind << ": " << error << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Simplicial and continuum Ricci flow of axisymmetric 3-geometries"};
  app.require_subcommand(1);

  ManifestOptions srf_opts, cont_opts, dump_opts;
  bool no_remesh = false;
  auto* run_srf = app.add_subcommand("run-srf", "evolve the frustum lattice");
  srf_opts.attach(run_srf);
  run_srf->add_flag("--no-remesh", no_remesh, "disable remeshing");

  auto* run_cont = app.add_subcommand("run-continuum", "evolve the smooth warped-product profile");
  cont_opts.attach(run_cont);

  std::string cmp_srf, cmp_cont, cmp_out = "comparison";
  std::size_t cmp_points = 200;
  auto* cmp = app.add_subcommand("compare", "rescale and compare a lattice run with a continuum run");
  cmp->add_option("--srf", cmp_srf, "lattice run directory")->required()->check(CLI::ExistingDirectory);
  cmp->add_option("--continuum", cmp_cont, "continuum run directory")->required()->check(CLI::ExistingDirectory);
  cmp->add_option("--out", cmp_out, "output directory");
  cmp->add_option("--points", cmp_points, "common time grid size")->check(CLI::Range(2, 1000000));

  CheckOptions check;
  std::size_t n_random = RunManifest{}.n_random;
  bool mutate = false;
  std::string check_out;
  auto* geo = app.add_subcommand("geometry-check", "run the geometry, partials and edge-equation suites");
  geo->add_option("--seed", check.seed, "random seed");
  geo->add_option("--n-random", n_random, "random frustum blocks for the oracle suite")->check(CLI::PositiveNumber);
  geo->add_option("--n-states", check.lattice_states, "random lattice states")->check(CLI::PositiveNumber);
  geo->add_flag("--mutate", mutate, "flip the sign of a moment arm in the assembly");
  geo->add_option("--out", check_out, "write the results CSV here instead of stdout");

  std::size_t dump_points = 401;
  std::string dump_out;
  auto* dump = app.add_subcommand("profile-dump", "write the initial embedding profile");
  dump_opts.attach(dump);
  dump->add_option("--points", dump_points, "samples from pole to pole")->check(CLI::Range(2, 100000000));
  dump->add_option("--out", dump_out, "output file instead of stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : exit_code::kUsage;
  }

  try {
    if (*run_srf) {
      std::string text;
      RunManifest m;
      try {
        m = srf_opts.resolve(text);
        if (no_remesh) m.flow.remesh_enabled = false;
      } catch (const ConfigError& e) {
        std::cerr << "usage: " << e.what() << '\n';
        return exit_code::kUsage;
      }
      const RunResult r = run_srf_to(m, text);
      report_run("run-srf", to_string(r.outcome), r.pinch_time_estimate, r.last_state.time, r.steps, r.error,
                 m.output_dir);
      return exit_code_for(r.outcome);
    }
    if (*run_cont) {
      std::string text;
      RunManifest m;
      try {
        m = cont_opts.resolve(text);
      } catch (const ConfigError& e) {
        std::cerr << "usage: " << e.what() << '\n';
        return exit_code::kUsage;
      }
      const ContinuumRunResult r = run_continuum_to(m, text);
      report_run("run-continuum", to_string(r.outcome), r.pinch_time_estimate, r.final_state.time, r.steps, r.error,
                 m.output_dir);
      return exit_code_for(r.outcome);
    }
    if (*cmp) {
      try {
        const Comparison c = compare_runs_to(cmp_srf, cmp_cont, cmp_out, cmp_points);
        write_comparison_summary(std::cout, c);
        return exit_code::kSuccess;
      } catch (const ComparisonRefused& e) {
        std::cerr << "comparison refused: " << e.what() << '\n';
        return exit_code::kRefused;
      }
    }
    if (*geo) {
      check.oracle_blocks = n_random;
      if (mutate) check.fault = AssemblyFault::FlipAlphaMomentArm;
      const std::vector<SuiteResult> results = run_check_suites(check);
      if (check_out.empty()) {
        write_suite_results(std::cout, results);
      } else {
        auto out = open_output(check_out);
        write_suite_results(out, results);
      }
      bool ok = true;
      for (const SuiteResult& r : results) ok = ok && r.passed;
      return ok ? exit_code::kSuccess : exit_code::kCheckFailed;
    }
    if (*dump) {
      std::string text;
      RunManifest m;
      try {
        m = dump_opts.resolve(text);
      } catch (const ConfigError& e) {
        std::cerr << "usage: " << e.what() << '\n';
        return exit_code::kUsage;
      }
      if (dump_out.empty()) {
        write_profile_dump(std::cout, m, dump_points);
      } else {
        auto out = open_output(dump_out);
        write_profile_dump(out, m, dump_points);
      }
      return exit_code::kSuccess;
    }
  } catch (const ConfigError& e) {
    std::cerr << "usage: " << e.what() << '\n';
    return exit_code::kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_code::kFailed;
  }
  return exit_code::kUsage;
}
