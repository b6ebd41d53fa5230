#pragma once

// Plain-text run configuration: one key=value per line, '#' starts a comment.
// Command-line overrides use the same keys and win over the file.

#include <charconv>
#include <cstdint>
#include <fstream>
#include <functional>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <type_traits>
#include <vector>

#include "srf/continuum.hpp"
#include "srf/csv.hpp"
#include "srf/errors.hpp"
#include "srf/integrator.hpp"
#include "srf/lattice.hpp"
#include "srf/profile.hpp"

namespace srf {

struct RunManifest {
  ProfileSpec profile = ProfileSpec::cos_quartic(100.0, 0.1);
  std::size_t n_s = 45;
  Placement placement = Placement::GaussianConcentrated;
  FlowConfig flow;
  ContinuumConfig continuum;
  std::string output_dir = "out";
  std::uint64_t seed = 1;
  std::size_t n_random = 100000;  ///< random frustum blocks for the geometry oracle suite

  PlacementLaw placement_law() const { return flow.remesh.law(); }

  void validate() const {
    profile.validate();
    if (n_s < 5 || n_s % 2 == 0) throw ConfigError("n_s must be odd and at least 5");
    flow.validate();
    continuum.validate();
    if (output_dir.empty()) throw ConfigError("output_dir must not be empty");
    if (n_random == 0) throw ConfigError("n_random must be positive");
  }
};

namespace detail {

inline std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

inline double to_double(const std::string& key, const std::string& v) {
  double x = 0.0;
  const auto r = std::from_chars(v.data(), v.data() + v.size(), x);
  if (r.ec != std::errc() || r.ptr != v.data() + v.size()) throw ConfigError(key + ": not a number: '" + v + "'");
  return x;
}

inline std::uint64_t to_count(const std::string& key, const std::string& v) {
  std::uint64_t x = 0;
  const auto r = std::from_chars(v.data(), v.data() + v.size(), x);
  if (r.ec != std::errc() || r.ptr != v.data() + v.size()) throw ConfigError(key + ": not a nonnegative integer: '" + v + "'");
  return x;
}

inline bool to_bool(const std::string& key, const std::string& v) {
  if (v == "1" || v == "true" || v == "yes" || v == "on") return true;
  if (v == "0" || v == "false" || v == "no" || v == "off") return false;
  throw ConfigError(key + ": not a boolean: '" + v + "'");
}

struct ManifestKey {
  std::function<void(RunManifest&, const std::string&)> set;
  std::function<std::string(const RunManifest&)> get;
};

inline std::string num(double v) { return csv::format_number(v); }

inline const std::map<std::string, ManifestKey>& manifest_keys() {
  static const std::map<std::string, ManifestKey> keys = [] {
    std::map<std::string, ManifestKey> k;
    auto real = [&k](const std::string& name, auto member) {
      k[name] = {[name, member](RunManifest& m, const std::string& v) { member(m) = to_double(name, v); },
                 [member](const RunManifest& m) { return num(member(const_cast<RunManifest&>(m))); }};
    };
    auto count = [&k](const std::string& name, auto member) {
      k[name] = {[name, member](RunManifest& m, const std::string& v) {
                   member(m) = static_cast<std::remove_reference_t<decltype(member(m))>>(to_count(name, v));
                 },
                 [member](const RunManifest& m) { return std::to_string(member(const_cast<RunManifest&>(m))); }};
    };
    auto flag = [&k](const std::string& name, auto member) {
      k[name] = {[name, member](RunManifest& m, const std::string& v) { member(m) = to_bool(name, v); },
                 [member](const RunManifest& m) { return std::string(member(const_cast<RunManifest&>(m)) ? "true" : "false"); }};
    };

    k["profile"] = {[](RunManifest& m, const std::string& v) {
                      try {
                        m.profile.kind = parse_profile_kind(v);
                      } catch (const std::exception& e) {
                        throw ConfigError(std::string("profile: ") + e.what());
                      }
                    },
                    [](const RunManifest& m) { return std::string(to_string(m.profile.kind)); }};
    real("R0", [](RunManifest& m) -> double& { return m.profile.R0; });
    real("rho0", [](RunManifest& m) -> double& { return m.profile.rho0; });
    real("A", [](RunManifest& m) -> double& { return m.profile.A; });
    count("n_s", [](RunManifest& m) -> std::size_t& { return m.n_s; });
    k["placement"] = {[](RunManifest& m, const std::string& v) {
                        if (v == "uniform") m.placement = Placement::Uniform;
                        else if (v == "gaussian") m.placement = Placement::GaussianConcentrated;
                        else throw ConfigError("placement: expected uniform or gaussian, got '" + v + "'");
                      },
                      [](const RunManifest& m) {
                        return std::string(m.placement == Placement::Uniform ? "uniform" : "gaussian");
                      }};
    real("dt", [](RunManifest& m) -> double& { return m.flow.dt; });
    real("pinch_threshold", [](RunManifest& m) -> double& { return m.flow.pinch_threshold; });
    count("max_steps", [](RunManifest& m) -> std::size_t& { return m.flow.max_steps; });
    real("max_time", [](RunManifest& m) -> double& { return m.flow.max_time; });
    flag("remesh", [](RunManifest& m) -> bool& { return m.flow.remesh_enabled; });
    real("kappa", [](RunManifest& m) -> double& { return m.flow.remesh.kappa; });
    real("sigma_frac", [](RunManifest& m) -> double& { return m.flow.remesh.sigma_frac; });
    real("remesh_slack", [](RunManifest& m) -> double& { return m.flow.remesh.slack; });
    flag("dt_shrink", [](RunManifest& m) -> bool& { return m.flow.dt_shrink; });
    count("diagnostics_every", [](RunManifest& m) -> std::size_t& { return m.flow.diagnostics_every; });
    count("snapshot_every", [](RunManifest& m) -> std::size_t& { return m.flow.snapshot_every; });
    flag("check_residuals", [](RunManifest& m) -> bool& { return m.flow.check_residuals; });
    count("n_z", [](RunManifest& m) -> std::size_t& { return m.continuum.n_z; });
    real("stop_fraction", [](RunManifest& m) -> double& { return m.continuum.stop_fraction; });
    real("cfl", [](RunManifest& m) -> double& { return m.continuum.cfl; });
    real("pinch_step", [](RunManifest& m) -> double& { return m.continuum.pinch_step; });
    count("continuum_record_every", [](RunManifest& m) -> std::size_t& { return m.continuum.record_every; });
    k["output_dir"] = {[](RunManifest& m, const std::string& v) { m.output_dir = v; },
                       [](const RunManifest& m) { return m.output_dir; }};
    count("seed", [](RunManifest& m) -> std::uint64_t& { return m.seed; });
    count("n_random", [](RunManifest& m) -> std::size_t& { return m.n_random; });
    return k;
  }();
  return keys;
}

}  // namespace detail

/// Apply one key=value assignment.
inline void set_manifest_value(RunManifest& m, const std::string& key, const std::string& value) {
  const auto& keys = detail::manifest_keys();
  const auto it = keys.find(key);
  if (it == keys.end()) throw ConfigError("unknown manifest key '" + key + "'");
  it->second.set(m, value);
}

inline void apply_assignment(RunManifest& m, std::string_view line, const std::string& where) {
  const auto eq = line.find('=');
  if (eq == std::string_view::npos) throw ConfigError(where + ": expected key=value");
  const std::string key = detail::trim(line.substr(0, eq)), value = detail::trim(line.substr(eq + 1));
  if (key.empty()) throw ConfigError(where + ": empty key");
  set_manifest_value(m, key, value);
}

inline void apply_manifest_text(RunManifest& m, std::istream& in) {
  std::string line;
  for (std::size_t lineno = 1; std::getline(in, line); ++lineno) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    if (detail::trim(line).empty()) continue;
    apply_assignment(m, line, "line " + std::to_string(lineno));
  }
}

inline RunManifest load_manifest(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open manifest " + path);
  RunManifest m;
  apply_manifest_text(m, in);
  return m;
}

/// Every key with its current value, in key order; parses back to the same manifest.
inline void write_manifest(std::ostream& os, const RunManifest& m) {
  for (const auto& [key, k] : detail::manifest_keys()) os << key << '=' << k.get(m) << '\n';
}

inline std::vector<std::string> manifest_key_names() {
  std::vector<std::string> out;
  for (const auto& [key, k] : detail::manifest_keys()) out.push_back(key);
  return out;
}

}  // namespace srf
