#pragma once

// Redistribution of the icosahedra along an interpolated profile.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "srf/errors.hpp"
#include "srf/lattice.hpp"
#include "srf/placement.hpp"
#include "srf/spline.hpp"

namespace srf {

enum class SplineKind { NaturalCubic };

/// How the profile is extended beyond the end caps to s = 0.
enum class PoleRule { EndTangent, EndChord };

struct RemeshPolicy {
  double kappa = 0.95;
  double sigma_frac = 0.2;
  double slack = 0.3;  ///< fraction by which a block may violate well-centeredness before remeshing
  SplineKind spline = SplineKind::NaturalCubic;
  PoleRule pole_rule = PoleRule::EndTangent;

  void validate() const {
    PlacementLaw{kappa, sigma_frac}.validate();
    if (!(slack >= 0.0 && slack < 1.0)) throw ConfigError("remesh slack must lie in [0, 1)");
  }
  int fixed_point_iterations = 0;
  PlacementLaw law() const { return {kappa, sigma_frac, fixed_point_iterations}; }
};

/// Smallest a_i over its well-centeredness bound.
inline double min_wc_ratio(const LatticeState& st) {
  const auto r = well_centeredness_ratio(st);
  return r.empty() ? std::numeric_limits<double>::infinity() : *std::min_element(r.begin(), r.end());
}

inline bool should_remesh(const LatticeState& st, const RemeshPolicy& policy) {
  return min_wc_ratio(st) < 1.0 - policy.slack;
}

struct RemeshGeometry {
  double pole_lo = 0.0, pole_hi = 0.0;  ///< where the end extensions reach s = 0
  double slope_lo = 0.0, slope_hi = 0.0; ///< ds/dc of the end extensions
  double center = 0.0;                   ///< continuous waist location of the interpolant
  std::vector<double> nodes;             ///< new node coordinates (old waist frame)
};

/// Interpolant of s over the current axial coordinates.
inline NaturalCubicSpline profile_interpolant(const LatticeState& st) {
  return NaturalCubicSpline(axial_coordinates(st), st.s);
}

inline RemeshGeometry remesh_geometry(const LatticeState& st, const RemeshPolicy& policy) {
  policy.validate();
  const NaturalCubicSpline sp = profile_interpolant(st);
  const std::vector<double> c = axial_coordinates(st);
  const std::size_t n = c.size();

  RemeshGeometry g;
  const bool chord = policy.pole_rule == PoleRule::EndChord;
  const double slope_lo = chord ? (st.s[1] - st.s[0]) / (c[1] - c[0]) : sp.derivative(c.front());
  const double slope_hi = chord ? (st.s[n - 1] - st.s[n - 2]) / (c[n - 1] - c[n - 2]) : sp.derivative(c.back());
  if (!(slope_lo > 0.0) || !(slope_hi < 0.0))
    throw RemeshError("profile interpolant does not decrease toward the poles");
  g.slope_lo = slope_lo;
  g.slope_hi = slope_hi;
  g.pole_lo = c.front() - st.s.front() / slope_lo;
  g.pole_hi = c.back() - st.s.back() / slope_hi;

  auto [wlo, whi] = central_window(n);
  g.center = sp.argmin(c[wlo], c[whi - 1]);

  g.nodes = place_nodes(g.pole_lo, g.pole_hi, n, policy.law(), g.center);
  return g;
}

/// New lattice: n_s nodes placed by the Gaussian law between the extrapolated
/// poles, s sampled from the interpolant, a taken from consecutive nodes.
inline LatticeState remesh(const LatticeState& st, const RemeshPolicy& policy) {
  validate(st);
  const RemeshGeometry g = remesh_geometry(st, policy);
  const NaturalCubicSpline sp = profile_interpolant(st);
  const std::size_t n = g.nodes.size();
  LatticeState out;
  out.time = st.time;
  out.s.resize(n);
  out.a.resize(n - 1);
  const double c_lo = sp.front(), c_hi = sp.back();
  for (std::size_t i = 0; i < n; ++i) {
    const double x = g.nodes[i];
    double v;
    if (x < c_lo)
      v = st.s.front() + (x - c_lo) * g.slope_lo;
    else if (x > c_hi)
      v = st.s.back() + (x - c_hi) * g.slope_hi;
    else
      v = sp(x);
    if (!(v > 0.0)) throw RemeshError("interpolant is nonpositive at new node " + std::to_string(i));
    out.s[i] = v;
  }
  for (std::size_t i = 0; i + 1 < n; ++i) out.a[i] = g.nodes[i + 1] - g.nodes[i];
  try {
    validate(out);
  } catch (const std::exception& e) {
    throw RemeshError(std::string("remeshed lattice is invalid: ") + e.what());
  }
  return out;
}

}  // namespace srf
