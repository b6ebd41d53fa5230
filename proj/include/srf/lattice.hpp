#pragma once

// The icosahedral-frustum dumbbell: n_s icosahedral cross-sections with
// edges s_i, joined by n_s - 1 frustum blocks with axial edges a_i.
// Indices are zero-based: block i sits between icosahedra i and i + 1.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <utility>
#include <string>
#include <vector>

#include "srf/errors.hpp"
#include "srf/frustum.hpp"
#include "srf/placement.hpp"
#include "srf/profile.hpp"

namespace srf {

struct LatticeState {
  std::vector<double> s;  ///< icosahedral edges, size n_s
  std::vector<double> a;  ///< axial edges, size n_s - 1
  double time = 0.0;

  std::size_t n_s() const { return s.size(); }
  std::size_t n_blocks() const { return a.size(); }
  std::size_t waist_node() const { return (s.size() - 1) / 2; }
  FrustumBlock block(std::size_t i) const { return {a[i], s[i], s[i + 1]}; }
};

/// Throws on malformed shapes, nonpositive edges or degenerate blocks.
inline void validate(const LatticeState& st) {
  const std::size_t n = st.s.size();
  if (n < 3) throw ConfigError("lattice needs at least 3 cross-sections");
  if (st.a.size() + 1 != n) throw ConfigError("lattice needs exactly n_s - 1 axial edges");
  for (std::size_t i = 0; i < n; ++i)
    if (!(st.s[i] > 0.0) || !std::isfinite(st.s[i]))
      throw SingularGeometryError("s" + std::to_string(i), "nonpositive icosahedral edge s" + std::to_string(i));
  for (std::size_t i = 0; i + 1 < n; ++i) require_valid_block(st.a[i], st.s[i], st.s[i + 1], static_cast<int>(i));
}

inline bool is_valid(const LatticeState& st) {
  try {
    validate(st);
    return true;
  } catch (const std::exception&) {
    return false;
  }
}

/// Axial coordinates with the waist node at 0: c_i = sum_{j<i} a_j - sum_{j<w} a_j.
inline std::vector<double> axial_coordinates(const LatticeState& st) {
  const std::size_t n = st.s.size();
  std::vector<double> c(n, 0.0);
  for (std::size_t i = 1; i < n; ++i) c[i] = c[i - 1] + st.a[i - 1];
  const double offset = c[st.waist_node()];
  for (double& x : c) x -= offset;
  return c;
}

enum class Placement { Uniform, GaussianConcentrated };

inline LatticeState lattice_from_nodes(const ProfileSpec& profile, const std::vector<double>& nodes) {
  LatticeState st;
  const std::size_t n = nodes.size();
  st.s.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double rho = profile.radius(nodes[i]);
    if (!(rho > 0.0))
      throw ConfigError("profile radius is nonpositive at node " + std::to_string(i) + " (a=" +
                        std::to_string(nodes[i]) + ")");
    st.s[i] = rho / kIcosaCircumradius;
  }
  st.a.resize(n - 1);
  for (std::size_t i = 0; i + 1 < n; ++i) st.a[i] = nodes[i + 1] - nodes[i];
  return st;
}

inline LatticeState build_lattice(const ProfileSpec& profile, std::size_t n_s, Placement placement,
                                  const PlacementLaw& law = {}) {
  profile.validate();
  if (n_s < 5 || n_s % 2 == 0) throw ConfigError("n_s must be odd and at least 5");
  const double half = profile.half_length();
  PlacementLaw eff = law;
  if (placement == Placement::Uniform) eff.kappa = 0.0;
  std::vector<double> nodes = place_nodes(-half, half, n_s, eff, 0.0);
  // The placement is symmetric about 0; pin the waist node exactly.
  nodes[(n_s - 1) / 2] = 0.0;
  for (std::size_t i = 0; i < (n_s - 1) / 2; ++i) nodes[n_s - 1 - i] = -nodes[i];
  LatticeState st = lattice_from_nodes(profile, nodes);
  validate(st);
  return st;
}

template <class T>
struct DualMetricsT {
  std::vector<T> sigma, alpha, eps_s, eps_a;
  std::vector<T> area_s_star, area_a_star, area_sigma_star, area_alpha_star;
  std::vector<BlockMetricsT<T>> blocks;
};

using DualMetrics = DualMetricsT<double>;

namespace detail {

/// Dual quantities from precomputed block metrics. Works for any scalar T as
/// long as the block metrics and edges share it.
template <class T>
DualMetricsT<T> assemble_duals(const std::vector<T>& s, const std::vector<T>& a,
                               std::vector<BlockMetricsT<T>> blocks) {
  const std::size_t n = s.size();
  const std::size_t nb = a.size();
  DualMetricsT<T> d;
  d.sigma.resize(nb);
  d.eps_a.resize(nb);
  d.area_a_star.resize(nb);
  d.area_sigma_star.resize(nb);
  d.alpha.resize(n);
  d.eps_s.resize(n);
  d.area_s_star.resize(n);
  d.area_alpha_star.resize(n);

  for (std::size_t i = 0; i < nb; ++i) {
    const auto& b = blocks[i];
    d.sigma[i] = 2.0 * b.sigma_half;
    d.eps_a[i] = 2.0 * kPi - 5.0 * b.theta_axial;
    d.area_a_star[i] = 2.5 * b.m_a_sigma * d.sigma[i];
    d.area_sigma_star[i] = b.m_a_sigma * a[i] + 0.5 * b.m_sbase_sigma * s[i] + 0.5 * b.m_scap_sigma * s[i + 1];
  }
  for (std::size_t i = 0; i < n; ++i) {
    const bool first = i == 0, last = i + 1 == n;
    T alpha = first ? kIcosaFaceCenter * s[i] : blocks[i - 1].h_cap;
    alpha = alpha + (last ? kIcosaFaceCenter * s[i] : blocks[i].h_base);
    d.alpha[i] = alpha;

    T eps = 2.0 * kPi - (first ? T(kIcosaDihedral) : 2.0 * blocks[i - 1].theta_cap);
    eps = eps - (last ? T(kIcosaDihedral) : 2.0 * blocks[i].theta_base);
    d.eps_s[i] = eps;

    const T m_alpha = kSqrt3 / 6.0 * s[i];
    T area = m_alpha * alpha;
    if (!first) area = area + 0.5 * blocks[i - 1].m_scap_sigma * d.sigma[i - 1];
    if (!last) area = area + 0.5 * blocks[i].m_sbase_sigma * d.sigma[i];
    d.area_s_star[i] = area;
    d.area_alpha_star[i] = kSqrt3 / 4.0 * s[i] * s[i];
  }
  d.blocks = std::move(blocks);
  return d;
}

}  // namespace detail

inline DualMetrics dual_metrics(const LatticeState& st) {
  validate(st);
  std::vector<BlockMetrics> blocks(st.a.size());
  for (std::size_t i = 0; i < st.a.size(); ++i) blocks[i] = block_metrics(st.block(i), static_cast<int>(i));
  return detail::assemble_duals(st.s, st.a, std::move(blocks));
}

struct Measurement {
  double waist_radius = 0.0;
  double lobe_radius = 0.0;
  std::size_t waist_index = 0;
  std::size_t lobe_index_lo = 0;  ///< largest radius at or below the waist
  std::size_t lobe_index_hi = 0;  ///< largest radius at or above the waist
  double waist_coordinate = 0.0;
  double lobe_coordinate_lo = 0.0;
  double lobe_coordinate_hi = 0.0;
};

/// Central window [n/3, n - n/3) used for waist detection.
inline std::pair<std::size_t, std::size_t> central_window(std::size_t n) {
  const std::size_t lo = n / 3;
  const std::size_t hi = std::max(lo + 1, n - n / 3);
  return {lo, hi};
}

inline Measurement measure(const LatticeState& st) {
  const std::size_t n = st.s.size();
  const std::vector<double> c = axial_coordinates(st);
  Measurement m;
  auto [lo, hi] = central_window(n);
  m.waist_index = lo;
  for (std::size_t i = lo; i < hi; ++i)
    if (st.s[i] < st.s[m.waist_index]) m.waist_index = i;
  m.lobe_index_lo = 0;
  for (std::size_t i = 0; i <= m.waist_index; ++i)
    if (st.s[i] > st.s[m.lobe_index_lo]) m.lobe_index_lo = i;
  m.lobe_index_hi = m.waist_index;
  for (std::size_t i = m.waist_index; i < n; ++i)
    if (st.s[i] > st.s[m.lobe_index_hi]) m.lobe_index_hi = i;
  m.waist_radius = kIcosaCircumradius * st.s[m.waist_index];
  m.lobe_radius = kIcosaCircumradius * std::max(st.s[m.lobe_index_lo], st.s[m.lobe_index_hi]);
  m.waist_coordinate = c[m.waist_index];
  m.lobe_coordinate_lo = c[m.lobe_index_lo];
  m.lobe_coordinate_hi = c[m.lobe_index_hi];
  return m;
}

/// a_i - sqrt(max(s_i, s_{i+1}) |s_i - s_{i+1}| / 3) per block.
inline std::vector<double> well_centeredness(const LatticeState& st) {
  std::vector<double> margin(st.a.size());
  for (std::size_t i = 0; i < st.a.size(); ++i) {
    const double sb = st.s[i], sc = st.s[i + 1];
    margin[i] = st.a[i] - std::sqrt(std::max(sb, sc) * std::abs(sb - sc) / 3.0);
  }
  return margin;
}

/// a_i divided by its well-centeredness bound (infinity when the bound is 0).
inline std::vector<double> well_centeredness_ratio(const LatticeState& st) {
  std::vector<double> r(st.a.size());
  for (std::size_t i = 0; i < st.a.size(); ++i) {
    const double sb = st.s[i], sc = st.s[i + 1];
    const double rhs = std::sqrt(std::max(sb, sc) * std::abs(sb - sc) / 3.0);
    r[i] = rhs > 0.0 ? st.a[i] / rhs : std::numeric_limits<double>::infinity();
  }
  return r;
}

}  // namespace srf
