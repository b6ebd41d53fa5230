#pragma once

// Closed-form geometry of the equilateral-triangle frustum block and the
// regular icosahedron end caps.
//
// A block is bounded by two parallel equilateral triangles (edges s_base and
// s_cap) joined by three equal axial edges a. Everything below is analytic in
// the signed difference s_base - s_cap, so widening and narrowing blocks are
// handled by the same expressions. Lengths that can change sign (h_base,
// h_cap, the sigma moment arms) are signed: a negative value means the
// circumcenter sits outside the block on that side.

#include <cmath>
#include <numbers>
#include <string>

#include "srf/autodiff.hpp"
#include "srf/errors.hpp"

namespace srf {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kSqrt3 = std::numbers::sqrt3;
inline constexpr double kSqrt5 = 2.2360679774997896964;

/// Circumradius of a regular icosahedron per unit edge, sqrt(10+2 sqrt5)/4.
inline const double kIcosaCircumradius = std::sqrt(10.0 + 2.0 * kSqrt5) / 4.0;
/// Interior dihedral angle of the regular icosahedron, arccos(-sqrt5/3).
inline const double kIcosaDihedral = std::acos(-kSqrt5 / 3.0);
/// Center-to-face distance (inradius) per unit edge, (sqrt3/12)(3+sqrt5).
inline constexpr double kIcosaFaceCenter = kSqrt3 / 12.0 * (3.0 + kSqrt5);
/// Volume per unit edge cubed, (5/12)(3+sqrt5).
inline constexpr double kIcosaVolume = 5.0 / 12.0 * (3.0 + kSqrt5);

/// Blocks closer than this (relative to 3a^2) to 3a^2 = (s_base-s_cap)^2 are degenerate.
inline constexpr double kDegenerateMargin = 1e-12;

struct FrustumBlock {
  double a = 0.0;       ///< axial edge
  double s_base = 0.0;  ///< base triangle edge (s_i)
  double s_cap = 0.0;   ///< cap triangle edge (s_{i+1})
};

template <class T>
struct BlockMetricsT {
  T theta_axial;   ///< dihedral angle along an axial edge
  T theta_base;    ///< dihedral between base triangle and a trapezoid
  T theta_cap;     ///< pi - theta_base
  T sigma_half;    ///< block circumcenter to trapezoid circumcenter
  T h_base;        ///< block circumcenter to base-triangle plane (signed, positive toward the cap)
  T h_cap;         ///< block circumcenter to cap-triangle plane (signed, positive toward the base)
  T m_a_sigma;     ///< axial-edge midpoint to trapezoid circumcenter
  T m_sbase_sigma; ///< base-edge midpoint to trapezoid circumcenter (signed)
  T m_scap_sigma;  ///< cap-edge midpoint to trapezoid circumcenter (signed)
  T m_sbase_alpha; ///< inradius of the base triangle
  T m_scap_alpha;  ///< inradius of the cap triangle
  T volume;
};

using BlockMetrics = BlockMetricsT<double>;

inline bool is_valid_block(double a, double s_base, double s_cap) {
  if (!(a > 0.0) || !(s_base > 0.0) || !(s_cap > 0.0)) return false;
  const double d = s_base - s_cap;
  const double three_a2 = 3.0 * a * a;
  return three_a2 - d * d > kDegenerateMargin * three_a2;
}

inline bool is_valid_block(const FrustumBlock& b) {
  return is_valid_block(b.a, b.s_base, b.s_cap);
}

inline void require_valid_block(double a, double s_base, double s_cap, int layer = -1) {
  if (is_valid_block(a, s_base, s_cap)) return;
  std::string where = layer >= 0 ? "layer " + std::to_string(layer) : "block";
  throw DegenerateBlockError(
      layer, "degenerate frustum " + where + ": a=" + std::to_string(a) +
                 " s_base=" + std::to_string(s_base) + " s_cap=" + std::to_string(s_cap) +
                 " (requires 3a^2 > (s_base - s_cap)^2 and positive edges)");
}

/// Unchecked closed forms; T is double or a Dual for exact partials.
template <class T>
BlockMetricsT<T> block_metrics_of(const T& a, const T& s_base, const T& s_cap) {
  using std::acos;
  using std::sqrt;
  const T d = s_base - s_cap;
  const T a2 = a * a;
  const T d2 = d * d;
  const T root3 = sqrt(3.0 * a2 - d2);
  const T root4 = sqrt(4.0 * a2 - d2);

  BlockMetricsT<T> m;
  m.theta_axial = acos((2.0 * a2 - d2) / (4.0 * a2 - d2));
  m.theta_base = acos(kSqrt3 * d / (3.0 * root4));
  m.theta_cap = kPi - m.theta_base;
  m.sigma_half = 0.5 * a2 * (s_base + s_cap) / (root3 * root4);
  m.h_base = kSqrt3 / 6.0 * (3.0 * a2 - 2.0 * s_base * d) / root3;
  m.h_cap = kSqrt3 / 6.0 * (3.0 * a2 + 2.0 * s_cap * d) / root3;
  m.m_a_sigma = a * (s_base + s_cap) / (2.0 * root4);
  m.m_sbase_sigma = (2.0 * a2 - s_base * d) / (2.0 * root4);
  m.m_scap_sigma = (2.0 * a2 + s_cap * d) / (2.0 * root4);
  m.m_sbase_alpha = kSqrt3 / 6.0 * s_base;
  m.m_scap_alpha = kSqrt3 / 6.0 * s_cap;
  m.volume = (s_base * s_base + s_cap * s_cap + s_base * s_cap) * root3 / 12.0;
  return m;
}

/// Checked evaluation; throws DegenerateBlockError (tagged with `layer`).
inline BlockMetrics block_metrics(const FrustumBlock& b, int layer = -1) {
  require_valid_block(b.a, b.s_base, b.s_cap, layer);
  return block_metrics_of(b.a, b.s_base, b.s_cap);
}

/// Frustum altitude, the distance between the two triangle planes.
inline double frustum_altitude(const FrustumBlock& b) {
  const double d = b.s_base - b.s_cap;
  return std::sqrt(3.0 * b.a * b.a - d * d) / kSqrt3;
}

struct IcosahedronMetrics {
  double dihedral;
  double volume;
  double circumradius;
  double face_center_distance;
};

inline IcosahedronMetrics icosahedron_metrics(double s) {
  if (!(s > 0.0)) throw ConfigError("icosahedron edge must be positive, got " + std::to_string(s));
  return {kIcosaDihedral, kIcosaVolume * s * s * s, kIcosaCircumradius * s, kIcosaFaceCenter * s};
}

}  // namespace srf
