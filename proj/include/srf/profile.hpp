#pragma once

#include <cmath>
#include <string>
#include <string_view>

#include "srf/errors.hpp"
#include "srf/frustum.hpp"

namespace srf {

enum class ProfileKind { CosQuartic, AngenentKnopf, Sphere };

/// Radial profile rho(a) of an axisymmetric 3-geometry, a in R0*[-pi/2, pi/2].
struct ProfileSpec {
  ProfileKind kind = ProfileKind::CosQuartic;
  double R0 = 100.0;
  double rho0 = 0.1;  ///< waist parameter (CosQuartic)
  double A = 0.1;     ///< pinch parameter (AngenentKnopf)

  static ProfileSpec cos_quartic(double R0, double rho0) { return {ProfileKind::CosQuartic, R0, rho0, 0.1}; }
  static ProfileSpec sphere(double R0) { return {ProfileKind::Sphere, R0, 1.0, 0.1}; }
  static ProfileSpec angenent_knopf(double R0, double A) { return {ProfileKind::AngenentKnopf, R0, 1.0, A}; }

  /// Half of the pole-to-pole geodesic length.
  double half_length() const { return R0 * kPi / 2.0; }

  /// B of the parabolic waist, fixed by continuity at |a|/R0 = pi/4.
  double ak_B() const { return (0.5 - A) * 16.0 / (kPi * kPi); }

  void validate() const {
    if (!(R0 > 0.0)) throw ConfigError("profile R0 must be positive");
    if (kind == ProfileKind::CosQuartic && !(rho0 > 0.0 && rho0 <= 1.0))
      throw ConfigError("profile rho0 must lie in (0, 1]");
    if (kind == ProfileKind::AngenentKnopf && !(A > 0.0))
      throw ConfigError("Angenent-Knopf parameter A must be positive");
  }

  double radius(double a) const {
    const double x = a / R0;
    switch (kind) {
      case ProfileKind::Sphere:
        return R0 * std::cos(x);
      case ProfileKind::AngenentKnopf:
        if (std::abs(x) >= kPi / 4.0) return R0 * std::cos(x);
        return R0 * std::sqrt(A + ak_B() * x * x);
      case ProfileKind::CosQuartic:
      default: {
        const double c = std::cos(x);
        return R0 * (c - (1.0 - rho0) * c * c * c * c);
      }
    }
  }
};

inline std::string_view to_string(ProfileKind k) {
  switch (k) {
    case ProfileKind::Sphere: return "sphere";
    case ProfileKind::AngenentKnopf: return "angenent-knopf";
    case ProfileKind::CosQuartic:
    default: return "cos-quartic";
  }
}

inline ProfileKind parse_profile_kind(std::string_view s) {
  if (s == "cos-quartic" || s == "cosquartic" || s == "cos4") return ProfileKind::CosQuartic;
  if (s == "sphere") return ProfileKind::Sphere;
  if (s == "angenent-knopf" || s == "ak") return ProfileKind::AngenentKnopf;
  throw ConfigError("unknown profile kind '" + std::string(s) + "'");
}

}  // namespace srf
