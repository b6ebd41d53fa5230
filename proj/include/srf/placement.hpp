#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "srf/errors.hpp"

namespace srf {

/// Gaussian concentration of cross-sections around a center coordinate.
/// kappa = 0 gives uniform spacing; kappa -> 1 squeezes the spacing at the
/// center down to (1 - kappa) of the uniform value.
struct PlacementLaw {
  double kappa = 0.95;
  double sigma_frac = 0.2;  ///< Gaussian width as a fraction of the pole-to-pole length
  int fixed_point_iterations = 0;  ///< evaluate the Gaussian at the placed (not uniform) midpoints

  void validate() const {
    if (!(kappa >= 0.0 && kappa < 1.0)) throw ConfigError("kappa must lie in [0, 1)");
    if (!(sigma_frac > 0.0)) throw ConfigError("sigma_frac must be positive");
  }
};

/// Positions of n_s cross-sections strictly between two poles.
///
/// The pole-to-pole span is cut into n_s + 1 equal intervals; interval i gets
/// the tentative spacing  uniform * (1 - kappa exp(-(m_i/L)^2 / (2 sigma^2)))
/// where m_i is its midpoint measured from `center` and L the span. The
/// spacings are then rescaled by a common factor to fill the span exactly,
/// and the n_s interior break points are returned.
inline std::vector<double> place_nodes(double pole_lo, double pole_hi, std::size_t n_s,
                                       const PlacementLaw& law, double center) {
  law.validate();
  const double span = pole_hi - pole_lo;
  if (!(span > 0.0)) throw ConfigError("pole span must be positive");
  if (!(center > pole_lo && center < pole_hi)) throw ConfigError("placement center must lie between the poles");
  const std::size_t intervals = n_s + 1;
  const double uniform = span / static_cast<double>(intervals);
  const double two_sigma2 = 2.0 * law.sigma_frac * law.sigma_frac;
  auto law_at = [&](double mid) {
    const double u = (mid - center) / span;
    return uniform * (1.0 - law.kappa * std::exp(-u * u / two_sigma2));
  };

  std::vector<double> spacing(intervals);
  for (std::size_t i = 0; i < intervals; ++i) spacing[i] = law_at(pole_lo + (static_cast<double>(i) + 0.5) * uniform);

  auto normalize = [&](std::vector<double>& sp) {
    double total = 0.0;
    for (double d : sp) total += d;
    for (double& d : sp) d *= span / total;
  };
  normalize(spacing);
  for (int it = 0; it < law.fixed_point_iterations; ++it) {
    double x = pole_lo;
    std::vector<double> next(intervals);
    for (std::size_t i = 0; i < intervals; ++i) {
      next[i] = law_at(x + 0.5 * spacing[i]);
      x += spacing[i];
    }
    normalize(next);
    spacing = std::move(next);
  }

  std::vector<double> nodes(n_s);
  double x = pole_lo;
  for (std::size_t i = 0; i < n_s; ++i) {
    x += spacing[i];
    nodes[i] = x;
  }
  return nodes;
}

}  // namespace srf
