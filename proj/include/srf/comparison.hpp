#pragma once

// Lattice vs continuum curves after a single time rescaling that makes the
// two pinch times coincide.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "srf/csv.hpp"

namespace srf {

/// Either input did not reach its pinch threshold.
class ComparisonRefused : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Waist, lobe and gap against time; times strictly increasing.
struct Curves {
  std::vector<double> t, waist, lobe, gap;
  bool pinched = false;
  double pinch_time = 0.0;

  std::size_t size() const { return t.size(); }

  template <class Rec>
  static Curves from_records(const std::vector<Rec>& traj, bool pinched, double pinch_time) {
    Curves c;
    c.pinched = pinched;
    c.pinch_time = pinch_time;
    for (const auto& r : traj) {
      if (!c.t.empty() && !(r.time > c.t.back())) continue;
      c.t.push_back(r.time);
      c.waist.push_back(r.waist_radius);
      c.lobe.push_back(r.lobe_radius);
      c.gap.push_back(r.radius_gap);
    }
    return c;
  }
};

/// Piecewise-linear value of (t, y) at x, clamped to the ends.
inline double interpolate(const std::vector<double>& t, const std::vector<double>& y, double x) {
  if (x <= t.front()) return y.front();
  if (x >= t.back()) return y.back();
  const auto it = std::upper_bound(t.begin(), t.end(), x);
  const std::size_t k = static_cast<std::size_t>(it - t.begin()) - 1;
  const double w = (x - t[k]) / (t[k + 1] - t[k]);
  return (1.0 - w) * y[k] + w * y[k + 1];
}

struct CurveDifference {
  double rms_relative = 0.0;  ///< sqrt(mean((a - b)^2 / b^2)) with b the reference curve
  double max_abs = 0.0;
};

struct Comparison {
  double time_scale = 1.0;  ///< factor applied to reference times
  std::vector<double> t;    ///< common grid in the subject's time
  std::vector<double> waist_a, waist_b, lobe_a, lobe_b, gap_a, gap_b;
  CurveDifference waist, lobe, gap;
};

namespace detail {
inline CurveDifference differ(const std::vector<double>& a, const std::vector<double>& b) {
  CurveDifference d;
  double acc = 0.0;
  std::size_t n = 0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    const double diff = a[k] - b[k];
    d.max_abs = std::max(d.max_abs, std::abs(diff));
    if (b[k] != 0.0) {
      acc += diff * diff / (b[k] * b[k]);
      ++n;
    }
  }
  d.rms_relative = n ? std::sqrt(acc / static_cast<double>(n)) : 0.0;
  return d;
}
}  // namespace detail

/// Compare subject a (the lattice run) with reference b (the continuum run).
/// b's clock is scaled by T_a / T_b; both are resampled on `points` uniform
/// times spanning the overlap of the two runs.
inline Comparison compare(const Curves& a, const Curves& b, std::size_t points = 200) {
  if (!a.pinched) throw ComparisonRefused("subject run did not pinch");
  if (!b.pinched) throw ComparisonRefused("reference run did not pinch");
  if (a.size() < 2 || b.size() < 2) throw ComparisonRefused("trajectories need at least two samples");
  if (!(a.pinch_time > 0.0) || !(b.pinch_time > 0.0) || !std::isfinite(a.pinch_time) || !std::isfinite(b.pinch_time))
    throw ComparisonRefused("pinch time estimates must be finite and positive");
  if (points < 2) throw std::invalid_argument("comparison grid needs at least two points");

  Comparison c;
  c.time_scale = a.pinch_time / b.pinch_time;
  std::vector<double> tb(b.t);
  for (double& x : tb) x *= c.time_scale;
  const double lo = std::max(a.t.front(), tb.front());
  const double hi = std::min(a.t.back(), tb.back());
  if (!(hi > lo)) throw ComparisonRefused("trajectories do not overlap in rescaled time");

  c.t.resize(points);
  for (std::size_t k = 0; k < points; ++k)
    c.t[k] = k + 1 == points ? hi : lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(points - 1);
  for (double x : c.t) {
    c.waist_a.push_back(interpolate(a.t, a.waist, x));
    c.waist_b.push_back(interpolate(tb, b.waist, x));
    c.lobe_a.push_back(interpolate(a.t, a.lobe, x));
    c.lobe_b.push_back(interpolate(tb, b.lobe, x));
    c.gap_a.push_back(interpolate(a.t, a.gap, x));
    c.gap_b.push_back(interpolate(tb, b.gap, x));
  }
  c.waist = detail::differ(c.waist_a, c.waist_b);
  c.lobe = detail::differ(c.lobe_a, c.lobe_b);
  c.gap = detail::differ(c.gap_a, c.gap_b);
  return c;
}

/// Plot-ready table: one row per common time.
inline void write_comparison(std::ostream& os, const Comparison& c) {
  csv::Writer w(os, {"time", "waist_srf", "waist_continuum", "lobe_srf", "lobe_continuum", "gap_srf", "gap_continuum"});
  for (std::size_t k = 0; k < c.t.size(); ++k)
    w.row(c.t[k], c.waist_a[k], c.waist_b[k], c.lobe_a[k], c.lobe_b[k], c.gap_a[k], c.gap_b[k]);
}

inline void write_comparison_summary(std::ostream& os, const Comparison& c) {
  csv::Writer w(os, {"curve", "rms_relative", "max_abs", "time_scale"});
  w.row("waist", c.waist.rms_relative, c.waist.max_abs, c.time_scale);
  w.row("lobe", c.lobe.rms_relative, c.lobe.max_abs, c.time_scale);
  w.row("gap", c.gap.rms_relative, c.gap.max_abs, c.time_scale);
}

}  // namespace srf
