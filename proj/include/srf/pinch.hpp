#pragma once

#include <cstddef>
#include <limits>
#include <vector>

namespace srf {

/// Which part of a trajectory counts as its tail.
enum class PinchWindow { FinalTime, FinalSamples };

/// Linear fit of waist^2 against t over the final `fraction` of the run (by
/// elapsed time or by sample count), extrapolated to waist^2 = 0.
template <class Rec>
double extrapolate_pinch_time(const std::vector<Rec>& traj, double fraction = 0.05,
                              PinchWindow window = PinchWindow::FinalTime) {
  const double nan = std::numeric_limits<double>::quiet_NaN();
  if (traj.size() < 2) return nan;
  const double t_end = traj.back().time, t_begin = traj.front().time;
  const double t_cut = t_end - fraction * (t_end - t_begin);
  const auto k_cut = traj.size() - static_cast<std::size_t>(fraction * static_cast<double>(traj.size()));
  double n = 0, st = 0, sy = 0, stt = 0, sty = 0;
  for (std::size_t k = 0; k < traj.size(); ++k) {
    const auto& r = traj[k];
    if (window == PinchWindow::FinalTime ? r.time < t_cut : k < k_cut) continue;
    const double y = r.waist_radius * r.waist_radius;
    n += 1;
    st += r.time;
    sy += y;
    stt += r.time * r.time;
    sty += r.time * y;
  }
  if (n < 2) {
    const auto& p = traj[traj.size() - 2];
    const auto& q = traj.back();
    const double yp = p.waist_radius * p.waist_radius, yq = q.waist_radius * q.waist_radius;
    const double slope = (yq - yp) / (q.time - p.time);
    return slope < 0.0 ? q.time - yq / slope : nan;
  }
  const double slope = (n * sty - st * sy) / (n * stt - st * st);
  const double icpt = (sy - slope * st) / n;
  return slope < 0.0 ? -icpt / slope : nan;
}

}  // namespace srf
