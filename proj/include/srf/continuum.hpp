#pragma once

// Finite-difference Ricci flow of the warped product
//   g = phi(z)^2 dz^2 + rho(z)^2 g_S2,  z in [-pi/2, pi/2],
// on a uniform z grid. With primes denoting d/da = (1/phi) d/dz,
//   rho_t = rho'' - (1 - rho'^2) / rho,    phi_t = 2 phi rho'' / rho.
// The phi equation has no smoothing of its own, and in fixed z it runs away
// next to the poles. We therefore add the tangential reparametrization that
// keeps phi uniform in z (z stays proportional to proper distance); this
// changes coordinates only, not the evolving geometry.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <vector>

#include "srf/errors.hpp"
#include "srf/frustum.hpp"
#include "srf/pinch.hpp"
#include "srf/profile.hpp"

namespace srf {

enum class ContinuumBoundary {
  Poles,     ///< rho = 0 at both ends, odd reflection across each pole
  Periodic,  ///< test variant for cylinders
};

struct ContinuumState {
  std::vector<double> z;
  std::vector<double> rho;
  std::vector<double> phi;
  double time = 0.0;
  ContinuumBoundary boundary = ContinuumBoundary::Poles;
  bool pinched = false;  ///< rho reached 0 at an interior node

  std::size_t size() const { return z.size(); }
  double dz() const { return z[1] - z[0]; }
};

namespace detail {
inline void impose_pole_regularity(ContinuumState& st);
}

inline ContinuumState continuum_initial(const ProfileSpec& profile, std::size_t n_z) {
  profile.validate();
  if (n_z < 5 || n_z % 2 == 0) throw ConfigError("n_z must be odd and at least 5");
  ContinuumState st;
  st.z.resize(n_z);
  st.rho.resize(n_z);
  st.phi.assign(n_z, profile.R0);
  const double dz = kPi / static_cast<double>(n_z - 1);
  const std::size_t mid = (n_z - 1) / 2;
  for (std::size_t j = 0; j < n_z; ++j) {
    // Build from the middle out so the grid is exactly mirror-symmetric.
    const double off = (static_cast<double>(j) - static_cast<double>(mid)) * dz;
    st.z[j] = off;
  }
  for (std::size_t j = 0; j < n_z; ++j) {
    const std::size_t m = n_z - 1 - j;
    const double r = profile.radius(profile.R0 * std::abs(st.z[std::min(j, m)]));
    st.rho[j] = r;
  }
  st.rho.front() = 0.0;
  st.rho.back() = 0.0;
  detail::impose_pole_regularity(st);
  return st;
}

/// Largest stable explicit step, 0.25 min (phi dz)^2.
inline double continuum_cfl_limit(const ContinuumState& st) {
  const double dz = st.dz();
  double m = std::numeric_limits<double>::infinity();
  for (double p : st.phi) m = std::min(m, p * dz);
  return 0.25 * m * m;
}

namespace detail {

struct ContinuumRates {
  std::vector<double> rho_t, phi_t;
};

inline ContinuumRates continuum_rates(const ContinuumState& st) {
  const std::size_t n = st.size();
  const double dz = st.dz();
  const bool periodic = st.boundary == ContinuumBoundary::Periodic;
  const double phi = st.phi[0];  // uniform in this gauge
  const double h = phi * dz;
  ContinuumRates r;
  r.rho_t.assign(n, 0.0);
  r.phi_t.assign(n, 0.0);

  auto rho_at = [&](std::ptrdiff_t j) -> double {
    const auto N = static_cast<std::ptrdiff_t>(n);
    if (periodic) return st.rho[static_cast<std::size_t>(((j % (N - 1)) + (N - 1)) % (N - 1))];
    if (j < 0) return -st.rho[static_cast<std::size_t>(-j)];
    if (j >= N) return -st.rho[static_cast<std::size_t>(2 * (N - 1) - j)];
    return st.rho[static_cast<std::size_t>(j)];
  };

  // Geometric rates at fixed z, and q = rho''/rho which drives phi.
  std::vector<double> q(n, 0.0), rho_z(n, 0.0);
  const std::size_t lo = periodic ? 0 : 1;
  const std::size_t hi = n - 1;  // exclusive; the last periodic node mirrors the first
  for (std::size_t jj = lo; jj < hi; ++jj) {
    const auto j = static_cast<std::ptrdiff_t>(jj);
    const double rm = rho_at(j - 1), r0 = rho_at(j), rp = rho_at(j + 1);
    const double rho_a = (rp - rm) / (2.0 * h);
    const double rho_aa = ((rp + rm) - 2.0 * r0) / (h * h);
    r.rho_t[jj] = rho_aa - (1.0 - rho_a * rho_a) / r0;
    q[jj] = rho_aa / r0;
    rho_z[jj] = (rp - rm) / (2.0 * dz);
  }
  if (periodic) {
    q[n - 1] = q[0];
  } else {
    // rho''/rho is even about a pole and finite there.
    q[0] = q[1];
    q[n - 1] = q[n - 2];
  }

  // Reparametrize z -> z + xi(z, t) so that phi stays uniform: the unconstrained
  // phi_t = 2 phi q is replaced by its mean, and xi absorbs the difference.
  double mean_q = 0.0;
  for (std::size_t j = 0; j + 1 < n; ++j) mean_q += 0.5 * (q[j] + q[j + 1]);
  mean_q /= static_cast<double>(n - 1);
  // Integrated from both ends and averaged so mirrored data stay exactly mirrored.
  std::vector<double> g(n - 1), from_lo(n, 0.0), from_hi(n, 0.0), xi(n);
  for (std::size_t j = 0; j + 1 < n; ++j) g[j] = 2.0 * dz * (mean_q - 0.5 * (q[j] + q[j + 1]));
  for (std::size_t j = 0; j + 1 < n; ++j) from_lo[j + 1] = from_lo[j] + g[j];
  for (std::size_t j = n - 1; j > 0; --j) from_hi[j - 1] = from_hi[j] - g[j - 1];
  for (std::size_t j = 0; j < n; ++j) xi[j] = 0.5 * (from_lo[j] + from_hi[j]);
  if (periodic) {
    double mean_xi = 0.0;
    for (std::size_t j = 0; j + 1 < n; ++j) mean_xi += xi[j];
    mean_xi /= static_cast<double>(n - 1);
    for (double& x : xi) x -= mean_xi;
  }
  for (std::size_t j = lo; j < hi; ++j) r.rho_t[j] += xi[j] * rho_z[j];
  if (periodic) r.rho_t[n - 1] = r.rho_t[0];
  for (std::size_t j = 0; j < n; ++j) r.phi_t[j] = 2.0 * phi * mean_q;
  return r;
}

inline bool interior_nonpositive(const ContinuumState& st) {
  const bool periodic = st.boundary == ContinuumBoundary::Periodic;
  const std::size_t lo = periodic ? 0 : 1, hi = periodic ? st.size() : st.size() - 1;
  for (std::size_t j = lo; j < hi; ++j)
    if (!(st.rho[j] > 0.0)) return true;
  return false;
}

// Smoothness at a pole forces rho = a + c3 a^3 + c5 a^5 + ... in proper
// distance a. The cone mode (slope != 1) is not damped by the singular term,
// so the node next to each pole is slaved to the odd fit through the next two.
inline void impose_pole_regularity(ContinuumState& st) {
  if (st.boundary != ContinuumBoundary::Poles) return;
  const std::size_t n = st.size();
  const double h = st.phi[0] * st.dz();
  auto slave = [h](double r2, double r3) {
    // Solve c3 a^3 + c5 a^5 = rho - a at a = 2h, 3h.
    const double a2 = 2.0 * h, a3 = 3.0 * h;
    const double b2 = r2 - a2, b3 = r3 - a3;
    const double m11 = a2 * a2 * a2, m12 = m11 * a2 * a2, m21 = a3 * a3 * a3, m22 = m21 * a3 * a3;
    const double det = m11 * m22 - m12 * m21;
    const double c3 = (b2 * m22 - m12 * b3) / det, c5 = (m11 * b3 - m21 * b2) / det;
    return h + c3 * h * h * h + c5 * h * h * h * h * h;
  };
  st.rho[1] = slave(st.rho[2], st.rho[3]);
  st.rho[n - 2] = slave(st.rho[n - 3], st.rho[n - 4]);
}

}  // namespace detail

/// One classical RK4 step. Throws ConfigError if dt exceeds the CFL bound; a
/// stage that drives rho to zero inside the domain returns a state marked pinched.
inline ContinuumState continuum_step(const ContinuumState& st, double dt) {
  if (!(dt > 0.0) || dt > continuum_cfl_limit(st) * (1.0 + 1e-12))
    throw ConfigError("continuum step violates the CFL bound 0.25 min(phi dz)^2");
  const std::size_t n = st.size();
  auto advance = [&](const ContinuumState& base, const detail::ContinuumRates& k, double h) {
    ContinuumState out = base;
    for (std::size_t j = 0; j < n; ++j) {
      out.rho[j] = base.rho[j] + h * k.rho_t[j];
      out.phi[j] = base.phi[j] + h * k.phi_t[j];
    }
    detail::impose_pole_regularity(out);
    return out;
  };
  auto pinched = [&](const ContinuumState&) {
    ContinuumState out = st;
    out.pinched = true;
    return out;
  };
  const auto k1 = detail::continuum_rates(st);
  const ContinuumState s2 = advance(st, k1, 0.5 * dt);
  if (detail::interior_nonpositive(s2)) return pinched(s2);
  const auto k2 = detail::continuum_rates(s2);
  const ContinuumState s3 = advance(st, k2, 0.5 * dt);
  if (detail::interior_nonpositive(s3)) return pinched(s3);
  const auto k3 = detail::continuum_rates(s3);
  const ContinuumState s4 = advance(st, k3, dt);
  if (detail::interior_nonpositive(s4)) return pinched(s4);
  const auto k4 = detail::continuum_rates(s4);

  ContinuumState out = st;
  for (std::size_t j = 0; j < n; ++j) {
    out.rho[j] += dt / 6.0 * (k1.rho_t[j] + 2.0 * k2.rho_t[j] + 2.0 * k3.rho_t[j] + k4.rho_t[j]);
    out.phi[j] += dt / 6.0 * (k1.phi_t[j] + 2.0 * k2.phi_t[j] + 2.0 * k3.phi_t[j] + k4.phi_t[j]);
  }
  out.time = st.time + dt;
  detail::impose_pole_regularity(out);
  if (detail::interior_nonpositive(out)) out.pinched = true;
  return out;
}

struct ContinuumMeasurement {
  double waist_radius = 0.0;
  double lobe_radius = 0.0;
  std::size_t waist_index = 0;
  std::size_t lobe_index = 0;
};

inline ContinuumMeasurement continuum_measure(const ContinuumState& st) {
  const std::size_t n = st.size();
  ContinuumMeasurement m;
  const std::size_t lo = n / 3, hi = n - n / 3;
  m.waist_index = lo;
  for (std::size_t j = lo; j < hi; ++j)
    if (st.rho[j] < st.rho[m.waist_index]) m.waist_index = j;
  for (std::size_t j = 0; j < n; ++j)
    if (st.rho[j] > st.rho[m.lobe_index]) m.lobe_index = j;
  m.waist_radius = st.rho[m.waist_index];
  m.lobe_radius = st.rho[m.lobe_index];
  return m;
}

/// Total proper length, trapezoid rule on phi.
inline double proper_length(const ContinuumState& st) {
  double L = 0.0;
  for (std::size_t j = 0; j + 1 < st.size(); ++j) L += 0.5 * (st.phi[j] + st.phi[j + 1]) * st.dz();
  return L;
}

struct ContinuumRecord {
  double time = 0.0;
  double waist_radius = 0.0;
  double lobe_radius = 0.0;
  double radius_gap = 0.0;
  double proper_length = 0.0;
};

struct ContinuumConfig {
  std::size_t n_z = 401;
  double stop_fraction = 0.01;  ///< stop once the waist falls below this fraction of its initial value
  double cfl = 0.9;             ///< fraction of the CFL limit used
  double pinch_step = 0.001;    ///< dt also limited to this times waist^2
  std::size_t max_steps = 5000000;
  double max_time = std::numeric_limits<double>::infinity();
  std::size_t record_every = 1;

  void validate() const {
    if (n_z < 5 || n_z % 2 == 0) throw ConfigError("n_z must be odd and at least 5");
    if (!(stop_fraction > 0.0 && stop_fraction < 1.0)) throw ConfigError("stop_fraction must lie in (0, 1)");
    if (!(cfl > 0.0 && cfl <= 1.0)) throw ConfigError("cfl must lie in (0, 1]");
    if (!(pinch_step > 0.0)) throw ConfigError("pinch_step must be positive");
  }
};

enum class ContinuumOutcome { Pinched, StepLimit, Failed };

inline std::string_view to_string(ContinuumOutcome o) {
  switch (o) {
    case ContinuumOutcome::Pinched: return "Pinched";
    case ContinuumOutcome::StepLimit: return "StepLimit";
    case ContinuumOutcome::Failed:
    default: return "Failed";
  }
}

struct ContinuumRunResult {
  std::vector<ContinuumRecord> trajectory;
  ContinuumOutcome outcome = ContinuumOutcome::StepLimit;
  std::string error;
  ContinuumState final_state;
  double pinch_time_estimate = std::numeric_limits<double>::quiet_NaN();
  double initial_waist = 0.0;
  std::size_t steps = 0;
};

/// Evolve until the waist (or, for a uniformly collapsing sphere, the largest
/// radius) drops below stop_fraction of its initial value.
inline ContinuumRunResult continuum_run(const ProfileSpec& profile, const ContinuumConfig& cfg) {
  cfg.validate();
  ContinuumRunResult res;
  ContinuumState st = continuum_initial(profile, cfg.n_z);
  const ContinuumMeasurement m0 = continuum_measure(st);
  res.initial_waist = m0.waist_radius;
  const double lobe0 = m0.lobe_radius;

  auto record = [&](const ContinuumState& s) {
    const ContinuumMeasurement m = continuum_measure(s);
    res.trajectory.push_back({s.time, m.waist_radius, m.lobe_radius, m.lobe_radius - m.waist_radius, proper_length(s)});
  };
  record(st);
  std::size_t step = 0;
  for (;; ++step) {
    const ContinuumMeasurement m = continuum_measure(st);
    if (m.waist_radius < cfg.stop_fraction * res.initial_waist || m.lobe_radius < cfg.stop_fraction * lobe0) {
      res.outcome = ContinuumOutcome::Pinched;
      break;
    }
    if (step >= cfg.max_steps || st.time >= cfg.max_time) {
      res.outcome = ContinuumOutcome::StepLimit;
      break;
    }
    // Parabolic clock: samples are evenly spaced in log(waist^2), so the final
    // fraction of samples used for the pinch estimate lies at the pinch.
    const double dt = std::min(cfg.cfl * continuum_cfl_limit(st), cfg.pinch_step * m.waist_radius * m.waist_radius);
    ContinuumState next = continuum_step(st, dt);
    if (next.pinched) {
      res.outcome = ContinuumOutcome::Pinched;
      break;
    }
    bool finite = true;
    for (std::size_t j = 0; j < next.size() && finite; ++j)
      finite = std::isfinite(next.rho[j]) && std::isfinite(next.phi[j]) && next.phi[j] > 0.0;
    if (!finite) {
      res.outcome = ContinuumOutcome::Failed;
      res.error = "continuum solution lost finiteness or phi positivity at t=" + std::to_string(st.time);
      break;
    }
    st = std::move(next);
    if (cfg.record_every <= 1 || (step + 1) % cfg.record_every == 0) record(st);
  }
  if (res.trajectory.back().time < st.time) record(st);
  res.steps = step;
  res.final_state = st;
  if (res.outcome == ContinuumOutcome::Pinched)
    res.pinch_time_estimate = extrapolate_pinch_time(res.trajectory, 0.05, PinchWindow::FinalSamples);
  return res;
}

}  // namespace srf
