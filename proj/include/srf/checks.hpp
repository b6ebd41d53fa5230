#pragma once

// On-demand verification suites: closed forms against coordinates, assembled
// partials against finite differences, and the edge-form equations against
// the solved velocities.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "srf/frustum.hpp"
#include "srf/lattice.hpp"
#include "srf/profile.hpp"
#include "srf/rrf_system.hpp"
#include "srf/testing/coordinate_oracle.hpp"

namespace srf {

struct SuiteResult {
  std::string name;
  bool passed = true;
  std::size_t cases = 0;
  double worst = 0.0;  ///< largest error seen, in the suite's own measure
  double tolerance = 0.0;
  std::string detail;  ///< where the worst case occurred
};

struct CheckOptions {
  std::uint64_t seed = 1;
  std::size_t oracle_blocks = 100000;
  std::size_t lattice_states = 1000;
  AssemblyFault fault = AssemblyFault::None;
};

namespace detail {

/// Relative error with a floor: signed lengths pass through zero, so they are
/// compared against the block's length scale rather than their own size.
inline double scaled_error(double value, double reference, double floor) {
  return std::abs(value - reference) / std::max(std::abs(reference), floor);
}

/// A random valid frustum with edges spread over two decades, including
/// narrowing, widening and nearly degenerate shapes.
inline FrustumBlock random_block(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> log_len(std::log(0.1), std::log(10.0));
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (;;) {
    const double s_base = std::exp(log_len(rng)), s_cap = std::exp(log_len(rng));
    // a^2 between the degeneracy bound d^2/3 and a generous upper range.
    const double d = s_base - s_cap;
    const double lo = std::abs(d) / kSqrt3;
    const double a = lo + (std::exp(log_len(rng)) + 1e-3) * unit(rng);
    if (is_valid_block(a, s_base, s_cap)) return {a, s_base, s_cap};
  }
}

/// A perturbed copy of a built lattice: every edge scaled by up to +-5%.
inline LatticeState random_state(std::mt19937_64& rng) {
  static const LatticeState base_cq =
      build_lattice(ProfileSpec::cos_quartic(100.0, 0.1), 45, Placement::GaussianConcentrated);
  static const LatticeState base_uniform = build_lattice(ProfileSpec::cos_quartic(100.0, 0.1), 21, Placement::Uniform);
  std::uniform_real_distribution<double> jitter(-0.05, 0.05);
  std::bernoulli_distribution pick(0.5);
  for (;;) {
    LatticeState st = pick(rng) ? base_cq : base_uniform;
    for (double& v : st.s) v *= 1.0 + jitter(rng);
    for (double& v : st.a) v *= 1.0 + jitter(rng);
    if (!is_valid(st)) continue;
    try {
      (void)ricci(st);
    } catch (const std::exception&) {
      continue;
    }
    return st;
  }
}

}  // namespace detail

/// Every closed-form block quantity against the coordinate construction, plus
/// the regular icosahedron constants. Tolerance 1e-10, lengths relative to
/// max(|value|, largest edge), angles to max(|value|, 1), volumes to the cube.
inline SuiteResult check_geometry_oracle(const CheckOptions& opt) {
  SuiteResult r;
  r.name = "geometry-oracle";
  r.tolerance = 1e-10;
  std::mt19937_64 rng(opt.seed);
  auto note = [&r](double err, const std::string& what) {
    if (err > r.worst) {
      r.worst = err;
      r.detail = what;
    }
  };
  for (std::size_t k = 0; k < opt.oracle_blocks; ++k) {
    const FrustumBlock b = detail::random_block(rng);
    const BlockMetrics c = block_metrics(b);
    const BlockMetrics o = testing::FrustumCoordinates(b.a, b.s_base, b.s_cap).metrics();
    const double L = std::max({b.a, b.s_base, b.s_cap});
    const std::string where = "a=" + std::to_string(b.a) + " s_base=" + std::to_string(b.s_base) +
                              " s_cap=" + std::to_string(b.s_cap);
    note(detail::scaled_error(c.theta_axial, o.theta_axial, 1.0), "theta_axial " + where);
    note(detail::scaled_error(c.theta_base, o.theta_base, 1.0), "theta_base " + where);
    note(detail::scaled_error(c.theta_cap, o.theta_cap, 1.0), "theta_cap " + where);
    note(detail::scaled_error(c.sigma_half, o.sigma_half, L), "sigma_half " + where);
    note(detail::scaled_error(c.h_base, o.h_base, L), "h_base " + where);
    note(detail::scaled_error(c.h_cap, o.h_cap, L), "h_cap " + where);
    note(detail::scaled_error(c.m_a_sigma, o.m_a_sigma, L), "m_a_sigma " + where);
    note(detail::scaled_error(c.m_sbase_sigma, o.m_sbase_sigma, L), "m_sbase_sigma " + where);
    note(detail::scaled_error(c.m_scap_sigma, o.m_scap_sigma, L), "m_scap_sigma " + where);
    note(detail::scaled_error(c.m_sbase_alpha, o.m_sbase_alpha, L), "m_sbase_alpha " + where);
    note(detail::scaled_error(c.m_scap_alpha, o.m_scap_alpha, L), "m_scap_alpha " + where);
    note(detail::scaled_error(c.volume, o.volume, L * L * L), "volume " + where);
    ++r.cases;
  }
  const testing::IcosahedronCoordinates ico(1.0);
  const IcosahedronMetrics im = icosahedron_metrics(1.0);
  note(detail::scaled_error(im.dihedral, ico.dihedral_angle(), 1.0), "icosahedron dihedral");
  note(detail::scaled_error(im.circumradius, ico.circumradius(), 1.0), "icosahedron circumradius");
  note(detail::scaled_error(im.face_center_distance, ico.face_center_distance(), 1.0), "icosahedron face distance");
  note(detail::scaled_error(im.volume, ico.volume(), 1.0), "icosahedron volume");
  r.passed = r.worst <= r.tolerance;
  return r;
}

/// Dual areas of whole lattices against per-cell coordinate pieces.
inline SuiteResult check_dual_areas(const CheckOptions& opt) {
  SuiteResult r;
  r.name = "dual-areas";
  r.tolerance = 1e-10;
  std::mt19937_64 rng(opt.seed + 1);
  const std::size_t states = std::max<std::size_t>(1, opt.lattice_states / 10);
  for (std::size_t k = 0; k < states; ++k) {
    const LatticeState st = detail::random_state(rng);
    const DualMetrics d = dual_metrics(st);
    const testing::DualAreaOracle o(st);
    const double L = *std::max_element(st.s.begin(), st.s.end());
    for (std::size_t i = 0; i < st.s.size(); ++i) {
      const double e = detail::scaled_error(d.area_s_star[i], o.s_star[i], L * L);
      if (e > r.worst) r.worst = e, r.detail = "s* at " + std::to_string(i);
    }
    for (std::size_t i = 0; i < st.a.size(); ++i) {
      const double ea = detail::scaled_error(d.area_a_star[i], o.a_star[i], L * L);
      const double es = detail::scaled_error(d.area_sigma_star[i], o.sigma_star[i], L * L);
      if (ea > r.worst) r.worst = ea, r.detail = "a* at " + std::to_string(i);
      if (es > r.worst) r.worst = es, r.detail = "sigma* at " + std::to_string(i);
    }
    ++r.cases;
  }
  r.passed = r.worst <= r.tolerance;
  return r;
}

/// Assembled M against central differences of the dual edges. Entries are
/// compared relative to max(|entry|, 1e-3 * largest entry of the row).
inline SuiteResult check_partials(const CheckOptions& opt) {
  SuiteResult r;
  r.name = "fd-partials";
  r.tolerance = 1e-6;
  std::mt19937_64 rng(opt.seed + 2);
  for (std::size_t k = 0; k < opt.lattice_states; ++k) {
    const LatticeState st = detail::random_state(rng);
    const FlowSystem sys = assemble(st);
    const Eigen::VectorXd l = sys.edges;
    const Eigen::Index dim = l.size();
    Eigen::MatrixXd fd(dim, dim);
    for (Eigen::Index j = 0; j < dim; ++j) {
      const double h = 1e-5 * l[j];
      Eigen::VectorXd lp = l, lm = l;
      lp[j] += h;
      lm[j] -= h;
      fd.col(j) = (assemble(unpack(lp)).dual_edges - assemble(unpack(lm)).dual_edges) / (2.0 * h);
    }
    for (Eigen::Index i = 0; i < dim; ++i) {
      const double row_scale = sys.matrix.row(i).cwiseAbs().maxCoeff();
      for (Eigen::Index j = 0; j < dim; ++j) {
        const double e = detail::scaled_error(sys.matrix(i, j), fd(i, j), 1e-3 * row_scale);
        if (e > r.worst) {
          r.worst = e;
          r.detail = "state " + std::to_string(k) + " entry (" + std::to_string(i) + "," + std::to_string(j) + ")";
        }
      }
    }
    ++r.cases;
  }
  r.passed = r.worst <= r.tolerance;
  return r;
}

/// Velocities of the assembled system (optionally faulted) substituted into
/// the edge-form equations.
inline SuiteResult check_edge_equations(const CheckOptions& opt) {
  SuiteResult r;
  r.name = "edge-equations";
  r.tolerance = 1e-8;
  std::mt19937_64 rng(opt.seed + 3);
  for (std::size_t k = 0; k < opt.lattice_states; ++k) {
    const LatticeState st = detail::random_state(rng);
    Eigen::VectorXd v;
    try {
      v = velocity_field(st, opt.fault);
    } catch (const std::exception& e) {
      r.passed = false;
      r.worst = std::numeric_limits<double>::infinity();
      r.detail = std::string("state ") + std::to_string(k) + ": " + e.what();
      return r;
    }
    const double e = simplicial_residuals(st, v).max_abs();
    if (e > r.worst) r.worst = e, r.detail = "state " + std::to_string(k);
    ++r.cases;
  }
  r.passed = r.worst <= r.tolerance;
  return r;
}

inline std::vector<SuiteResult> run_check_suites(const CheckOptions& opt) {
  return {check_geometry_oracle(opt), check_dual_areas(opt), check_partials(opt), check_edge_equations(opt)};
}

}  // namespace srf
