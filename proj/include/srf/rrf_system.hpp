#pragma once

// Dual-edge Regge-Ricci flow system M * ldot = f.
//
// Unknowns are interleaved l = (s_0, a_0, s_1, a_1, ..., s_{n-1}), so s_i is
// column 2i and a_i column 2i + 1. Rows follow the same pattern: the alpha_i
// equation is row 2i and the sigma_i equation row 2i + 1. An alpha row touches
// columns 2i-2 .. 2i+2 and a sigma row columns 2i .. 2i+2, so M has at most
// two sub- and two super-diagonals.

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <ostream>
#include <string>
#include <vector>

#include "srf/autodiff.hpp"
#include "srf/errors.hpp"
#include "srf/frustum.hpp"
#include "srf/lattice.hpp"

namespace srf {

inline constexpr double kMaxCondition = 1e14;

inline std::size_t system_dimension(std::size_t n_s) { return 2 * n_s - 1; }

inline Eigen::VectorXd pack(const LatticeState& st) {
  const std::size_t n = st.s.size();
  Eigen::VectorXd l(system_dimension(n));
  for (std::size_t i = 0; i < n; ++i) l[2 * i] = st.s[i];
  for (std::size_t i = 0; i + 1 < n; ++i) l[2 * i + 1] = st.a[i];
  return l;
}

inline LatticeState unpack(const Eigen::VectorXd& l, double time = 0.0) {
  const std::size_t dim = static_cast<std::size_t>(l.size());
  if (dim < 1 || dim % 2 == 0) throw ConfigError("edge vector must have odd length");
  const std::size_t n = (dim + 1) / 2;
  LatticeState st;
  st.s.resize(n);
  st.a.resize(n - 1);
  for (std::size_t i = 0; i < n; ++i) st.s[i] = l[2 * i];
  for (std::size_t i = 0; i + 1 < n; ++i) st.a[i] = l[2 * i + 1];
  st.time = time;
  return st;
}

struct RicciValues {
  std::vector<double> rc_alpha;  ///< per icosahedron
  std::vector<double> rc_sigma;  ///< per block
};

namespace detail {
inline void require_positive(double v, const std::string& edge) {
  if (!(v > 0.0) || !std::isfinite(v))
    throw SingularGeometryError(edge, "nonpositive dual area at " + edge + " (" + std::to_string(v) + ")");
}
}  // namespace detail

inline RicciValues ricci(const LatticeState& st, const DualMetrics& d) {
  const std::size_t n = st.s.size();
  for (std::size_t i = 0; i < n; ++i) detail::require_positive(d.area_s_star[i], "s*" + std::to_string(i));
  for (std::size_t i = 0; i + 1 < n; ++i) {
    detail::require_positive(d.area_a_star[i], "a*" + std::to_string(i));
    detail::require_positive(d.area_sigma_star[i], "sigma*" + std::to_string(i));
  }
  RicciValues rc;
  rc.rc_alpha.resize(n);
  rc.rc_sigma.resize(n - 1);
  for (std::size_t i = 0; i < n; ++i) rc.rc_alpha[i] = 2.0 * d.eps_s[i] / d.area_s_star[i];
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const auto& b = d.blocks[i];
    const double axial = 2.0 * st.a[i] * b.m_a_sigma / d.area_a_star[i] * d.eps_a[i];
    const double base = st.s[i] * b.m_sbase_sigma / d.area_s_star[i] * d.eps_s[i];
    const double cap = st.s[i + 1] * b.m_scap_sigma / d.area_s_star[i + 1] * d.eps_s[i + 1];
    rc.rc_sigma[i] = (axial + base + cap) / d.area_sigma_star[i];
  }
  return rc;
}

inline RicciValues ricci(const LatticeState& st) { return ricci(st, dual_metrics(st)); }

/// Deliberate faults for mutation testing of the check suites.
enum class AssemblyFault { None, FlipAlphaMomentArm };

struct FlowSystem {
  Eigen::VectorXd edges;      ///< l
  Eigen::MatrixXd matrix;     ///< M, d(alpha, sigma)/dl
  Eigen::VectorXd rhs;        ///< f
  Eigen::VectorXd dual_edges; ///< (alpha_0, sigma_0, alpha_1, ...) in row order
};

/// Partials of alpha and sigma with respect to the edges, in row/column layout.
inline Eigen::MatrixXd dual_edge_jacobian(const LatticeState& st) {
  using D3 = Dual<3>;
  const std::size_t n = st.s.size();
  const std::size_t dim = system_dimension(n);
  Eigen::MatrixXd M = Eigen::MatrixXd::Zero(dim, dim);
  std::vector<BlockMetricsT<D3>> bd(n - 1);
  for (std::size_t i = 0; i + 1 < n; ++i)
    bd[i] = block_metrics_of(D3::variable(st.a[i], 0), D3::variable(st.s[i], 1), D3::variable(st.s[i + 1], 2));

  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t r = 2 * i;
    if (i == 0) {
      M(r, 0) += kIcosaFaceCenter;
    } else {
      const D3& h = bd[i - 1].h_cap;
      M(r, r - 1) += h.d[0];
      M(r, r - 2) += h.d[1];
      M(r, r) += h.d[2];
    }
    if (i + 1 == n) {
      M(r, r) += kIcosaFaceCenter;
    } else {
      const D3& h = bd[i].h_base;
      M(r, r + 1) += h.d[0];
      M(r, r) += h.d[1];
      M(r, r + 2) += h.d[2];
    }
  }
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const std::size_t r = 2 * i + 1;
    const D3& sh = bd[i].sigma_half;
    M(r, r) = 2.0 * sh.d[0];
    M(r, r - 1) = 2.0 * sh.d[1];
    M(r, r + 1) = 2.0 * sh.d[2];
  }
  return M;
}

inline FlowSystem assemble(const LatticeState& st, AssemblyFault fault = AssemblyFault::None) {
  DualMetrics d = dual_metrics(st);
  const std::size_t n = st.s.size();
  if (fault == AssemblyFault::FlipAlphaMomentArm) {
    // Rebuild s* with the sign of m_{s alpha} reversed.
    for (std::size_t i = 0; i < n; ++i) d.area_s_star[i] -= 2.0 * (kSqrt3 / 6.0 * st.s[i]) * d.alpha[i];
    for (double& v : d.area_s_star) v = std::abs(v);
  }
  const RicciValues rc = ricci(st, d);

  FlowSystem sys;
  sys.edges = pack(st);
  sys.matrix = dual_edge_jacobian(st);
  const std::size_t dim = system_dimension(n);
  sys.rhs.resize(dim);
  sys.dual_edges.resize(dim);
  for (std::size_t i = 0; i < n; ++i) {
    sys.dual_edges[2 * i] = d.alpha[i];
    sys.rhs[2 * i] = -d.alpha[i] * rc.rc_alpha[i];
  }
  for (std::size_t i = 0; i + 1 < n; ++i) {
    sys.dual_edges[2 * i + 1] = d.sigma[i];
    sys.rhs[2 * i + 1] = -d.sigma[i] * rc.rc_sigma[i];
  }
  return sys;
}

struct SolveResult {
  Eigen::VectorXd velocities;
  double condition_estimate = 0.0;  ///< 1-norm estimate, 1/rcond
  double relative_residual = 0.0;
};

inline SolveResult solve_velocities_ex(const FlowSystem& sys) {
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(sys.matrix);
  const double rcond = lu.rcond();
  const double cond = rcond > 0.0 ? 1.0 / rcond : std::numeric_limits<double>::infinity();
  if (!(cond <= kMaxCondition))
    throw SolverError(cond, "flow matrix is numerically singular (condition estimate " + std::to_string(cond) + ")");
  SolveResult out;
  out.condition_estimate = cond;
  out.velocities = lu.solve(sys.rhs);
  auto residual_ratio = [&](const Eigen::VectorXd& x) {
    const double scale = sys.matrix.norm() * x.norm() + sys.rhs.norm();
    const double r = (sys.matrix * x - sys.rhs).norm();
    return scale > 0.0 ? r / scale : r;
  };
  out.relative_residual = residual_ratio(out.velocities);
  if (out.relative_residual > 1e-10) {
    out.velocities += lu.solve(sys.rhs - sys.matrix * out.velocities);
    out.relative_residual = residual_ratio(out.velocities);
  }
  if (!std::isfinite(out.relative_residual) || out.relative_residual > 1e-10)
    throw SolverError(cond, "flow solve residual too large (" + std::to_string(out.relative_residual) + ")");
  return out;
}

inline Eigen::VectorXd solve_velocities(const FlowSystem& sys) { return solve_velocities_ex(sys).velocities; }

/// ldot(l) for a state; throws on invalid geometry or a singular solve.
inline Eigen::VectorXd velocity_field(const LatticeState& st, AssemblyFault fault = AssemblyFault::None) {
  return solve_velocities(assemble(st, fault));
}

/// 2-norm condition number from singular values.
inline double condition_number(const Eigen::MatrixXd& A) {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(A);
  const auto& sv = svd.singularValues();
  const double smin = sv[sv.size() - 1];
  return smin > 0.0 ? sv[0] / smin : std::numeric_limits<double>::infinity();
}

struct SimplicialResiduals {
  std::vector<double> res_s;  ///< per icosahedral edge
  std::vector<double> res_a;  ///< per axial edge
  double max_abs() const {
    double m = 0.0;
    for (double v : res_s) m = std::max(m, std::abs(v));
    for (double v : res_a) m = std::max(m, std::abs(v));
    return m;
  }
};

/// Edge-form equations: each s_i equation is a moment-arm weighted sum of the
/// sigma and alpha terms that touch s_i, each a_i equation is the sigma_i term.
/// Dual-edge rates come from the chain rule on the supplied velocities. Every
/// residual is divided by the magnitude of its largest constituent term.
inline SimplicialResiduals simplicial_residuals(const LatticeState& st, const Eigen::VectorXd& velocities) {
  const DualMetrics d = dual_metrics(st);
  const std::size_t n = st.s.size();
  const Eigen::VectorXd rates = dual_edge_jacobian(st) * velocities;
  constexpr double tiny = std::numeric_limits<double>::min();

  // Each term is rate + curvature part; keep both for scaling.
  std::vector<double> sig_rate(n - 1), sig_curv(n - 1), alp_rate(n), alp_curv(n);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const auto& b = d.blocks[i];
    const double brace = st.s[i] / d.area_s_star[i] * b.m_sbase_sigma * d.eps_s[i] +
                         st.s[i + 1] / d.area_s_star[i + 1] * b.m_scap_sigma * d.eps_s[i + 1] +
                         2.0 * st.a[i] / d.area_a_star[i] * b.m_a_sigma * d.eps_a[i];
    sig_rate[i] = rates[2 * i + 1];
    sig_curv[i] = d.sigma[i] / d.area_sigma_star[i] * brace;
  }
  for (std::size_t i = 0; i < n; ++i) {
    const double m_alpha = kSqrt3 / 6.0 * st.s[i];
    alp_rate[i] = rates[2 * i];
    alp_curv[i] = 3.0 * d.alpha[i] / d.area_alpha_star[i] * st.s[i] / d.area_s_star[i] * m_alpha * d.eps_s[i];
  }

  SimplicialResiduals out;
  out.res_s.resize(n);
  out.res_a.resize(n - 1);
  for (std::size_t i = 0; i < n; ++i) {
    double sum = 0.0, scale = 0.0;
    auto add = [&](double w, double rate, double curv) {
      sum += w * (rate + curv);
      scale = std::max({scale, std::abs(w * rate), std::abs(w * curv)});
    };
    if (i > 0) add(d.blocks[i - 1].m_scap_sigma, sig_rate[i - 1], sig_curv[i - 1]);
    if (i + 1 < n) add(d.blocks[i].m_sbase_sigma, sig_rate[i], sig_curv[i]);
    add(2.0 * kSqrt3 / 6.0 * st.s[i], alp_rate[i], alp_curv[i]);
    out.res_s[i] = sum / std::max(scale, tiny);
  }
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const double scale = std::max({std::abs(sig_rate[i]), std::abs(sig_curv[i]), tiny});
    out.res_a[i] = (sig_rate[i] + sig_curv[i]) / scale;
  }
  return out;
}

struct EigenSummary {
  int n_pos_real = 0;
  int n_neg_real = 0;
  double max_real = 0.0;
};

struct JacobianDiagnostics {
  bool available = false;
  double condition_number_M = 0.0;
  double condition_number_J = 0.0;
  EigenSummary eigen;
  Eigen::MatrixXd J;
};

/// J = d(M^-1 f)/dl by central differences with relative step probe_step.
inline JacobianDiagnostics jacobian_diagnostics(const LatticeState& st, double probe_step = 1e-6) {
  JacobianDiagnostics out;
  const FlowSystem sys = assemble(st);
  out.condition_number_M = condition_number(sys.matrix);
  const Eigen::VectorXd l = sys.edges;
  const Eigen::Index dim = l.size();
  out.J.resize(dim, dim);
  try {
    for (Eigen::Index j = 0; j < dim; ++j) {
      const double h = probe_step * l[j];
      Eigen::VectorXd lp = l, lm = l;
      lp[j] += h;
      lm[j] -= h;
      out.J.col(j) = (velocity_field(unpack(lp)) - velocity_field(unpack(lm))) / (2.0 * h);
    }
  } catch (const std::exception&) {
    out.available = false;
    return out;
  }
  out.available = out.J.allFinite();
  if (!out.available) return out;
  out.condition_number_J = condition_number(out.J);
  Eigen::EigenSolver<Eigen::MatrixXd> es(out.J, false);
  const auto ev = es.eigenvalues();
  out.eigen.max_real = -std::numeric_limits<double>::infinity();
  for (Eigen::Index k = 0; k < ev.size(); ++k) {
    const double re = ev[k].real();
    if (re > 0.0) ++out.eigen.n_pos_real;
    if (re < 0.0) ++out.eigen.n_neg_real;
    out.eigen.max_real = std::max(out.eigen.max_real, re);
  }
  return out;
}

/// Matrix-market coordinate layout: banner, "rows cols nnz", then 1-based
/// "i j value" triples for M; a second array section holds f.
inline void write_system(std::ostream& os, const FlowSystem& sys) {
  const Eigen::Index dim = sys.matrix.rows();
  std::size_t nnz = 0;
  for (Eigen::Index i = 0; i < dim; ++i)
    for (Eigen::Index j = 0; j < dim; ++j) nnz += sys.matrix(i, j) != 0.0;
  os.precision(17);
  os << "%%MatrixMarket matrix coordinate real general\n";
  os << "% M: rows alpha_0, sigma_0, alpha_1, ...; columns s_0, a_0, s_1, ...\n";
  os << dim << ' ' << dim << ' ' << nnz << '\n';
  for (Eigen::Index i = 0; i < dim; ++i)
    for (Eigen::Index j = 0; j < dim; ++j)
      if (sys.matrix(i, j) != 0.0) os << i + 1 << ' ' << j + 1 << ' ' << sys.matrix(i, j) << '\n';
  os << "%%MatrixMarket matrix array real general\n";
  os << "% f\n";
  os << dim << " 1\n";
  for (Eigen::Index i = 0; i < dim; ++i) os << sys.rhs[i] << '\n';
}

}  // namespace srf
