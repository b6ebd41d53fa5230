#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace srf {

/// Natural cubic interpolant through (x_k, y_k), x strictly increasing.
class NaturalCubicSpline {
 public:
  NaturalCubicSpline(std::vector<double> x, std::vector<double> y) : x_(std::move(x)), y_(std::move(y)) {
    const std::size_t n = x_.size();
    if (n < 2 || y_.size() != n) throw std::invalid_argument("spline needs at least two matching points");
    for (std::size_t k = 0; k + 1 < n; ++k)
      if (!(x_[k + 1] > x_[k])) throw std::invalid_argument("spline abscissae must increase strictly");
    m_.assign(n, 0.0);
    if (n == 2) return;
    // Thomas algorithm for the interior second derivatives.
    const std::size_t k_max = n - 2;
    std::vector<double> diag(k_max), upper(k_max), rhs(k_max);
    for (std::size_t k = 1; k + 1 < n; ++k) {
      const double h0 = x_[k] - x_[k - 1], h1 = x_[k + 1] - x_[k];
      diag[k - 1] = 2.0 * (h0 + h1);
      upper[k - 1] = h1;
      rhs[k - 1] = 6.0 * ((y_[k + 1] - y_[k]) / h1 - (y_[k] - y_[k - 1]) / h0);
    }
    for (std::size_t k = 1; k < k_max; ++k) {
      const double lower = x_[k + 1] - x_[k];  // h of row k equals upper of row k-1
      const double w = lower / diag[k - 1];
      diag[k] -= w * upper[k - 1];
      rhs[k] -= w * rhs[k - 1];
    }
    m_[k_max] = rhs[k_max - 1] / diag[k_max - 1];
    for (std::size_t k = k_max - 1; k >= 1; --k) m_[k] = (rhs[k - 1] - upper[k - 1] * m_[k + 1]) / diag[k - 1];
  }

  double front() const { return x_.front(); }
  double back() const { return x_.back(); }
  std::size_t size() const { return x_.size(); }

  double operator()(double t) const {
    const std::size_t k = segment(t);
    const double h = x_[k + 1] - x_[k];
    const double u = (x_[k + 1] - t) / h, v = (t - x_[k]) / h;
    return u * y_[k] + v * y_[k + 1] + ((u * u * u - u) * m_[k] + (v * v * v - v) * m_[k + 1]) * h * h / 6.0;
  }

  double derivative(double t) const {
    const std::size_t k = segment(t);
    const double h = x_[k + 1] - x_[k];
    const double u = (x_[k + 1] - t) / h, v = (t - x_[k]) / h;
    return (y_[k + 1] - y_[k]) / h + ((1.0 - 3.0 * u * u) * m_[k] + (3.0 * v * v - 1.0) * m_[k + 1]) * h / 6.0;
  }

  /// Location of the smallest value on [lo, hi] (interior critical points or ends).
  double argmin(double lo, double hi) const {
    double best_t = lo, best = (*this)(lo);
    auto consider = [&](double t) {
      if (t < lo || t > hi) return;
      const double v = (*this)(t);
      if (v < best) best = v, best_t = t;
    };
    consider(hi);
    for (std::size_t k = 0; k + 1 < x_.size(); ++k) {
      if (x_[k + 1] < lo || x_[k] > hi) continue;
      // On segment k the derivative is a quadratic in v = (t - x_k)/h.
      const double h = x_[k + 1] - x_[k];
      const double slope = (y_[k + 1] - y_[k]) / h;
      const double mk = m_[k], mk1 = m_[k + 1];
      // d = slope + h/6 [ (1 - 3(1-v)^2) mk + (3v^2 - 1) mk1 ]
      const double qa = 0.5 * h * (mk1 - mk);
      const double qb = h * mk;
      const double qc = slope - h * (2.0 * mk + mk1) / 6.0;
      std::vector<double> roots;
      if (std::abs(qa) < 1e-300) {
        if (std::abs(qb) > 1e-300) roots.push_back(-qc / qb);
      } else {
        const double disc = qb * qb - 4.0 * qa * qc;
        if (disc >= 0.0) {
          const double sq = std::sqrt(disc);
          roots.push_back((-qb + sq) / (2.0 * qa));
          roots.push_back((-qb - sq) / (2.0 * qa));
        }
      }
      for (double v : roots)
        if (v >= 0.0 && v <= 1.0) consider(x_[k] + v * h);
    }
    return best_t;
  }

 private:
  std::size_t segment(double t) const {
    if (t <= x_.front()) return 0;
    if (t >= x_.back()) return x_.size() - 2;
    const auto it = std::upper_bound(x_.begin(), x_.end(), t);
    return static_cast<std::size_t>(it - x_.begin()) - 1;
  }

  std::vector<double> x_, y_, m_;
};

}  // namespace srf
