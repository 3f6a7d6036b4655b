#pragma once

#include <algorithm>
#include <cassert>

#include "hnls/tridiag.hpp"
#include "hnls/types.hpp"

namespace hnls {

/// Clamped cubic spline on strictly increasing knots. Endpoint slopes come
/// from one-sided 4-point Lagrange differentiation, keeping the moment
/// system strictly diagonally dominant and the interpolant O(h^4) accurate
/// up to the boundary. Evaluation outside the knot range continues the
/// first/last cubic piece.
template <class Scalar>
class CubicSpline {
 public:
  CubicSpline() = default;

  CubicSpline(const RealVec& x, const Vec<Scalar>& y) : x_(x), y_(y) {
    const Index n = x.size();
    assert(y.size() == n && n >= 4);
    Vec<Scalar> rhs(n);
    Tridiag<Real> sys;
    sys.lower.resize(n - 1);
    sys.upper.resize(n - 1);
    sys.diag.resize(n);

    auto h = [&](Index i) { return x_[i + 1] - x_[i]; };
    const Scalar s0 = end_slope(0, 1);
    const Scalar s1 = end_slope(n - 1, -1);

    sys.diag[0] = h(0) / 3.0;
    sys.upper[0] = h(0) / 6.0;
    rhs[0] = (y_[1] - y_[0]) / h(0) - s0;
    for (Index i = 1; i + 1 < n; ++i) {
      sys.lower[i - 1] = h(i - 1) / 6.0;
      sys.diag[i] = (h(i - 1) + h(i)) / 3.0;
      sys.upper[i] = h(i) / 6.0;
      rhs[i] = (y_[i + 1] - y_[i]) / h(i) - (y_[i] - y_[i - 1]) / h(i - 1);
    }
    sys.lower[n - 2] = h(n - 2) / 6.0;
    sys.diag[n - 1] = h(n - 2) / 3.0;
    rhs[n - 1] = s1 - (y_[n - 1] - y_[n - 2]) / h(n - 2);

    m_ = solve_mixed(sys, rhs);
  }

  Scalar operator()(Real x) const {
    const Index n = x_.size();
    Index i = std::upper_bound(x_.data(), x_.data() + n, x) - x_.data();
    i = std::clamp<Index>(i - 1, 0, n - 2);
    const Real h = x_[i + 1] - x_[i];
    const Real a = x_[i + 1] - x, b = x - x_[i];
    return m_[i] * (a * a * a) / (6.0 * h) + m_[i + 1] * (b * b * b) / (6.0 * h) +
           (y_[i] / h - m_[i] * (h / 6.0)) * a +
           (y_[i + 1] / h - m_[i + 1] * (h / 6.0)) * b;
  }

 private:
  // 4-point one-sided derivative at knot i0 (dir = +1 forward, -1 backward).
  Scalar end_slope(Index i0, int dir) const {
    Scalar s{};
    const Real x0 = x_[i0];
    for (int j = 0; j < 4; ++j) {
      const Index ij = i0 + dir * j;
      Real dl = 0;
      for (int k = 0; k < 4; ++k) {
        if (k == j) continue;
        Real prod = 1;
        for (int l = 0; l < 4; ++l) {
          if (l == j || l == k) continue;
          const Index il = i0 + dir * l;
          prod *= (x0 - x_[il]) / (x_[ij] - x_[il]);
        }
        dl += prod / (x_[ij] - x_[i0 + dir * k]);
      }
      s += y_[ij] * dl;
    }
    return s;
  }

  static Vec<Scalar> solve_mixed(const Tridiag<Real>& sys,
                                 const Vec<Scalar>& rhs) {
    if constexpr (std::is_same_v<Scalar, Real>) {
      return sys.solve(rhs);
    } else {
      Tridiag<Scalar> cs;
      cs.lower = sys.lower.template cast<Scalar>();
      cs.diag = sys.diag.template cast<Scalar>();
      cs.upper = sys.upper.template cast<Scalar>();
      return cs.solve(rhs);
    }
  }

  RealVec x_;
  Vec<Scalar> y_;
  Vec<Scalar> m_; // spline moments (second derivatives at knots)
};

} // namespace hnls
