#include "hnls/shooting.hpp"

#include <cmath>
#include <vector>

#include "hnls/errors.hpp"
#include "hnls/interp.hpp"

namespace hnls {

namespace {

struct OdeParams {
  int d;
  Real c, alpha, omega;
};

// y = (Q, Q'), singular radial ODE in first-order form.
inline void rhs(const OdeParams& p, Real r, const Real y[2], Real dy[2]) {
  const Real q = y[0];
  const Real nl = std::pow(std::abs(q), p.alpha) * q;
  dy[0] = y[1];
  dy[1] = -(Real(p.d - 1) / r) * y[1] - (p.c / (r * r)) * q + p.omega * q - nl;
}

inline void rk4_step(const OdeParams& p, Real r, Real h, Real y[2]) {
  Real k1[2], k2[2], k3[2], k4[2], t[2];
  rhs(p, r, y, k1);
  t[0] = y[0] + 0.5 * h * k1[0];
  t[1] = y[1] + 0.5 * h * k1[1];
  rhs(p, r + 0.5 * h, t, k2);
  t[0] = y[0] + 0.5 * h * k2[0];
  t[1] = y[1] + 0.5 * h * k2[1];
  rhs(p, r + 0.5 * h, t, k3);
  t[0] = y[0] + h * k3[0];
  t[1] = y[1] + h * k3[1];
  rhs(p, r + h, t, k4);
  y[0] += (h / 6.0) * (k1[0] + 2.0 * k2[0] + 2.0 * k3[0] + k4[0]);
  y[1] += (h / 6.0) * (k1[1] + 2.0 * k2[1] + 2.0 * k3[1] + k4[1]);
}

// indicial polynomial P(s) = s^2 + (d-2)s + c, roots -rho and rho-(d-2)
inline Real indicial(const ModelParams& p, Real s) {
  return s * s + Real(p.d - 2) * s + p.c;
}

// Frobenius start Q = a r^m (1 + A r^{2+m*alpha} + B r^2), m = -rho.
// B balances the omega term, A the nonlinear term; both corrections enter
// at the same order when rho = 0.
struct FrobeniusStart {
  Real m, A, B, expA;

  FrobeniusStart(const ModelParams& p, Real omega, Real a) {
    m = -p.rho;
    const Real pb = indicial(p, m + 2.0);
    B = omega / pb;
    expA = 2.0 + m * p.alpha;
    const Real pa = indicial(p, m * (1.0 + p.alpha) + 2.0);
    A = std::abs(pa) > 1e-10 ? -std::pow(a, p.alpha) / pa : 0.0;
  }

  void eval(Real a, Real r, Real y[2]) const {
    const Real rm = std::pow(r, m);
    const Real corr = 1.0 + A * std::pow(r, expA) + B * r * r;
    const Real dcorr = A * expA * std::pow(r, expA - 1.0) + 2.0 * B * r;
    y[0] = a * rm * corr;
    y[1] = a * (m * std::pow(r, m - 1.0) * corr + rm * dcorr);
  }
};

enum class Shot { Low, High };

struct Trace {
  std::vector<Real> r, q, dq;
};

// Integrate one shot; optionally record the trajectory. Returns High when
// the profile crosses zero, Low when it stays positive to the end (or
// decays below resolution, or turns around and grows).
Shot integrate(const ModelParams& p, Real omega, Real a, Real r0, Real r_end,
               Real step_rel, Real h_max, Trace* trace) {
  OdeParams op{p.d, p.c, p.alpha, omega};
  FrobeniusStart frob(p, omega, a);
  Real y[2];
  frob.eval(a, r0, y);
  Real r = r0;
  Real peak = std::abs(y[0]);
  if (trace) {
    trace->r.push_back(r);
    trace->q.push_back(y[0]);
    trace->dq.push_back(y[1]);
  }
  while (r < r_end) {
    const Real h = std::min({h_max, std::max(step_rel * r, 1e-8), r_end - r});
    rk4_step(op, r, h, y);
    r += h;
    if (y[0] <= 0.0) return Shot::High;
    peak = std::max(peak, y[0]);
    if (trace) {
      trace->r.push_back(r);
      trace->q.push_back(y[0]);
      trace->dq.push_back(y[1]);
    }
    if (y[0] > 1e8 * peak) return Shot::Low;            // turned around, grows
    if (y[0] < 1e-13 * peak && y[1] < 0.0) return Shot::Low; // fully decayed
  }
  return Shot::Low;
}

} // namespace

ShootingSolution shoot_elliptic(const ModelParams& p, Real omega,
                                ShootOptions opts) {
  if (!(omega > 0)) throw DomainError("shoot_elliptic requires omega > 0");
  const Real sw = std::sqrt(omega);
  const Real r_end = opts.r_end > 0 ? opts.r_end : std::max(24.0, 30.0 / sw);
  const Real r0 = opts.r_start_frac * r_end;
  const Real h_max = opts.h_max > 0 ? opts.h_max : 2e-3 / std::max(sw, 0.25);

  // amplitude scale: peak of the 1d soliton, a decent order-of-magnitude
  Real a0 = opts.amp_guess > 0
                ? opts.amp_guess
                : std::pow(omega * (p.alpha + 2.0) / 2.0, 1.0 / p.alpha);
  // bracket scan: grow a until the shot flips from Low to High
  Real a_lo = 0, a_hi = 0;
  Real a = a0 / 64.0;
  Shot prev = integrate(p, omega, a, r0, r_end, opts.step_rel, h_max, nullptr);
  if (prev == Shot::High) {
    // start already too large; shrink until Low
    while (a > a0 * 1e-8) {
      a /= 2.0;
      if (integrate(p, omega, a, r0, r_end, opts.step_rel, h_max, nullptr) ==
          Shot::Low) {
        a_lo = a;
        a_hi = 2.0 * a;
        break;
      }
    }
  } else {
    Real a_prev = a;
    while (a < a0 * 1e6) {
      a *= 1.25;
      if (integrate(p, omega, a, r0, r_end, opts.step_rel, h_max, nullptr) ==
          Shot::High) {
        a_lo = a_prev;
        a_hi = a;
        break;
      }
      a_prev = a;
    }
  }
  if (a_hi == 0)
    throw OracleError("shoot_elliptic: bisection bracket not found");

  for (int it = 0; it < opts.max_bisect; ++it) {
    const Real mid = 0.5 * (a_lo + a_hi);
    if (mid == a_lo || mid == a_hi) break;
    if (integrate(p, omega, mid, r0, r_end, opts.step_rel, h_max, nullptr) ==
        Shot::High)
      a_hi = mid;
    else
      a_lo = mid;
  }

  // final pass on the positive side of the separatrix
  Trace trace;
  integrate(p, omega, a_lo, r0, r_end, opts.step_rel, h_max, &trace);

  // truncate where the tail turns around (or is fully decayed)
  Real peak = 0;
  size_t ip = 0;
  for (size_t i = 0; i < trace.q.size(); ++i)
    if (trace.q[i] > peak) {
      peak = trace.q[i];
      ip = i;
    }
  size_t last = trace.q.size() - 1;
  for (size_t i = ip + 1; i < trace.q.size(); ++i) {
    if (trace.dq[i] > 0.0 || trace.q[i] < 1e-12 * peak) {
      last = i;
      break;
    }
  }

  ShootingSolution sol;
  sol.params = p;
  sol.omega = omega;
  sol.amplitude = a_lo;
  const Index n = Index(last + 1);
  sol.r.resize(n);
  sol.q.resize(n);
  sol.dq.resize(n);
  for (Index i = 0; i < n; ++i) {
    sol.r[i] = trace.r[i];
    sol.q[i] = trace.q[i];
    sol.dq[i] = trace.dq[i];
  }

  // derivative-corrected trapezoid over the stored samples (4th order):
  //   int_a^b f = (h/2)(f_a + f_b) - (h^2/12)(f'_b - f'_a) + O(h^5)
  const Real sigma =
      2.0 * std::pow(pi, Real(p.d) / 2.0) / std::tgamma(Real(p.d) / 2.0);
  auto integrate_samples = [&](auto f, auto df) {
    Real acc = 0;
    for (Index i = 0; i + 1 < n; ++i) {
      const Real h = sol.r[i + 1] - sol.r[i];
      acc += 0.5 * h * (f(i) + f(i + 1)) -
             (h * h / 12.0) * (df(i + 1) - df(i));
    }
    return sigma * acc;
  };
  const OdeParams op{p.d, p.c, p.alpha, omega};
  auto q2dot = [&](Index i) { // (Q')' from the ODE itself
    Real y[2] = {sol.q[i], sol.dq[i]}, dy[2];
    rhs(op, sol.r[i], y, dy);
    return dy[1];
  };
  auto rpow = [&](Index i, int k) { return std::pow(sol.r[i], k); };
  sol.mass = integrate_samples(
      [&](Index i) { return sol.q[i] * sol.q[i] * rpow(i, p.d - 1); },
      [&](Index i) {
        return 2.0 * sol.q[i] * sol.dq[i] * rpow(i, p.d - 1) +
               Real(p.d - 1) * sol.q[i] * sol.q[i] * rpow(i, p.d - 2);
      });
  sol.kinetic = integrate_samples(
      [&](Index i) { return sol.dq[i] * sol.dq[i] * rpow(i, p.d - 1); },
      [&](Index i) {
        return 2.0 * sol.dq[i] * q2dot(i) * rpow(i, p.d - 1) +
               Real(p.d - 1) * sol.dq[i] * sol.dq[i] * rpow(i, p.d - 2);
      });
  sol.hardy = integrate_samples(
      [&](Index i) { return sol.q[i] * sol.q[i] * rpow(i, p.d - 3); },
      [&](Index i) {
        return 2.0 * sol.q[i] * sol.dq[i] * rpow(i, p.d - 3) +
               Real(p.d - 3) * sol.q[i] * sol.q[i] * rpow(i, p.d - 4);
      });
  sol.lp = integrate_samples(
      [&](Index i) {
        return std::pow(sol.q[i], p.alpha + 2.0) * rpow(i, p.d - 1);
      },
      [&](Index i) {
        return (p.alpha + 2.0) * std::pow(sol.q[i], p.alpha + 1.0) *
                   sol.dq[i] * rpow(i, p.d - 1) +
               Real(p.d - 1) * std::pow(sol.q[i], p.alpha + 2.0) *
                   rpow(i, p.d - 2);
      });

  // analytic origin corrections from the leading power Q ~ a r^{-rho}
  const Real rho = p.rho;
  const Real a2 = a_lo * a_lo;
  sol.mass += sigma * a2 * std::pow(r0, p.d - 2.0 * rho) / (p.d - 2.0 * rho);
  sol.kinetic += sigma * a2 * rho * rho *
                 std::pow(r0, p.d - 2.0 - 2.0 * rho) / (p.d - 2.0 - 2.0 * rho);
  sol.hardy += sigma * a2 * std::pow(r0, p.d - 2.0 - 2.0 * rho) /
               (p.d - 2.0 - 2.0 * rho);
  sol.lp += sigma * std::pow(a_lo, p.alpha + 2.0) *
            std::pow(r0, p.d - (p.alpha + 2.0) * rho) /
            (p.d - (p.alpha + 2.0) * rho);
  return sol;
}

RealVec ShootingSolution::on_grid(const RadialGrid& g) const {
  // interpolate the smooth factor r^rho Q
  const Real rho = params.rho;
  RealVec smooth = q * r.pow(rho);
  CubicSpline<Real> spline(r, smooth);
  RealVec out(g.n);
  const Real r_last = this->r[this->r.size() - 1];
  for (Index i = 0; i < g.n; ++i) {
    const Real x = g.r[i];
    if (x > r_last) {
      out[i] = 0.0;
      continue;
    }
    // below the start radius: extend by the leading power
    if (x < this->r[0]) {
      out[i] = smooth[0] * std::pow(x, -rho);
      continue;
    }
    out[i] = spline(x) * std::pow(x, -rho);
  }
  return out;
}

} // namespace hnls
