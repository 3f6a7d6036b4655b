#include "hnls/evolution.hpp"

#include <cmath>
#include <sstream>

#include "hnls/errors.hpp"
#include "hnls/interp.hpp"
#include "hnls/tridiag.hpp"

namespace hnls {

std::string to_string(Scheme s) {
  return s == Scheme::CrankNicolsonRelaxed ? "crank-nicolson-relaxed"
                                           : "strang-split";
}

Scheme scheme_from_string(const std::string& s) {
  if (s == "crank-nicolson-relaxed") return Scheme::CrankNicolsonRelaxed;
  if (s == "strang-split") return Scheme::StrangSplit;
  throw ConfigError("unknown scheme '" + s + "'");
}

namespace {

struct Stepper {
  const RadialGrid& g;
  const ModelParams& p;
  const EvolutionConfig& cfg;
  Tridiag<Real> H;

  Stepper(const RadialGrid& g_, const ModelParams& p_,
          const EvolutionConfig& cfg_)
      : g(g_), p(p_), cfg(cfg_), H(hardy_operator(g_, p_)) {}

  // Cayley solve: (I + i dt/2 (H - diag(gam))) u1 = (I - i dt/2 (H - diag(gam))) u
  ComplexVec cayley(const ComplexVec& u, const RealVec& gam, Real dt) const {
    const Complex ith(0.0, 0.5 * dt);
    const Index n = g.n;
    // rhs = (I - ith (H - gam)) u
    ComplexVec rhs(n);
    {
      ComplexVec Hu(n);
      for (Index i = 0; i < n; ++i) {
        Complex v = H.diag[i] * u[i];
        if (i > 0) v += H.lower[i - 1] * u[i - 1];
        if (i + 1 < n) v += H.upper[i] * u[i + 1];
        Hu[i] = v;
      }
      rhs = u - ith * (Hu - gam.cast<Complex>() * u);
    }
    Tridiag<Complex> A;
    A.lower = ith * H.lower.cast<Complex>();
    A.upper = ith * H.upper.cast<Complex>();
    A.diag = 1.0 + ith * (H.diag - gam).cast<Complex>();
    return A.solve(rhs);
  }

  ComplexVec cn_relaxed(const ComplexVec& u, Real dt) const {
    const RealVec au = cfg.linear_only ? RealVec(RealVec::Zero(g.n))
                                       : RealVec(u.abs().pow(p.alpha));
    RealVec gam = au;
    ComplexVec u1 = cayley(u, gam, dt);
    if (cfg.linear_only) return u1;
    for (int k = 0; k < cfg.max_fixed_point; ++k) {
      const RealVec gam_new = 0.5 * (au + u1.abs().pow(p.alpha));
      const Real delta = (gam_new - gam).abs().maxCoeff();
      const Real scale = gam_new.abs().maxCoeff() + 1e-300;
      gam = gam_new;
      u1 = cayley(u, gam, dt);
      if (delta <= cfg.fixed_point_tol * scale) return u1;
    }
    throw StepError("midpoint fixed point did not converge at this dt");
  }

  ComplexVec strang(const ComplexVec& u, Real dt) const {
    auto phase = [&](const ComplexVec& v, Real theta_dt) {
      if (cfg.linear_only) return v;
      ComplexVec out(v.size());
      for (Index i = 0; i < v.size(); ++i) {
        const Real ph = theta_dt * std::pow(std::abs(v[i]), p.alpha);
        out[i] = v[i] * Complex(std::cos(ph), std::sin(ph));
      }
      return out;
    };
    const RealVec zero = RealVec::Zero(g.n);
    ComplexVec v = phase(u, 0.5 * dt);
    v = cayley(v, zero, dt);
    return phase(v, 0.5 * dt);
  }

  ComplexVec advance(const ComplexVec& u, Real dt) const {
    return cfg.scheme == Scheme::CrankNicolsonRelaxed ? cn_relaxed(u, dt)
                                                      : strang(u, dt);
  }
};

} // namespace

ComplexVec step(const RadialGrid& g, const ComplexVec& u, Real dt,
                const ModelParams& p, const EvolutionConfig& cfg) {
  if (!(dt > 0)) throw DomainError("step requires dt > 0");
  require_size(g, u.size());
  Stepper s(g, p, cfg);
  return s.advance(u, dt);
}

std::pair<TimeSeries, EvolutionOutcome> evolve(const RadialField& u0,
                                               const EvolutionConfig& cfg,
                                               const ModelParams& p,
                                               const RealVec* phi_weight) {
  if (!(cfg.dt0 > 0) || !(cfg.t_end > 0) ||
      !(cfg.blowup_gradient_factor > 1))
    throw ConfigError("evolution config: dt0 > 0, t_end > 0, factor > 1");
  const RadialGrid& g = *u0.grid;
  Stepper stepper(g, p, cfg);

  TimeSeries ts;
  ComplexVec u = u0.v;
  Real t = 0;
  const ObservableSet o0 = observables(g, u, p);
  const Real amp0 = u.abs().maxCoeff();
  const Real energy_scale =
      std::max(std::abs(o0.energy), 1e-2 * std::max(o0.kinetic, o0.mass));

  auto record = [&](Real dt_now) {
    ts.t.push_back(t);
    const ObservableSet o = observables(g, u, p);
    ts.obs.push_back(o);
    ts.xu_sq.push_back(variance(g, u));
    ts.xu_ok.push_back(tail_mass(g, u, cfg.tail_fraction * g.rmax) <=
                       cfg.tail_budget * std::max(o.mass, 1e-300));
    ts.v_phiR.push_back(
        phi_weight ? ((*phi_weight) * g.w * u.abs2()).sum()
                   : std::numeric_limits<Real>::quiet_NaN());
    ts.dt.push_back(dt_now);
  };
  record(cfg.dt0);

  EvolutionOutcome out;
  long step_count = 0;
  bool dt_floored = false;
  while (t < cfg.t_end) {
    Real dt = cfg.dt0;
    if (cfg.adaptive_dt && !cfg.linear_only) {
      const Real amp = u.abs().maxCoeff();
      dt = cfg.dt0 * std::pow(amp0 / std::max(amp, amp0), p.alpha);
    }
    dt = std::max(dt, cfg.blowup_dt_floor);
    dt = std::min(dt, cfg.t_end - t);

    // attempt the step, halving on inner-iteration failures
    ComplexVec next;
    for (;;) {
      try {
        next = stepper.advance(u, dt);
        break;
      } catch (const StepError&) {
        dt *= 0.5;
        if (dt < cfg.blowup_dt_floor) {
          dt_floored = true;
          break;
        }
      }
    }
    if (dt <= cfg.blowup_dt_floor * (1.0 + 1e-12)) dt_floored = true;
    if (dt_floored) {
      // dt collapsed; decide below on the blow-up signature
      const ObservableSet o = observables(g, u, p);
      if (o.kinetic >= cfg.blowup_gradient_factor * o0.kinetic) break;
      std::ostringstream os;
      os << "time step hit the floor at t = " << t
         << " without gradient growth";
      throw IntegratorError(os.str());
    }
    u = std::move(next);
    t += dt;
    ++step_count;
    if (step_count % cfg.record_every == 0 || t >= cfg.t_end) record(dt);

    const ObservableSet o = ts.obs.back();
    if (step_count % cfg.record_every == 0 || t >= cfg.t_end) {
      const Real mdrift = std::abs(o.mass - o0.mass) / o0.mass;
      const Real edrift = std::abs(o.energy - o0.energy) / energy_scale;
      const bool grad_blow =
          o.kinetic >= cfg.blowup_gradient_factor * o0.kinetic;
      if (mdrift > cfg.mass_budget ||
          edrift > cfg.energy_budget_rate * std::max(t, 1.0)) {
        if (!grad_blow) {
          std::ostringstream os;
          os << "conservation budget violated at t = " << t
             << " (mass drift " << mdrift << ", energy drift " << edrift
             << ") without a blow-up signature";
          throw IntegratorError(os.str());
        }
      }
      if (grad_blow && dt <= 2.0 * cfg.blowup_dt_floor) {
        dt_floored = true;
        break;
      }
    }
  }

  const ObservableSet o_final = observables(g, u, p);
  out.mass_drift = std::abs(o_final.mass - o0.mass) / o0.mass;
  out.energy_drift = std::abs(o_final.energy - o0.energy) / energy_scale;

  const bool grad_blow =
      o_final.kinetic >= cfg.blowup_gradient_factor * o0.kinetic;
  if (dt_floored && grad_blow) {
    out.kind = OutcomeKind::BlowUp;
    out.T_lo = t;
    // extrapolate kinetic^{-1/2} (~ T - t near focusing) to zero
    Real T_ext = t;
    const size_t m = ts.t.size();
    if (m >= 3) {
      const Real xk = 1.0 / std::sqrt(ts.obs[m - 1].kinetic);
      const Real xp = 1.0 / std::sqrt(ts.obs[m - 3].kinetic);
      const Real dtk = ts.t[m - 1] - ts.t[m - 3];
      if (xp > xk && dtk > 0) T_ext = ts.t[m - 1] + xk * dtk / (xp - xk);
    }
    const Real pad = std::max(0.05 * (T_ext - out.T_lo),
                              4.0 * (ts.t.back() - ts.t[ts.t.size() - 2]));
    out.T_hi = std::max(T_ext, out.T_lo) + pad;
    out.T_estimate = 0.5 * (out.T_lo + out.T_hi);
    out.note = "gradient growth and dt collapse both fired";
    return {std::move(ts), out};
  }

  out.kind = OutcomeKind::Completed;
  out.note = "reached t_end with conservation within budget";
  return {std::move(ts), out};
}

FieldSource standing_wave_source(const RealVec& q, Real omega) {
  return [q, omega](Real s) -> ComplexVec {
    return q.cast<Complex>() *
           Complex(std::cos(omega * s), std::sin(omega * s));
  };
}

ComplexVec pseudo_conformal(const FieldSource& src, const RadialGrid& g,
                            const ModelParams& p, Real T, Real t) {
  if (!p.is_mass_critical())
    throw DomainError(
        "pseudo_conformal is an invariance only at alpha = 4/d");
  if (!(T > 0) || t < 0 || t >= T)
    throw DomainError("pseudo_conformal requires 0 <= t < T");
  const Real s = 1.0 / (T - t);
  const ComplexVec u_src = src(s);
  require_size(g, u_src.size());

  // interpolate the source through its smooth factor r^rho u
  ComplexVec smooth = u_src * g.r.pow(p.rho).cast<Complex>();
  CubicSpline<Complex> spline(g.r, smooth);
  const Real amp = std::pow(T - t, -Real(p.d) / 2.0);
  ComplexVec out(g.n);
  for (Index i = 0; i < g.n; ++i) {
    const Real r = g.r[i];
    const Real x = r * s;
    Complex val(0.0, 0.0);
    if (x <= g.rmax) {
      val = (x < g.r[0] ? smooth[0] : spline(x)) * std::pow(x, -p.rho);
    }
    const Real ph = -r * r / (4.0 * (T - t));
    out[i] = amp * Complex(std::cos(ph), std::sin(ph)) * val;
  }
  return out;
}

} // namespace hnls
