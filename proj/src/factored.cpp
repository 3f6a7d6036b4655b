#include "hnls/factored.hpp"

#include <cmath>

#include "hnls/errors.hpp"

namespace hnls {

FactoredProblem FactoredProblem::build(GridPtr g, const ModelParams& p) {
  if (g->dim != p.d) throw UsageError("grid dimension differs from model d");
  FactoredProblem fp;
  fp.grid = g;
  fp.params = p;
  const Real rho = p.rho;
  const Real D = Real(p.d) - 2.0 * rho;
  fp.effective_dim = D;

  const Index n = g->n;
  const Real tau = 1.0 / (Real(n) - 0.5);
  const Real sigma = g->sphere_area;
  const Real lp_exp = Real(p.d) - 1.0 - rho * (p.alpha + 2.0);

  fp.w.resize(n);
  fp.lpw.resize(n);
  fp.nlw.resize(n);
  fp.couple.resize(n - 1);
  for (Index i = 0; i < n; ++i) {
    const Real s = (Real(i) + 0.5) * tau;
    const Real r = g->r[i];
    const Real jac = g->map_deriv(s) * tau;
    fp.w[i] = sigma * std::pow(r, D - 1.0) * jac;
    fp.lpw[i] = sigma * std::pow(r, lp_exp) * jac;
    fp.nlw[i] = std::pow(r, -rho * p.alpha);
  }
  fp.w[n - 1] *= 0.5;
  fp.lpw[n - 1] *= 0.5;
  for (Index i = 0; i + 1 < n; ++i) {
    const Real f = g->map_value(Real(i + 1) * tau);
    fp.couple[i] = sigma * std::pow(f, D - 1.0) / (g->r[i + 1] - g->r[i]);
  }
  const Real dr_out = g->r[n - 1] - g->r[n - 2];
  fp.couple_outer =
      sigma * std::pow(g->rmax + 0.5 * dr_out, D - 1.0) / dr_out;
  return fp;
}

RealVec FactoredProblem::to_factored(const RealVec& q) const {
  return q * grid->r.pow(params.rho);
}

RealVec FactoredProblem::to_physical(const RealVec& g) const {
  return g * grid->r.pow(-params.rho);
}

Real FactoredProblem::hh_g(const RealVec& g) const {
  const Index n = grid->n;
  Real k = 0;
  for (Index i = 0; i + 1 < n; ++i) {
    const Real d = g[i + 1] - g[i];
    k += couple[i] * d * d;
  }
  k += couple_outer * g[n - 1] * g[n - 1];
  return k;
}

RealVec FactoredProblem::apply_Hg(const RealVec& g) const {
  const Index n = grid->n;
  RealVec y(n);
  for (Index i = 0; i < n; ++i) {
    Real flux = 0;
    if (i > 0) flux += couple[i - 1] * (g[i] - g[i - 1]);
    if (i + 1 < n)
      flux += couple[i] * (g[i] - g[i + 1]);
    else
      flux += couple_outer * g[i];
    y[i] = flux / w[i];
  }
  return y;
}

Tridiag<Real> FactoredProblem::operator_Hg() const {
  const Index n = grid->n;
  Tridiag<Real> H;
  H.lower.resize(n - 1);
  H.upper.resize(n - 1);
  H.diag.resize(n);
  for (Index i = 0; i < n; ++i) {
    Real d = (i > 0 ? couple[i - 1] : 0.0);
    d += (i + 1 < n ? couple[i] : couple_outer);
    H.diag[i] = d / w[i];
  }
  for (Index i = 0; i + 1 < n; ++i) {
    H.upper[i] = -couple[i] / w[i];
    H.lower[i] = -couple[i] / w[i + 1];
  }
  return H;
}

Real FactoredProblem::residual_g(const RealVec& g, Real omega) const {
  const RealVec res =
      apply_Hg(g) + omega * g - nlw * g.abs().pow(params.alpha) * g;
  return std::sqrt((w * res.square()).sum() / mass_g(g));
}

bool FactoredProblem::newton_fixed_omega(RealVec& g, Real omega, Real tol,
                                         int max_iter) const {
  const Tridiag<Real> H = operator_Hg();
  auto resnorm = [&](const RealVec& x) {
    const RealVec F =
        H.apply(x) + omega * x - nlw * x.abs().pow(params.alpha) * x;
    return std::sqrt((w * F.square()).sum() / mass_g(x));
  };
  Real rn = resnorm(g);
  for (int it = 0; it < max_iter; ++it) {
    if (rn <= tol) return true;
    const RealVec ga = nlw * g.abs().pow(params.alpha);
    const RealVec F = H.apply(g) + omega * g - ga * g;
    Tridiag<Real> J = H;
    J.diag += omega - (params.alpha + 1.0) * ga;
    const RealVec step = J.solve(F);
    // damped update: backtrack until the residual drops
    Real t = 1.0;
    bool ok = false;
    for (int k = 0; k < 12; ++k, t *= 0.5) {
      const RealVec trial = g - t * step;
      const Real rt = resnorm(trial);
      if (rt < rn) {
        g = trial;
        rn = rt;
        ok = true;
        break;
      }
    }
    if (!ok) return false;
  }
  return rn <= tol;
}

bool FactoredProblem::newton_fixed_mass(RealVec& g, Real& omega, Real M,
                                        Real tol, int max_iter) const {
  const Tridiag<Real> H = operator_Hg();
  auto resnorm = [&](const RealVec& x, Real om) {
    const RealVec F =
        H.apply(x) + om * x - nlw * x.abs().pow(params.alpha) * x;
    return std::sqrt((w * F.square()).sum() / mass_g(x)) +
           std::abs(mass_g(x) - M) / M;
  };
  Real rn = resnorm(g, omega);
  for (int it = 0; it < max_iter; ++it) {
    if (rn <= tol) return true;
    const RealVec ga = nlw * g.abs().pow(params.alpha);
    const RealVec F = H.apply(g) + omega * g - ga * g;
    const Real cq = mass_g(g) - M;
    Tridiag<Real> J = H;
    J.diag += omega - (params.alpha + 1.0) * ga;
    const RealVec x1 = J.solve(RealVec(-F));
    const RealVec x2 = J.solve(g);
    const Real c_x1 = 2.0 * (w * g * x1).sum();
    const Real c_x2 = 2.0 * (w * g * x2).sum();
    const Real domega = (c_x1 + cq) / c_x2;
    const RealVec dg = x1 - domega * x2;
    Real t = 1.0;
    bool ok = false;
    for (int k = 0; k < 12; ++k, t *= 0.5) {
      const RealVec trial = g + t * dg;
      const Real rt = resnorm(trial, omega + t * domega);
      if (rt < rn) {
        g = trial;
        omega += t * domega;
        rn = rt;
        ok = true;
        break;
      }
    }
    if (!ok) return false;
  }
  return rn <= tol;
}

namespace {

Certificate finish(const FactoredProblem& fp, RealVec g, Real omega) {
  Certificate c;
  const ModelParams& p = fp.params;
  c.omega = omega;
  c.mass = fp.mass_g(g);
  c.hardy_norm_sq = fp.hh_g(g);
  c.lp_alpha2 = fp.lp_g(g);
  c.energy = 0.5 * c.hardy_norm_sq - c.lp_alpha2 / (p.alpha + 2.0);
  c.residual = fp.residual_g(g, omega);
  const Real da = Real(p.d) * p.alpha;
  const Real denom = 2.0 * p.alpha + 4.0;
  c.e1 = std::abs(c.hardy_norm_sq - (da / denom) * c.lp_alpha2) /
         c.hardy_norm_sq;
  c.e2 = std::abs(omega * c.mass - ((denom - da) / denom) * c.lp_alpha2) /
         (omega * c.mass);
  c.critical = p.is_mass_critical();
  if (c.critical) c.e3 = std::abs(c.energy) / c.hardy_norm_sq;
  c.g = std::move(g);
  return c;
}

} // namespace

Certificate certify_at_omega(const FactoredProblem& fp, const RealVec& q_phys,
                             Real omega, Real tol) {
  RealVec g = fp.to_factored(q_phys);
  if (!fp.newton_fixed_omega(g, omega, tol))
    throw CertificationError(
        "factored certification: Newton at fixed omega did not converge");
  if ((g <= 0.0).any())
    throw CertificationError("factored certification lost positivity");
  return finish(fp, std::move(g), omega);
}

Certificate certify_at_mass(const FactoredProblem& fp, const RealVec& q_phys,
                            Real omega_guess, Real M, Real tol) {
  RealVec g = fp.to_factored(q_phys);
  Real omega = omega_guess;
  if (!fp.newton_fixed_mass(g, omega, M, tol))
    throw CertificationError(
        "factored certification: Newton at fixed mass did not converge");
  if ((g <= 0.0).any())
    throw CertificationError("factored certification lost positivity");
  return finish(fp, std::move(g), omega);
}

} // namespace hnls
