#include "hnls/grid.hpp"

#include <cmath>
#include <sstream>

#include "hnls/errors.hpp"
#include "hnls/tridiag.hpp"

namespace hnls {

std::string to_string(Grading g) {
  return g == Grading::Uniform ? "uniform" : "geometric";
}

Grading grading_from_string(const std::string& s) {
  if (s == "uniform") return Grading::Uniform;
  if (s == "geometric") return Grading::Geometric;
  throw ConfigError("unknown grading '" + s + "' (uniform|geometric)");
}

namespace {

Real unit_sphere_area(int dim) {
  return 2.0 * std::pow(pi, Real(dim) / 2.0) / std::tgamma(Real(dim) / 2.0);
}

} // namespace

GridPtr make_grid(Index n, Real rmax, Grading grading, Real ratio, int dim) {
  if (n < 16) {
    std::ostringstream os;
    os << "grid size N >= 16 required (got " << n << ")";
    throw ConfigError(os.str());
  }
  if (!(rmax > 0)) throw ConfigError("rmax > 0 required");
  if (dim < 3) throw ConfigError("grid dimension >= 3 required");
  if (grading == Grading::Geometric && !(ratio > 1.0))
    throw ConfigError("geometric grading requires ratio > 1");
  if (grading == Grading::Uniform) ratio = 1.0;

  auto g = std::make_shared<RadialGrid>();
  g->dim = dim;
  g->n = n;
  g->rmax = rmax;
  g->grading = grading;
  g->ratio = ratio;
  g->kappa =
      grading == Grading::Geometric ? (Real(n) - 0.5) * std::log(ratio) : 0.0;
  g->sphere_area = unit_sphere_area(dim);

  const Real tau = 1.0 / (Real(n) - 0.5);

  g->r.resize(n);
  g->w.resize(n);
  g->couple.resize(n - 1);

  for (Index i = 0; i < n; ++i) {
    const Real s = (Real(i) + 0.5) * tau;
    g->r[i] = g->map_value(s);
    g->w[i] =
        g->sphere_area * std::pow(g->r[i], dim - 1) * g->map_deriv(s) * tau;
  }
  g->r[n - 1] = rmax; // pin the boundary node exactly
  g->w[n - 1] *= 0.5; // boundary node owns a half cell

  for (Index i = 0; i + 1 < n; ++i) {
    const Real f = g->map_value(Real(i + 1) * tau); // face between nodes i, i+1
    g->couple[i] =
        g->sphere_area * std::pow(f, dim - 1) / (g->r[i + 1] - g->r[i]);
  }
  // Dirichlet ghost one trailing spacing beyond rmax.
  const Real dr_out = g->r[n - 1] - g->r[n - 2];
  const Real f_out = rmax + 0.5 * dr_out;
  g->couple_outer = g->sphere_area * std::pow(f_out, dim - 1) / dr_out;
  return g;
}

GridPtr rescale_grid(const RadialGrid& g, Real lam) {
  if (!(lam > 0)) throw DomainError("rescale_grid requires lam > 0");
  auto out = std::make_shared<RadialGrid>(g);
  const Real sd = std::pow(lam, g.dim);
  out->rmax = g.rmax / lam;
  out->r = g.r / lam;
  out->w = g.w / sd;
  out->couple = g.couple * (lam * lam / sd);
  out->couple_outer = g.couple_outer * (lam * lam / sd);
  return out;
}

GridAudit audit_grid(const RadialGrid& g) {
  GridAudit a;
  // Gaussian moment: int_{R^d} e^{-|x|^2} dx = pi^{d/2}.
  const Real exact = std::pow(pi, Real(g.dim) / 2.0);
  const Real quad = (g.w * (-g.r.square()).exp()).sum();
  a.gauss_quad_relerr = std::abs(quad - exact) / exact;

  // Discrete Hardy constant: minimize sum couple |du|^2 / sum w r^-2 u^2
  // by inverse iteration on the pencil (K, B).
  const Index n = g.n;
  Tridiag<Real> K;
  K.lower.resize(n - 1);
  K.upper.resize(n - 1);
  K.diag.resize(n);
  for (Index i = 0; i < n; ++i) {
    Real d = (i > 0 ? g.couple[i - 1] : 0.0);
    d += (i + 1 < n ? g.couple[i] : g.couple_outer);
    K.diag[i] = d;
  }
  for (Index i = 0; i + 1 < n; ++i) {
    K.lower[i] = -g.couple[i];
    K.upper[i] = -g.couple[i];
  }
  const RealVec b = g.w * g.r.square().inverse();
  RealVec x = (-(g.r / g.rmax).square() * 8.0).exp();
  Real lam_prev = 0;
  for (int it = 0; it < 600; ++it) {
    RealVec y = K.solve((b * x).matrix().array());
    y /= std::sqrt((b * y.square()).sum());
    const Real lam = (K.apply(y) * y).sum() / (b * y.square()).sum();
    x = y;
    if (it > 4 && std::abs(lam - lam_prev) <= 1e-13 * std::abs(lam)) {
      lam_prev = lam;
      break;
    }
    lam_prev = lam;
  }
  a.hardy_min = lam_prev;
  const Real lam_d = Real(g.dim - 2) * Real(g.dim - 2) / 4.0;
  a.hardy_slack = std::max(0.0, lam_d / a.hardy_min - 1.0);
  return a;
}

} // namespace hnls
