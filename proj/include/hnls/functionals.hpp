#pragma once

#include <cmath>

#include "hnls/errors.hpp"
#include "hnls/grid.hpp"
#include "hnls/interp.hpp"
#include "hnls/model.hpp"
#include "hnls/tridiag.hpp"
#include "hnls/types.hpp"

namespace hnls {

/// Complex radial profile bound to its grid.
struct RadialField {
  GridPtr grid;
  ComplexVec v;

  RadialField() = default;
  RadialField(GridPtr g, ComplexVec values)
      : grid(std::move(g)), v(std::move(values)) {}
};

inline void require_same_grid(const RadialGrid& a, const RadialGrid& b) {
  if (!a.same_mesh(b)) throw UsageError("fields live on different grids");
}

inline void require_size(const RadialGrid& g, Index n) {
  if (g.n != n) throw UsageError("field size does not match its grid");
}

namespace detail {
template <class T>
inline Real abs2(const T& z) {
  if constexpr (std::is_same_v<T, Real>) return z * z;
  else return std::norm(z);
}
} // namespace detail

// --- scalar functionals ---------------------------------------------------

template <class Scalar>
Real mass(const RadialGrid& g, const Vec<Scalar>& u) {
  require_size(g, u.size());
  return (g.w * u.abs2()).sum();
}

/// Dirichlet form: face-flux quadrature of |grad u|^2, including the
/// Dirichlet ghost term at the outer boundary. This is the module's fixed
/// gradient stencil; <u, H u> = kinetic - c * hardy_term holds exactly.
template <class Scalar>
Real kinetic(const RadialGrid& g, const Vec<Scalar>& u) {
  require_size(g, u.size());
  const Index n = g.n;
  Real k = 0;
  for (Index i = 0; i + 1 < n; ++i)
    k += g.couple[i] * detail::abs2<Scalar>(u[i + 1] - u[i]);
  k += g.couple_outer * detail::abs2<Scalar>(u[n - 1]);
  return k;
}

/// Sesquilinear version of the Dirichlet form (used for H^1 inner products).
inline Complex kinetic_pairing(const RadialGrid& g, const ComplexVec& a,
                               const ComplexVec& b) {
  require_size(g, a.size());
  require_size(g, b.size());
  const Index n = g.n;
  Complex k = 0;
  for (Index i = 0; i + 1 < n; ++i)
    k += g.couple[i] * std::conj(a[i + 1] - a[i]) * (b[i + 1] - b[i]);
  k += g.couple_outer * std::conj(a[n - 1]) * b[n - 1];
  return k;
}

template <class Scalar>
Real hardy_term(const RadialGrid& g, const Vec<Scalar>& u) {
  require_size(g, u.size());
  return (g.w * u.abs2() / g.r.square()).sum();
}

template <class Scalar>
Real lp_power(const RadialGrid& g, const Vec<Scalar>& u, Real p) {
  require_size(g, u.size());
  return (g.w * u.abs().pow(p)).sum();
}

inline Complex l2_pairing(const RadialGrid& g, const ComplexVec& a,
                          const ComplexVec& b) {
  require_size(g, a.size());
  require_size(g, b.size());
  return (g.w.template cast<Complex>() * a.conjugate() * b).sum();
}

/// Quadrature of r^2 |u|^2 (variance on the truncated domain).
template <class Scalar>
Real variance(const RadialGrid& g, const Vec<Scalar>& u) {
  require_size(g, u.size());
  return (g.w * g.r.square() * u.abs2()).sum();
}

/// Mass carried beyond radius r0 (used to police truncation validity).
template <class Scalar>
Real tail_mass(const RadialGrid& g, const Vec<Scalar>& u, Real r0) {
  require_size(g, u.size());
  Real m = 0;
  for (Index i = 0; i < g.n; ++i)
    if (g.r[i] > r0) m += g.w[i] * detail::abs2<Scalar>(u[i]);
  return m;
}

// --- observables ------------------------------------------------------------

struct ObservableSet {
  Real mass = 0;
  Real kinetic = 0;
  Real hardy_term = 0;
  Real hardy_norm_sq = 0;
  Real lp_alpha2 = 0;
  Real energy = 0;
};

template <class Scalar>
ObservableSet observables(const RadialGrid& g, const Vec<Scalar>& u,
                          const ModelParams& p) {
  if (g.dim != p.d) throw UsageError("grid dimension differs from model d");
  ObservableSet o;
  o.mass = mass(g, u);
  o.kinetic = kinetic(g, u);
  o.hardy_term = hardy_term(g, u);
  o.hardy_norm_sq = o.kinetic - p.c * o.hardy_term;
  o.lp_alpha2 = lp_power(g, u, p.alpha + 2.0);
  o.energy = 0.5 * o.kinetic - 0.5 * p.c * o.hardy_term -
             o.lp_alpha2 / (p.alpha + 2.0);
  return o;
}

inline ObservableSet observables(const RadialField& f, const ModelParams& p) {
  return observables(*f.grid, f.v, p);
}

/// Plain H^1 norm squared (no potential term): ||u||^2 + ||grad u||^2.
template <class Scalar>
Real h1_norm_sq(const RadialGrid& g, const Vec<Scalar>& u) {
  return mass(g, u) + kinetic(g, u);
}

// --- Weinstein functional ---------------------------------------------------

/// J(u) = ||u||_{alpha+2}^{alpha+2} / ( ||u||_2^{(4-(d-2)a)/2} ||u||_{Hc}^{da/2} ).
/// Invariant under amplitude scaling and (up to mesh error) dilation.
template <class Scalar>
Real weinstein(const RadialGrid& g, const Vec<Scalar>& u,
               const ModelParams& p) {
  const ObservableSet o = observables(g, u, p);
  if (o.mass <= 0) throw DomainError("weinstein: zero field");
  if (o.hardy_norm_sq <= 0)
    throw SingularModelError(
        "weinstein: non-positive Hardy norm; c reaches the discrete Hardy "
        "constant of this grid");
  const Real mass_exp = (4.0 - Real(p.d - 2) * p.alpha) / 4.0;
  const Real hardy_exp = Real(p.d) * p.alpha / 4.0;
  return o.lp_alpha2 /
         (std::pow(o.mass, mass_exp) * std::pow(o.hardy_norm_sq, hardy_exp));
}

// --- the Hardy operator -----------------------------------------------------

/// Assemble H = -Lap_r - c r^-2 as a tridiagonal operator. H is
/// self-adjoint in the w-weighted inner product by construction.
Tridiag<Real> hardy_operator(const RadialGrid& g, const ModelParams& p);

/// (a + b*H) with complex coefficients, for Crank-Nicolson style solves.
Tridiag<Complex> shifted_hardy_operator(const RadialGrid& g,
                                        const ModelParams& p, Complex a,
                                        Complex b);

template <class Scalar>
Vec<Scalar> apply_H(const RadialGrid& g, const Vec<Scalar>& u,
                    const ModelParams& p) {
  require_size(g, u.size());
  if (g.dim != p.d) throw UsageError("grid dimension differs from model d");
  const Index n = g.n;
  Vec<Scalar> y(n);
  for (Index i = 0; i < n; ++i) {
    Scalar flux = Scalar(0);
    if (i > 0) flux += g.couple[i - 1] * (u[i] - u[i - 1]);
    if (i + 1 < n)
      flux += g.couple[i] * (u[i] - u[i + 1]);
    else
      flux += g.couple_outer * u[i];
    y[i] = flux / g.w[i] - (p.c / (g.r[i] * g.r[i])) * u[i];
  }
  return y;
}

inline RadialField apply_H(const RadialField& f, const ModelParams& p) {
  return {f.grid, apply_H(*f.grid, f.v, p)};
}

// --- dilation ---------------------------------------------------------------

/// v(x) = lam^{d/2} u(lam x), resampled on the same grid by cubic-spline
/// interpolation. For singular profiles pass rho != 0: interpolation then
/// acts on the smooth factor g = r^rho u. Mass must be preserved within
/// mass_tol or the profile is declared unresolvable at this lam.
template <class Scalar>
Vec<Scalar> scale_field(const RadialGrid& g, const Vec<Scalar>& u, Real lam,
                        Real rho = 0.0, Real mass_tol = 1e-6) {
  require_size(g, u.size());
  if (!(lam > 0)) throw DomainError("scale_field requires lam > 0");
  if (lam == 1.0) return u;
  Vec<Scalar> smooth = u;
  if (rho != 0.0)
    smooth *= g.r.pow(rho).template cast<Scalar>();
  CubicSpline<Scalar> spline(g.r, smooth);
  const Real amp = std::pow(lam, Real(g.dim) / 2.0);
  Vec<Scalar> out(g.n);
  for (Index i = 0; i < g.n; ++i) {
    const Real x = lam * g.r[i];
    if (x > g.rmax) {
      out[i] = Scalar(0);
      continue;
    }
    Scalar val = spline(x);
    if (rho != 0.0) val *= std::pow(x, -rho);
    out[i] = amp * val;
  }
  const Real m0 = mass(g, u), m1 = mass(g, out);
  if (m0 > 0 && std::abs(m1 - m0) > mass_tol * m0)
    throw ResolutionError(
        "scale_field: rescaled profile not resolvable on this grid "
        "(mass changed by more than the interpolation tolerance)");
  return out;
}

/// Exact dilation: same samples, rescaled grid. Every functional transforms
/// exactly (mass invariant, ||.||_{Hc}^2 by lam^2, L^p by lam^{d p/2 - d}).
template <class Scalar>
std::pair<GridPtr, Vec<Scalar>> scale_field_exact(const RadialGrid& g,
                                                  const Vec<Scalar>& u,
                                                  Real lam) {
  require_size(g, u.size());
  GridPtr rg = rescale_grid(g, lam);
  Vec<Scalar> v = u * Scalar(std::pow(lam, Real(g.dim) / 2.0));
  return {rg, std::move(v)};
}

/// Resample a field from one grid onto another (cubic spline, optional
/// singular factor). Values beyond the source range decay to zero.
template <class Scalar>
Vec<Scalar> resample(const RadialGrid& src, const Vec<Scalar>& u,
                     const RadialGrid& dst, Real rho = 0.0) {
  require_size(src, u.size());
  Vec<Scalar> smooth = u;
  if (rho != 0.0) smooth *= src.r.pow(rho).template cast<Scalar>();
  CubicSpline<Scalar> spline(src.r, smooth);
  Vec<Scalar> out(dst.n);
  for (Index i = 0; i < dst.n; ++i) {
    const Real x = dst.r[i];
    if (x > src.rmax) {
      out[i] = Scalar(0);
      continue;
    }
    Scalar val = spline(x);
    if (rho != 0.0) val *= std::pow(x, -rho);
    out[i] = val;
  }
  return out;
}

} // namespace hnls
