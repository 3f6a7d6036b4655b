#pragma once

#include "hnls/functionals.hpp"
#include "hnls/grid.hpp"
#include "hnls/model.hpp"
#include "hnls/tridiag.hpp"
#include "hnls/types.hpp"

namespace hnls {

/// Factored representation q = r^{-rho} g of singular radial profiles.
///
/// Substituting q = r^{-rho} g cancels the inverse-square potential exactly
/// (indicial identity rho^2 - (d-2) rho + c = 0) and turns H into the plain
/// radial Laplacian in effective dimension D = d - 2 rho:
///
///   <q, H q>        = sigma int |g'|^2 r^{D-1} dr
///   ||q||_2^2       = sigma int |g|^2  r^{D-1} dr
///   ||q||_p^p       = sigma int |g|^p  r^{d-1-rho p} dr
///
/// so the smooth factor g sees a regular operator and certification is free
/// of the discrete boundary layer the physical stencil develops on r^{-rho}.
/// For rho = 0 every quantity coincides with the physical-grid one.
struct FactoredProblem {
  GridPtr grid; // physical node set
  ModelParams params;
  Real effective_dim = 0; // D = d - 2 rho

  RealVec w;       // measure weights for |g|^2 (physical mass of q)
  RealVec couple;  // conductances of the effective-dimension Laplacian
  Real couple_outer = 0;
  RealVec lpw;     // weights for |g|^{alpha+2} (physical L^{alpha+2} of q)
  RealVec nlw;     // r^{-rho alpha} nonlinear factor

  static FactoredProblem build(GridPtr g, const ModelParams& p);

  RealVec to_factored(const RealVec& q) const;
  RealVec to_physical(const RealVec& g) const;

  Real mass_g(const RealVec& g) const { return (w * g.square()).sum(); }
  Real hh_g(const RealVec& g) const;     // ||q||_{Hc}^2
  Real lp_g(const RealVec& g) const {
    return (lpw * g.abs().pow(params.alpha + 2.0)).sum();
  }
  Real energy_g(const RealVec& g) const {
    return 0.5 * hh_g(g) - lp_g(g) / (params.alpha + 2.0);
  }

  /// effective-dimension Laplacian (no potential left after factoring)
  RealVec apply_Hg(const RealVec& g) const;
  Tridiag<Real> operator_Hg() const;

  /// residual of H g + omega g = nlw |g|^alpha g in the factored metric
  Real residual_g(const RealVec& g, Real omega) const;

  /// Newton at fixed omega; g is updated in place.
  bool newton_fixed_omega(RealVec& g, Real omega, Real tol,
                          int max_iter = 40) const;

  /// Bordered Newton with the mass held at M exactly; g, omega updated.
  bool newton_fixed_mass(RealVec& g, Real& omega, Real M, Real tol,
                         int max_iter = 40) const;
};

/// Certification record computed in the factored representation.
struct Certificate {
  Real omega = 0;
  Real mass = 0;
  Real hardy_norm_sq = 0;
  Real lp_alpha2 = 0;
  Real energy = 0;
  Real residual = 0;
  Real e1 = 0, e2 = 0;
  Real e3 = std::numeric_limits<Real>::quiet_NaN();
  bool critical = false;
  RealVec g; // smooth factor on the grid

  Real worst() const {
    Real m = std::max(e1, e2);
    if (critical) m = std::max(m, e3);
    return m;
  }
  bool pass(Real tol) const { return worst() <= tol; }
};

/// Re-solve in factored variables starting from a physical profile, at
/// fixed omega (frequency gauge) and evaluate the Pohozaev residuals.
Certificate certify_at_omega(const FactoredProblem& fp, const RealVec& q_phys,
                             Real omega, Real tol);

/// Same with the mass pinned instead of the frequency (subcritical runs).
Certificate certify_at_mass(const FactoredProblem& fp, const RealVec& q_phys,
                            Real omega_guess, Real M, Real tol);

} // namespace hnls
