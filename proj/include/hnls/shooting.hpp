#pragma once

#include "hnls/functionals.hpp"
#include "hnls/grid.hpp"
#include "hnls/model.hpp"
#include "hnls/types.hpp"

namespace hnls {

/// Options for the radial shooting solver. The defaults target ~1e-7
/// accuracy on the profile and its quadrature functionals near omega = 1.
struct ShootOptions {
  Real r_end = 0;           // 0 -> automatic from omega
  Real r_start_frac = 2e-5; // start radius as a fraction of r_end; the
                            // Frobenius truncation error scales like r0^2
  Real step_rel = 2e-3;     // graded step h ~ step_rel * r near the origin
  Real h_max = 0;           // 0 -> automatic from omega
  int max_bisect = 200;
  Real amp_guess = 0;       // 0 -> automatic
};

/// Positive decaying solution of
///   Q'' + ((d-1)/r) Q' + (c/r^2) Q - omega Q + |Q|^alpha Q = 0
/// found by bisection on the leading Frobenius amplitude at the origin.
/// Entirely independent of the gradient-flow path: fixed-step RK4 on a
/// graded mesh, trapezoid quadrature with analytic origin corrections.
struct ShootingSolution {
  ModelParams params;
  Real omega = 0;
  Real amplitude = 0; // Frobenius coefficient a in Q ~ a r^{-rho}
  RealVec r;          // integration nodes (r0 .. truncation radius)
  RealVec q;          // profile values
  RealVec dq;         // derivative values

  // functionals from the oracle's own quadrature
  Real mass = 0, kinetic = 0, hardy = 0, lp = 0;
  Real hardy_norm_sq() const { return kinetic - params.c * hardy; }
  Real energy() const {
    return 0.5 * hardy_norm_sq() - lp / (params.alpha + 2.0);
  }
  /// Rayleigh multiplier (lp - ||Q||_Hc^2) / ||Q||_2^2; equals omega for a
  /// true solution.
  Real omega_rayleigh() const { return (lp - hardy_norm_sq()) / mass; }

  /// Resample the profile onto a production grid (interpolation runs on the
  /// smooth factor r^rho Q; zero beyond the truncation radius).
  RealVec on_grid(const RadialGrid& g) const;
};

ShootingSolution shoot_elliptic(const ModelParams& p, Real omega,
                                ShootOptions opts = {});

} // namespace hnls
