#pragma once

#include <cmath>
#include <memory>
#include <string>

#include "hnls/types.hpp"

namespace hnls {

enum class Grading { Uniform, Geometric };

std::string to_string(Grading g);
Grading grading_from_string(const std::string& s);

/// Radial mesh on (0, rmax] for dimension-d radial integrals and operators.
///
/// Nodes are images of near-cell-centered parameters under a smooth map
/// (linear for uniform grids, exponential for geometric ones), so r_1 sits
/// half a cell off the origin and r_n = rmax exactly.  Quadrature weights
/// realize  sum_i w_i g(r_i) ~= sigma_{d-1} * int_0^rmax g(r) r^{d-1} dr
/// as the transformed midpoint rule, which converges superalgebraically for
/// smooth decaying integrands.  Face conductances back the divergence-form
/// radial Laplacian; the outer boundary carries a homogeneous Dirichlet
/// ghost, the origin a natural (zero-area) flux.
struct RadialGrid {
  int dim = 0;
  Index n = 0;
  Real rmax = 0;
  Grading grading = Grading::Uniform;
  Real ratio = 1.0;        // per-cell geometric spacing ratio (1 = uniform)
  Real kappa = 0;          // node-map exponent (0 = linear map)
  Real sphere_area = 0;    // sigma_{d-1}

  RealVec r;  // nodes, strictly increasing, r[n-1] == rmax
  RealVec w;  // quadrature weights, all positive
  RealVec couple;     // size n-1: sigma * f_i^{d-1} / (r_{i+1} - r_i)
  Real couple_outer = 0; // Dirichlet ghost conductance at the outer face

  // smooth node map r = phi(s), s in [0, 1]
  Real map_value(Real s) const {
    if (kappa == 0.0) return rmax * s;
    return rmax * std::expm1(kappa * s) / std::expm1(kappa);
  }
  Real map_deriv(Real s) const {
    if (kappa == 0.0) return rmax;
    return rmax * kappa * std::exp(kappa * s) / std::expm1(kappa);
  }

  bool same_mesh(const RadialGrid& o) const {
    return dim == o.dim && n == o.n && rmax == o.rmax &&
           grading == o.grading && ratio == o.ratio;
  }
};

using GridPtr = std::shared_ptr<const RadialGrid>;

/// Build a radial grid. ratio is ignored for uniform grading; for geometric
/// grading it must exceed 1 and sets consecutive cell-size ratios.
GridPtr make_grid(Index n, Real rmax, Grading grading, Real ratio, int dim);

/// Exactly rescaled copy: nodes r/lam, weights w/lam^d, conductances
/// scaled by lam^{d-2}.  All functionals transform exactly under it.
GridPtr rescale_grid(const RadialGrid& g, Real lam);

struct GridAudit {
  Real gauss_quad_relerr = 0;  // |quad(e^{-r^2}) - pi^{d/2}| / pi^{d/2}
  Real hardy_min = 0;          // discrete Hardy constant lambda_h
  Real hardy_slack = 0;        // tau_h = max(0, lambda(d)/lambda_h - 1)
};

/// Measure the grid's quadrature error on the Gaussian moment and the
/// discrete Hardy constant (Rayleigh-quotient minimum of the Dirichlet
/// form against the |x|^-2 weight).
GridAudit audit_grid(const RadialGrid& g);

} // namespace hnls
