#pragma once

#include <string>
#include <vector>

#include "hnls/factored.hpp"
#include "hnls/functionals.hpp"
#include "hnls/grid.hpp"
#include "hnls/model.hpp"
#include "hnls/types.hpp"

namespace hnls {

enum class InitialGuess { Gaussian, FactoredSingular, File };

std::string to_string(InitialGuess g);
InitialGuess initial_guess_from_string(const std::string& s);

struct FlowOptions {
  Real pseudo_time_step = 0.5;
  int max_iters = 200000;
  Real energy_tol = 1e-14;   // relative energy stagnation between checks
  Real residual_tol = 1e-8;  // Euler-Lagrange residual threshold
  InitialGuess initial_guess = InitialGuess::Gaussian;
  Real guess_width = 2.0;
  RealVec guess_values;      // used when initial_guess == File
  unsigned seed = 0;         // seeded multiplicative bump on the guess
};

struct PohozaevReport {
  Real e1 = 0;  // residual of ||Q||_Hc^2 = (d a/(2a+4)) ||Q||_{a+2}^{a+2}
  Real e2 = 0;  // residual of omega ||Q||^2 = ((2a+4-da)/(2a+4)) ||Q||_{a+2}^{a+2}
  Real e3 = std::numeric_limits<Real>::quiet_NaN(); // critical only: |E|/||Q||_Hc^2
  bool critical = false;

  Real worst() const {
    Real m = std::max(e1, e2);
    if (critical) m = std::max(m, e3);
    return m;
  }
  bool pass(Real tol) const { return worst() <= tol; }
};

struct GroundState {
  ModelParams params;
  GridPtr grid;
  RealVec q;            // positive radial profile
  Real omega = 0;       // certified (Rayleigh) multiplier
  Real omega_appendix = 0; // -d_M / M, recorded alongside for comparison
  Real mass = 0;
  Real energy = 0;
  Real d_M = std::numeric_limits<Real>::quiet_NaN(); // attained infimum (subcritical)
  Real residual = 0;    // ||H Q + omega Q - |Q|^a Q||_w / ||Q||_w
  PohozaevReport pohozaev; // physical-stencil residuals (diagnostic)
  Certificate cert;        // factored-representation certificate (ruling)
  std::vector<Real> energy_history;
  std::string provenance; // initial-guess descriptor, for reproducibility
};

/// Euler-Lagrange residual of the elliptic equation at a given omega.
Real elliptic_residual(const RadialGrid& g, const RealVec& q, Real omega,
                       const ModelParams& p);

PohozaevReport pohozaev_check(const RadialGrid& g, const RealVec& q,
                              Real omega, const ModelParams& p);

struct OmegaEstimates {
  Real rayleigh = 0;  // (lp - ||Q||_Hc^2) / ||Q||^2, the certified value
  Real appendix = 0;  // -d_M / M
  Real gap = 0;       // |rayleigh - appendix|
};

/// Both multiplier estimates for a converged minimizer. The Rayleigh value
/// (elliptic equation paired with Q) is the certified one; the -d_M/M value
/// is recorded next to it so the discrepancy is part of every report.
OmegaEstimates extract_omega(const RadialGrid& g, const RealVec& q,
                             const ModelParams& p, Real M, Real d_M);

/// Constrained minimization of E at fixed mass M by semi-implicit normalized
/// gradient flow (backward step in H, explicit nonlinearity, exact
/// renormalization). Subcritical alpha only.
GroundState minimize_mass_constrained(Real M, const ModelParams& p, GridPtr g,
                                      const FlowOptions& opts);

/// Critical-case ground state: normalized ascent of the Weinstein functional,
/// then amplitude fixing to the elliptic normalization H Q + omega Q = Q^{1+a}.
GroundState maximize_weinstein(const ModelParams& p, GridPtr g,
                               const FlowOptions& opts);

/// Frequency rescale of an elliptic solution: lam = sqrt(omega_new/omega_old),
/// Q_new = lam^{2/alpha} Q(lam x) on the same grid (mass-preserving exactly
/// when alpha = 4/d). Re-certifies and returns the updated record.
GroundState scale_to_omega(const GroundState& gs, Real omega_new);

/// Initial-guess profile used by both solvers (exposed for tests).
RealVec initial_profile(const RadialGrid& g, const ModelParams& p,
                        const FlowOptions& opts);

} // namespace hnls
