#pragma once

#include <functional>
#include <string>
#include <vector>

#include "hnls/functionals.hpp"
#include "hnls/grid.hpp"
#include "hnls/model.hpp"
#include "hnls/types.hpp"

namespace hnls {

enum class Scheme { CrankNicolsonRelaxed, StrangSplit };

std::string to_string(Scheme s);
Scheme scheme_from_string(const std::string& s);

struct EvolutionConfig {
  Real dt0 = 1e-3;
  Real t_end = 1.0;
  Scheme scheme = Scheme::CrankNicolsonRelaxed;
  Real fixed_point_tol = 1e-13;  // inner iteration on the midpoint density
  int max_fixed_point = 60;
  Real blowup_gradient_factor = 1e3;
  Real blowup_dt_floor = 1e-9;
  int record_every = 10;
  bool adaptive_dt = true;   // dt ~ (max|u|)^-alpha with dt0 as the cap
  bool linear_only = false;  // disable the nonlinearity (reference runs)
  Real mass_budget = 1e-10;        // relative drift gate for Completed
  Real energy_budget_rate = 1e-6;  // relative drift per unit time
  Real tail_fraction = 0.8;  // tail region for the variance validity flag
  Real tail_budget = 1e-8;
};

/// Sampled diagnostics along an evolution. Columns are complete; xu_ok
/// flags samples whose variance is trustworthy (tail mass within budget).
struct TimeSeries {
  std::vector<Real> t;
  std::vector<ObservableSet> obs;
  std::vector<Real> xu_sq;
  std::vector<char> xu_ok;
  std::vector<Real> v_phiR; // NaN when no cutoff weight is attached
  std::vector<Real> dt;
};

enum class OutcomeKind { Completed, BlowUp };

struct EvolutionOutcome {
  OutcomeKind kind = OutcomeKind::Completed;
  Real T_lo = 0, T_hi = 0;  // blow-up bracket
  Real T_estimate = 0;
  Real mass_drift = 0;    // terminal relative drift
  Real energy_drift = 0;  // terminal drift / energy scale
  std::string note;
};

/// One time step of i u_t = H u - |u|^alpha u. The relaxed Crank-Nicolson
/// scheme iterates the midpoint density to fixed_point_tol (mass is
/// conserved to solver accuracy for any real density); Strang splitting
/// alternates the exact nonlinear phase with a Cayley linear step.
ComplexVec step(const RadialGrid& g, const ComplexVec& u, Real dt,
                const ModelParams& p, const EvolutionConfig& cfg);

/// Integrate to cfg.t_end with adaptive dt, recording every record_every
/// steps. phi_weight, when given, is a tabulated cutoff phi_R(r_i) whose
/// weighted mass is recorded per sample (the localized virial potential).
std::pair<TimeSeries, EvolutionOutcome> evolve(const RadialField& u0,
                                               const EvolutionConfig& cfg,
                                               const ModelParams& p,
                                               const RealVec* phi_weight =
                                                   nullptr);

/// Time-indexed field source on a fixed grid (e.g. a standing wave).
using FieldSource = std::function<ComplexVec(Real)>;

/// Standing wave s -> e^{i omega s} Q.
FieldSource standing_wave_source(const RealVec& q, Real omega);

/// Pseudo-conformal transform of a source solution:
///   u_T(t, x) = e^{-i|x|^2/(4(T-t))} (T-t)^{-d/2} u(1/(T-t), x/(T-t)).
/// Mass-critical alpha only; rho is used to interpolate singular profiles
/// through their smooth factor.
ComplexVec pseudo_conformal(const FieldSource& src, const RadialGrid& g,
                            const ModelParams& p, Real T, Real t);

} // namespace hnls
