#pragma once

#include <cmath>
#include <sstream>

#include "hnls/errors.hpp"
#include "hnls/types.hpp"

namespace hnls {

/// Model parameters for i u_t + Lap u + c|x|^-2 u = -|u|^alpha u on R^d.
///
/// lambda_d = ((d-2)/2)^2 is the sharp Hardy constant; rho is the leading
/// power of radial steady profiles at the origin (r^-rho growth for c > 0,
/// r^|rho| vanishing for c < 0).
struct ModelParams {
  int d = 0;
  Real c = 0;
  Real alpha = 0;
  Real lambda_d = 0;
  Real rho = 0;

  ModelParams() = default;

  ModelParams(int d_, Real c_, Real alpha_, bool allow_c_zero = false)
      : d(d_), c(c_), alpha(alpha_) {
    std::ostringstream why;
    if (d < 3) {
      why << "d >= 3 required (got d = " << d << ")";
      throw PhysicsError(why.str());
    }
    lambda_d = Real(d - 2) * Real(d - 2) / 4.0;
    if (!(c < lambda_d)) {
      why << "c < lambda(d) = " << lambda_d << " required strictly (got c = "
          << c << ")";
      throw PhysicsError(why.str());
    }
    if (c == 0.0 && !allow_c_zero) {
      throw PhysicsError(
          "c = 0 is admitted only in oracle/reference mode; set the "
          "reference-mode flag to run the classical-NLS cross-check");
    }
    const Real alpha_max = 4.0 / Real(d - 2);
    if (!(alpha > 0.0) || alpha > alpha_max) {
      why << "0 < alpha <= 4/(d-2) = " << alpha_max
          << " required (got alpha = " << alpha << ")";
      throw PhysicsError(why.str());
    }
    rho = Real(d - 2) / 2.0 - std::sqrt(lambda_d - c);
  }

  Real critical_alpha() const { return 4.0 / Real(d); }
  bool is_mass_critical() const { return alpha == critical_alpha(); }
  bool is_mass_subcritical() const { return alpha < critical_alpha(); }
};

} // namespace hnls
