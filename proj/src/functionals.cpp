#include "hnls/functionals.hpp"

namespace hnls {

Tridiag<Real> hardy_operator(const RadialGrid& g, const ModelParams& p) {
  if (g.dim != p.d) throw UsageError("grid dimension differs from model d");
  const Index n = g.n;
  Tridiag<Real> H;
  H.lower.resize(n - 1);
  H.upper.resize(n - 1);
  H.diag.resize(n);
  for (Index i = 0; i < n; ++i) {
    Real d = (i > 0 ? g.couple[i - 1] : 0.0);
    d += (i + 1 < n ? g.couple[i] : g.couple_outer);
    H.diag[i] = d / g.w[i] - p.c / (g.r[i] * g.r[i]);
  }
  for (Index i = 0; i + 1 < n; ++i) {
    H.upper[i] = -g.couple[i] / g.w[i];
    H.lower[i] = -g.couple[i] / g.w[i + 1];
  }
  return H;
}

Tridiag<Complex> shifted_hardy_operator(const RadialGrid& g,
                                        const ModelParams& p, Complex a,
                                        Complex b) {
  const Tridiag<Real> H = hardy_operator(g, p);
  Tridiag<Complex> S;
  S.lower = b * H.lower.cast<Complex>();
  S.upper = b * H.upper.cast<Complex>();
  S.diag = a + b * H.diag.cast<Complex>();
  return S;
}

} // namespace hnls
