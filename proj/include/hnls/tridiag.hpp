#pragma once

#include <cassert>

#include "hnls/types.hpp"

namespace hnls {

/// Symmetric-structure tridiagonal system, solved by the Thomas algorithm.
/// No pivoting; callers supply diagonally dominant (or SPD-equivalent)
/// systems, which is the case for every operator assembled in this project.
template <class Scalar>
struct Tridiag {
  Vec<Scalar> lower; // size n-1, sub-diagonal (row i+1, col i)
  Vec<Scalar> diag;  // size n
  Vec<Scalar> upper; // size n-1, super-diagonal (row i, col i+1)

  Index size() const { return diag.size(); }

  template <class VecIn>
  Vec<Scalar> apply(const VecIn& x) const {
    const Index n = size();
    assert(x.size() == n);
    Vec<Scalar> y(n);
    for (Index i = 0; i < n; ++i) {
      Scalar v = diag[i] * x[i];
      if (i > 0) v += lower[i - 1] * x[i - 1];
      if (i + 1 < n) v += upper[i] * x[i + 1];
      y[i] = v;
    }
    return y;
  }

  template <class VecIn>
  Vec<Scalar> solve(const VecIn& rhs) const {
    const Index n = size();
    assert(rhs.size() == n);
    Vec<Scalar> c(n), x(n);
    Vec<Scalar> b = rhs;
    // forward sweep
    Scalar piv = diag[0];
    c[0] = upper.size() > 0 ? upper[0] / piv : Scalar(0);
    x[0] = b[0] / piv;
    for (Index i = 1; i < n; ++i) {
      piv = diag[i] - lower[i - 1] * c[i - 1];
      if (i + 1 < n) c[i] = upper[i] / piv;
      x[i] = (b[i] - lower[i - 1] * x[i - 1]) / piv;
    }
    // back substitution
    for (Index i = n - 2; i >= 0; --i) x[i] -= c[i] * x[i + 1];
    return x;
  }
};

/// a*I + b*T
template <class Scalar>
Tridiag<Scalar> shifted(const Tridiag<Scalar>& T, Scalar a, Scalar b) {
  Tridiag<Scalar> s;
  s.lower = b * T.lower;
  s.upper = b * T.upper;
  s.diag = a + b * T.diag;
  return s;
}

} // namespace hnls
