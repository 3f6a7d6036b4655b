#pragma once

#include <Eigen/Core>
#include <complex>

namespace hnls {

using Real = double;
using Complex = std::complex<double>;

template <class Scalar>
using Vec = Eigen::Array<Scalar, Eigen::Dynamic, 1>;

using RealVec = Vec<Real>;
using ComplexVec = Vec<Complex>;

using Index = Eigen::Index;

constexpr Real pi = 3.14159265358979323846;

} // namespace hnls
