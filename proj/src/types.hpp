#pragma once

#include <complex>

#include <Eigen/Dense>

namespace plaser {

using cplx = std::complex<double>;
using Mat6 = Eigen::Matrix<cplx, 6, 6>;
using Vec6 = Eigen::Matrix<cplx, 6, 1>;
using Mat2 = Eigen::Matrix<cplx, 2, 2>;
using Vec2 = Eigen::Matrix<cplx, 2, 1>;

inline constexpr double pi = 3.141592653589793238462643383279502884;

}  // namespace plaser
