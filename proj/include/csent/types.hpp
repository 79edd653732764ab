#pragma once

#include <complex>

#include <Eigen/Dense>

namespace csent {

using cxd = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;
using RVec = Eigen::VectorXd;
using RMat = Eigen::MatrixXd;

// Total Hilbert-space dimension supported by the dense kernels.
inline constexpr int kMaxTotalDim = 256;

inline double max_abs(const Mat& m) { return m.cwiseAbs().maxCoeff(); }

inline Vec basis_vector(int dim, int index) {
    Vec v = Vec::Zero(dim);
    v(index) = 1.0;
    return v;
}

} // namespace csent
