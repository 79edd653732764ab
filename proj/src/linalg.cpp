#include "csent/linalg.hpp"

#include <cmath>

#include <Eigen/Eigenvalues>
#include <Eigen/QR>

#include "csent/errors.hpp"

namespace csent {

EigDecomposition hermitian_eig(const Mat& m) {
    if (m.rows() != m.cols()) throw ShapeError("hermitian_eig: matrix not square");
    Mat h = 0.5 * (m + m.adjoint());
    Eigen::SelfAdjointEigenSolver<Mat> es(h);
    if (es.info() != Eigen::Success) throw Error("hermitian_eig: eigensolver failed");
    EigDecomposition out{es.eigenvalues(), es.eigenvectors()};
    for (long c = 0; c < out.eigenvectors.cols(); ++c) {
        for (long r = 0; r < out.eigenvectors.rows(); ++r) {
            cxd v = out.eigenvectors(r, c);
            if (std::abs(v) > 1e-9) {
                out.eigenvectors.col(c) *= std::conj(v) / std::abs(v);
                break;
            }
        }
    }
    return out;
}

Mat hermitian_sqrt(const Mat& m) {
    auto eig = hermitian_eig(m);
    RVec lam = eig.eigenvalues;
    for (long i = 0; i < lam.size(); ++i) {
        if (lam(i) < -1e-10)
            throw NotPsdError("hermitian_sqrt: eigenvalue " + std::to_string(lam(i)) +
                              " below -1e-10");
        if (lam(i) < 0.0) lam(i) = 0.0;
    }
    return eig.eigenvectors * lam.cwiseSqrt().asDiagonal() * eig.eigenvectors.adjoint();
}

Mat exp_i_hermitian(const Mat& h) {
    auto eig = hermitian_eig(h);
    Vec phases(eig.eigenvalues.size());
    for (long i = 0; i < phases.size(); ++i)
        phases(i) = std::exp(cxd(0.0, eig.eigenvalues(i)));
    return eig.eigenvectors * phases.asDiagonal() * eig.eigenvectors.adjoint();
}

Mat hermitian_from_params(const RVec& x, int d) {
    if (x.size() != static_cast<long>(d) * d)
        throw ShapeError("hermitian_from_params: expected d*d coordinates");
    Mat h = Mat::Zero(d, d);
    long k = 0;
    for (int i = 0; i < d; ++i) h(i, i) = x(k++);
    for (int i = 0; i < d; ++i)
        for (int j = i + 1; j < d; ++j) {
            h(i, j) = cxd(x(k), x(k + 1));
            h(j, i) = std::conj(h(i, j));
            k += 2;
        }
    return h;
}

RVec params_from_unitary(const Mat& u) {
    if (u.rows() != u.cols()) throw ShapeError("params_from_unitary: matrix not square");
    const int d = static_cast<int>(u.rows());
    Eigen::ComplexEigenSolver<Mat> es(u);
    if (es.info() != Eigen::Success) throw Error("params_from_unitary: eigensolver failed");
    Mat v = es.eigenvectors();
    Vec lam = es.eigenvalues();
    Mat h = Mat::Zero(d, d);
    for (int i = 0; i < d; ++i) {
        double phi = std::arg(lam(i));
        h += phi * v.col(i) * v.col(i).adjoint();
    }
    h = 0.5 * (h + h.adjoint());
    RVec x(static_cast<long>(d) * d);
    long k = 0;
    for (int i = 0; i < d; ++i) x(k++) = h(i, i).real();
    for (int i = 0; i < d; ++i)
        for (int j = i + 1; j < d; ++j) {
            x(k++) = h(i, j).real();
            x(k++) = h(i, j).imag();
        }
    return x;
}

Mat unitary_matching(const Mat& sources, const Mat& targets) {
    if (sources.rows() != targets.rows() || sources.cols() != targets.cols())
        throw ShapeError("unitary_matching: family shapes differ");
    const long d = sources.rows();
    const long k = sources.cols();
    if (k > d) throw ShapeError("unitary_matching: more vectors than dimensions");

    auto orthogonal_complement = [d, k](const Mat& fam) {
        if (k == d) return Mat(d, 0);
        Eigen::HouseholderQR<Mat> qr(fam);
        Mat q = qr.householderQ();
        return Mat(q.rightCols(d - k));
    };

    Mat sc = orthogonal_complement(sources);
    Mat tc = orthogonal_complement(targets);
    Mat u = targets * sources.adjoint();
    if (sc.cols() > 0) u += tc * sc.adjoint();
    return u;
}

double purity(const Mat& rho) { return (rho * rho).trace().real(); }

} // namespace csent
