#include "csent/rng.hpp"

#include <cmath>

#include <Eigen/QR>

#include "csent/errors.hpp"

namespace csent {

std::uint64_t Rng::mix(std::uint64_t a, std::uint64_t b) {
    // splitmix64 over the combined word
    std::uint64_t z = a + 0x9e3779b97f4a7c15ULL * (b + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

Mat ginibre(Rng& rng, int rows, int cols) {
    Mat g(rows, cols);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) {
            double re = rng.normal();
            double im = rng.normal();
            g(i, j) = cxd(re, im) / std::sqrt(2.0);
        }
    return g;
}

Mat random_unitary(int d, Rng& rng) {
    Mat g = ginibre(rng, d, d);
    Eigen::HouseholderQR<Mat> qr(g);
    Mat q = qr.householderQ();
    Mat r = qr.matrixQR().triangularView<Eigen::Upper>();
    Vec phase(d);
    for (int i = 0; i < d; ++i) {
        cxd rii = r(i, i);
        phase(i) = std::abs(rii) > 0.0 ? rii / std::abs(rii) : cxd(1.0, 0.0);
    }
    return q * phase.asDiagonal();
}

Mat random_unitary(int d, std::uint64_t seed) {
    Rng rng(seed);
    return random_unitary(d, rng);
}

Mat random_density(int d, int rank, Rng& rng) {
    if (rank < 1 || rank > d)
        throw DomainError("random_density: rank must be in [1, d]");
    Mat g = ginibre(rng, d, rank);
    Mat rho = g * g.adjoint();
    rho /= rho.trace().real();
    return rho;
}

Mat random_density(int d, int rank, std::uint64_t seed) {
    Rng rng(seed);
    return random_density(d, rank, rng);
}

Vec random_pure(int d, Rng& rng) {
    Mat g = ginibre(rng, d, 1);
    Vec v = g.col(0);
    return v / v.norm();
}

Vec random_pure(int d, std::uint64_t seed) {
    Rng rng(seed);
    return random_pure(d, rng);
}

} // namespace csent
