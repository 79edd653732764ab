#pragma once

// Test-only oracles, independent of the library's implementation paths.

#include <cmath>
#include <vector>

#include "csent/rng.hpp"
#include "csent/types.hpp"

namespace csent::oracle {

// Largest product overlap max |<phi_a phi_b | psi>| by alternating
// maximization from several random starts; independent of the SVD route.
inline double max_product_overlap(const Vec& psi, int da, int db, int starts = 8,
                                  int iters = 60, std::uint64_t seed = 99) {
    Mat m(da, db);
    for (int i = 0; i < da; ++i)
        for (int j = 0; j < db; ++j) m(i, j) = psi(static_cast<long>(i) * db + j);

    double best = 0.0;
    Rng rng(seed);
    for (int s = 0; s < starts; ++s) {
        Vec a = random_pure(da, rng);
        double overlap = 0.0;
        for (int it = 0; it < iters; ++it) {
            Vec b = m.adjoint() * a;  // optimal conj(phi_b) direction
            double nb = b.norm();
            if (nb < 1e-15) break;
            b /= nb;
            a = m * b;
            double na = a.norm();
            if (na < 1e-15) break;
            a /= na;
            overlap = na;
        }
        best = std::max(best, overlap);
    }
    return best;
}

// Orthonormal qubit basis from Bloch angles, columns (u0, u1).
inline Mat qubit_basis(double theta, double phi) {
    Mat u(2, 2);
    u(0, 0) = std::cos(theta);
    u(1, 0) = std::sin(theta) * std::exp(cxd(0.0, phi));
    u(0, 1) = -std::sin(theta) * std::exp(cxd(0.0, -phi));
    u(1, 1) = std::cos(theta);
    return u;
}

// Brute-force Bures geometric discord of a pure two-qubit state over a grid
// of product bases; the inner simplex optimum for a pure state sits at the
// largest |<kl|psi>|^2 vertex.
inline double grid_bures_discord_pure(const Vec& psi, int grid = 24) {
    double best_f = 0.0;
    for (int ta = 0; ta < grid; ++ta)
        for (int pa = 0; pa < grid; ++pa)
            for (int tb = 0; tb < grid; ++tb)
                for (int pb = 0; pb < grid; ++pb) {
                    Mat ua = qubit_basis(0.5 * M_PI * ta / grid, M_PI * pa / grid);
                    Mat ub = qubit_basis(0.5 * M_PI * tb / grid, M_PI * pb / grid);
                    for (int k = 0; k < 2; ++k)
                        for (int l = 0; l < 2; ++l) {
                            cxd amp = 0.0;
                            for (int i = 0; i < 2; ++i)
                                for (int j = 0; j < 2; ++j)
                                    amp += std::conj(ua(i, k)) * std::conj(ub(j, l)) *
                                           psi(2 * i + j);
                            best_f = std::max(best_f, std::abs(amp));
                        }
                }
    return 2.0 - 2.0 * best_f;
}

// Brute-force Hilbert-Schmidt measurement-induced discord over a basis grid.
inline double grid_hs_mid(const Mat& rho, int grid = 16) {
    double tr2 = (rho * rho).trace().real();
    double best = 1e300;
    for (int ta = 0; ta < grid; ++ta)
        for (int pa = 0; pa < grid; ++pa)
            for (int tb = 0; tb < grid; ++tb)
                for (int pb = 0; pb < grid; ++pb) {
                    Mat ua = qubit_basis(0.5 * M_PI * ta / grid, M_PI * pa / grid);
                    Mat ub = qubit_basis(0.5 * M_PI * tb / grid, M_PI * pb / grid);
                    double diag_sq = 0.0;
                    for (int k = 0; k < 2; ++k)
                        for (int l = 0; l < 2; ++l) {
                            cxd p = 0.0;
                            for (int i = 0; i < 2; ++i)
                                for (int j = 0; j < 2; ++j)
                                    for (int ip = 0; ip < 2; ++ip)
                                        for (int jp = 0; jp < 2; ++jp)
                                            p += std::conj(ua(i, k)) * std::conj(ub(j, l)) *
                                                 rho(2 * i + j, 2 * ip + jp) * ua(ip, k) *
                                                 ub(jp, l);
                            diag_sq += p.real() * p.real();
                        }
                    best = std::min(best, std::sqrt(std::max(0.0, tr2 - diag_sq)));
                }
    return best;
}

} // namespace csent::oracle
