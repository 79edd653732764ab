#pragma once

#include "csent/types.hpp"

namespace csent {

struct EigDecomposition {
    RVec eigenvalues;  // ascending
    Mat eigenvectors;  // unitary, columns
};

// Spectral decomposition of a Hermitian matrix. The input is symmetrized as
// (M + M^dag)/2 first; columns carry a deterministic phase fix (first entry
// of magnitude > 1e-9 made real positive) so degenerate-frame choices are at
// least reproducible.
EigDecomposition hermitian_eig(const Mat& m);

// PSD square root. Eigenvalues in [-1e-10, 0) are clipped to zero; anything
// below -1e-10 raises NotPsdError.
Mat hermitian_sqrt(const Mat& m);

// exp(i * H) for Hermitian H, via the spectral decomposition.
Mat exp_i_hermitian(const Mat& h);

// Hermitian matrix from d*d real coordinates: diagonal entries first, then
// (re, im) pairs for the upper triangle.
Mat hermitian_from_params(const RVec& x, int d);

// Generator coordinates reproducing a given unitary through exp_i_hermitian.
RVec params_from_unitary(const Mat& u);

// Unitary with columns (t_i, t_perp) matched to (s_i, s_perp): U s_i = t_i for
// orthonormal families s, t given as matrix columns.
Mat unitary_matching(const Mat& sources, const Mat& targets);

double purity(const Mat& rho);

} // namespace csent
