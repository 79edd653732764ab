#pragma once

#include <string>
#include <vector>

#include "csent/rng.hpp"
#include "csent/state.hpp"
#include "csent/types.hpp"

namespace csent {

enum class DistanceKind { BuresSquared, HilbertSchmidt, Trace, RelativeEntropy };

std::string to_string(DistanceKind k);

// Uhlmann fidelity tr sqrt(sqrt(sigma) rho sqrt(sigma)), clipped to [0, 1].
double fidelity(const Mat& rho, const Mat& sigma);
double fidelity(const MultipartiteState& rho, const MultipartiteState& sigma);

// Fidelity against sigma = C C^dag given only the factor matrix C (d x k).
// Equals sum_i sqrt(eig_i(C^dag rho C)); cheap when k << d.
double fidelity_factors(const Mat& rho, const Mat& c);

// Support factor A with m = A A^dag over the numerically nonzero spectrum;
// the stable building block behind fidelity.
Mat psd_support_factor(const Mat& m, double rel_cut = 1e-13);

// Squared Bures distance 2 - 2 F, the optimization objective.
double bures_sq(const Mat& rho, const Mat& sigma);
double bures_sq(const MultipartiteState& rho, const MultipartiteState& sigma);

// Frobenius norm of the difference.
double hs_distance(const Mat& rho, const Mat& sigma);
double hs_distance(const MultipartiteState& rho, const MultipartiteState& sigma);

double trace_distance(const Mat& rho, const Mat& sigma);

// Returns +infinity on support mismatch, never throws for that case.
double relative_entropy(const Mat& rho, const Mat& sigma);

double distance(DistanceKind kind, const Mat& rho, const Mat& sigma);

struct AncillaInvarianceReport {
    bool pass = false;
    double max_deviation = 0.0;
    int trials = 0;
};

// |d(rho, sigma) - d(rho x |0><0|, sigma x |0><0|)| <= 1e-10 for the given
// pair plus (trials - 1) random pairs of the same dimension.
AncillaInvarianceReport pure_ancilla_invariance_check(DistanceKind kind, const Mat& rho,
                                                      const Mat& sigma, int trials,
                                                      std::uint64_t seed = 20240901);

// Random CPTP map with k Kraus operators from a Stinespring dilation.
std::vector<Mat> random_kraus(int d, int k, Rng& rng);
Mat apply_kraus(const std::vector<Mat>& kraus, const Mat& rho);

struct HsWitness {
    std::string channel_description;
    MultipartiteState rho, sigma;            // two-factor inputs
    MultipartiteState rho_after, sigma_after;  // channel outputs
    double before = 0.0, after = 0.0;          // Hilbert-Schmidt distances
    double bures_before = 0.0, bures_after = 0.0;
};

// Partial trace over a maximally mixed correlated factor expands the
// Hilbert-Schmidt distance by sqrt(d); the shipped instance has
// before = 1, after = sqrt(2).
HsWitness hs_noncontractivity_witness(int ancilla_dim = 2);

} // namespace csent
