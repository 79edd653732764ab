#pragma once

#include <cstdint>
#include <vector>

#include "csent/cse.hpp"
#include "csent/discord.hpp"
#include "csent/dist.hpp"
#include "csent/state.hpp"

namespace csent {

struct EntReport {
    double value = 0.0;
    BoundDirection bound_direction = BoundDirection::UpperBound;
    int restarts = 0;
    double converged_fraction = 0.0;
    RVec certificate;        // optimizer coordinates of the best ansatz
    std::string ansatz;      // which family the certificate parametrizes
    double certificate_residual = 0.0;  // worst verify_cse residual, when built
    std::vector<double> terminal_values;
};

struct EntOpts {
    int k = 0;          // separable-ansatz terms; 0 = min((da*db)^2, 32)
    int m = 0;          // ensemble size; 0 = context default
    int restarts = 0;   // 0 = 16 (8 in fast mode)
    std::uint64_t seed = 1;
    int max_iters = 0;  // 0 = per-operation default
    bool fast = false;
};

// 2 - 2 * (largest Schmidt coefficient); exact on pure states.
double pure_bures_entanglement(const Vec& psi, const SubsystemLayout& layout);
double pure_bures_entanglement(const MultipartiteState& s);  // DomainError if mixed

// Separable-set minimization of the squared Bures distance over a product
// ansatz with softmax weights; multistart quasi-Newton, upper bound.
EntReport bures_entanglement(const MultipartiteState& s, const EntOpts& opts = {});

// Convex roof over ensembles parametrized by mixing unitaries on the
// purification ancilla; upper bound (exact for pure inputs).
EntReport convex_roof_bures(const MultipartiteState& s, const EntOpts& opts = {});

// Minimal discord over the restricted cross-symmetric-extension family:
// flagged mixtures of canonical pure extensions of roof ensembles. The value
// is the numerically evaluated distance between the constructed extension and
// an explicit classically-correlated candidate, an upper bound on the induced
// quantifier. The final extension is returned through `certificate_out` when
// requested.
EntReport cse_discord_min(const MultipartiteState& s, DistanceKind kind,
                          const EntOpts& opts = {}, CseCandidate* certificate_out = nullptr);

struct Theorem2Report {
    double cse_value = 0.0;
    double direct_discord = 0.0;
    double pure_entanglement = 0.0;
    double tol = 5e-3;
    bool pass = false;
};

// Pure-state equivalence of the extension-minimized discord, the plain
// geometric discord and the pure-state entanglement (Bures).
Theorem2Report theorem2_check(const Vec& psi, const SubsystemLayout& layout,
                              DistanceKind kind = DistanceKind::BuresSquared,
                              const EntOpts& opts = {}, double tol = 5e-3);

struct Theorem3Report {
    double lower = 0.0;      // separable-set minimization
    double cse_value = 0.0;  // extension-minimized discord
    double upper = 0.0;      // convex roof
    double max_gap = 0.0;
    double tol = 1e-2;
    double gap_tol = 2e-2;
    bool pass = false;
};

// lower - tol <= cse <= upper + tol and upper - lower <= gap_tol.
Theorem3Report theorem3_sandwich(const MultipartiteState& s, const EntOpts& opts = {},
                                 double tol = 1e-2, double gap_tol = 2e-2);

} // namespace csent
