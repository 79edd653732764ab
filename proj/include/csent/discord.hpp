#pragma once

#include <cstdint>

#include "csent/dist.hpp"
#include "csent/state.hpp"
#include "csent/types.hpp"

namespace csent {

// Local bases as unitaries exp(i H(params)) with d*d real generator
// coordinates per side; redundant but smooth and unconstrained.
struct LocalBasisPair {
    RVec params_a, params_b;
    Mat realized_a, realized_b;
};

LocalBasisPair realize_basis_pair(const RVec& params_a, const RVec& params_b, int da, int db);

struct CcState {
    LocalBasisPair bases;
    RMat probs;  // joint table p_ij, i over A basis, j over B basis
};

MultipartiteState cc_to_state(const CcState& cc);

enum class BoundDirection { UpperBound, Exact };

struct DiscordReport {
    double value = 0.0;
    LocalBasisPair argmin_bases;
    RMat argmin_probs;  // empty for measurement-induced discord
    int restarts = 0;
    double converged_fraction = 0.0;
    BoundDirection bound_direction = BoundDirection::UpperBound;
    std::vector<double> terminal_values;
};

struct DiscordOpts {
    int restarts = 0;  // 0 = 16 for 2x2 layouts, 48 otherwise
    std::uint64_t seed = 1;
    double tol = 1e-8;    // inner projected-gradient tolerance
    int outer_iters = 150;
};

// Two-sided dephasing sum_ij <a_i b_j|rho|a_i b_j| |a_i b_j><a_i b_j| in the
// given product basis; output keeps the input factor order.
MultipartiteState dephase(const MultipartiteState& s, const Mat& basis_a, const Mat& basis_b);

// Closest classically correlated state at fixed local bases.
// HilbertSchmidt: closed form (dephased diagonal). BuresSquared: concave
// fidelity maximization over the probability simplex by projected gradient
// ascent. Returns the optimal table and the distance value for the kind.
std::pair<RMat, double> closest_cc_fixed_bases(const MultipartiteState& s, const Mat& basis_a,
                                               const Mat& basis_b, DistanceKind kind,
                                               double tol = 1e-8);

// Two-sided geometric discord: outer multistart quasi-Newton over the local
// bases, inner closest_cc_fixed_bases. Upper-bound semantics.
DiscordReport geometric_discord(const MultipartiteState& s, DistanceKind kind,
                                const DiscordOpts& opts = {});

// Measurement-induced discord min over product bases of d(rho, Pi(rho)).
DiscordReport mid(const MultipartiteState& s, DistanceKind kind, const DiscordOpts& opts = {});

} // namespace csent
