#pragma once

#include <string>
#include <utility>
#include <vector>

#include "csent/state.hpp"
#include "csent/types.hpp"

namespace csent {

// Extension of a bipartite state on factors a1, a1p, [a2p] | b1, b1p, [b2p]
// carrying the local witness unitaries for the two cross swaps
// a1 <-> b1p and a1p <-> b1. Both witnesses act on the party-A factors in
// layout order; the a2p/b2p flag factors are present only when needed.
struct CseCandidate {
    MultipartiteState state;
    std::string original_a = "a1";
    std::string original_b = "b1";
    Mat witness_a1_b1p;
    Mat witness_a1p_b1;
};

struct CseVerifyReport {
    double marginal_residual = 0.0;
    double swap_residual_1 = 0.0;  // a1 <-> b1p after witness_a1_b1p
    double swap_residual_2 = 0.0;  // a1p <-> b1 after witness_a1p_b1
    bool pass = false;
};

// Extension psi x |0,0> on swap-compatible ancillas with the witness built
// from the Schmidt frame of psi.
CseCandidate canonical_pure_cse(const Vec& psi, const SubsystemLayout& layout);

// Pure extension from the spectral decomposition, flag registers of
// dimension rank(rho) on both sides; reduces to the pure constructor when
// the state has rank one.
CseCandidate canonical_mixed_cse(const MultipartiteState& rho);

// Flagged product-ensemble extension of a separable state; the witnesses are
// the identity. Members are (a_l, b_l) pure local vectors.
CseCandidate separable_cse(const RVec& weights,
                           const std::vector<std::pair<Vec, Vec>>& members,
                           const SubsystemLayout& layout);

// Block-diagonal mixture of same-layout candidates with fresh flag registers
// and the controlled witness sum_i U_i x |i><i|.
CseCandidate flagged_mixture_cse(const std::vector<CseCandidate>& parts, const RVec& probs);

// Residual check of Definition-compliance: marginal recovery plus both swap
// invariances under the candidate's own witnesses. Never throws on a bad
// candidate, only on malformed layouts.
CseVerifyReport verify_cse(const CseCandidate& candidate, const MultipartiteState& original,
                           double tol = 1e-9);

} // namespace csent
