#pragma once

#include <string>
#include <utility>
#include <vector>

#include "csent/layout.hpp"
#include "csent/types.hpp"

namespace csent {

struct MultipartiteState {
    Mat rho;
    SubsystemLayout layout;

    int dim() const { return static_cast<int>(rho.rows()); }

    // Hermitian within 1e-10, PSD within 1e-10, trace within 1e-12 of one,
    // and matrix dimension equal to the layout product. Throws
    // ValidationError naming the violated invariant.
    void validate() const;
};

MultipartiteState make_state(Mat rho, SubsystemLayout layout, bool validate = true);
MultipartiteState state_from_pure(const Vec& psi, SubsystemLayout layout);

// Label-level wrappers over the index kernels.
MultipartiteState partial_trace(const MultipartiteState& s,
                                const std::vector<std::string>& discard);
Mat swap_unitary(const SubsystemLayout& layout, const std::string& x, const std::string& y);
MultipartiteState tensor(const MultipartiteState& a, const MultipartiteState& b);

// State permuted so party-A factors precede party-B factors (stable order),
// together with the factor order applied.
struct GroupedState {
    MultipartiteState state;
    std::vector<int> order;
};
GroupedState group_parties(const MultipartiteState& s);

// Pure-state vector permuted by factor order.
Vec permute_vector(const Vec& psi, const std::vector<int>& dims, const std::vector<int>& order);

struct SchmidtForm {
    RVec coefficients;  // descending, nonnegative, squares sum to one
    Mat left_vectors;   // orthonormal columns on party A
    Mat right_vectors;  // orthonormal columns on party B
};

// Schmidt decomposition of a normalized pure state across the party cut.
SchmidtForm schmidt(const Vec& psi, const SubsystemLayout& layout);

struct PptReport {
    bool ppt = false;
    double min_eigenvalue = 0.0;
};

// Partial transpose over party B; PPT iff min eigenvalue >= -tol.
PptReport is_ppt(const MultipartiteState& s, double tol = 1e-10);

// Wootters concurrence, 2x2 layouts only.
double concurrence_2q(const MultipartiteState& s);

// Classically correlated state sum_ij p_ij |a_i b_j><a_i b_j| from local
// orthonormal bases given as unitary columns.
MultipartiteState make_cc(const Mat& basis_a, const Mat& basis_b, const RMat& probs);

// Convex mixture of product pure states.
MultipartiteState make_separable(const RVec& weights,
                                 const std::vector<std::pair<Vec, Vec>>& members,
                                 const SubsystemLayout& layout);

struct Purification {
    Vec psi;                 // pure state on layout
    SubsystemLayout layout;  // original factors plus one ancilla factor
    std::string ancilla_label;
    int rank = 0;
};

// Pure state whose ancilla marginal recovers the input; ancilla dimension
// equals rank.
Purification purify(const MultipartiteState& s);

struct EnsembleDecomposition {
    RVec weights;
    std::vector<Vec> states;  // normalized, on the original layout
};

// Ensemble of size m induced by an m x rank isometry acting on the
// purification ancilla; reconstructs the state exactly.
EnsembleDecomposition ensemble_from_isometry(const MultipartiteState& s, const Mat& isometry);

bool is_pure(const MultipartiteState& s, double tol = 1e-8);
// Principal eigenvector; requires purity within tol.
Vec pure_vector(const MultipartiteState& s, double tol = 1e-8);

// Named two-qubit test families.
Vec bell_phi_plus();
Vec bell_phi_minus();
Vec bell_psi_plus();
Vec bell_psi_minus();
// p |psi-><psi-| + (1-p) I/4
MultipartiteState werner(double p);
// Mixture of the four Bell states with the given weights.
MultipartiteState bell_diagonal(const RVec& weights);

} // namespace csent
