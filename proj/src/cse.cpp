#include "csent/cse.hpp"

#include <cmath>

#include "csent/errors.hpp"
#include "csent/kernels.hpp"
#include "csent/linalg.hpp"

namespace csent {

namespace {

constexpr double kSupportCut = 1e-12;

SubsystemLayout four_factor_layout(int da, int db) {
    return SubsystemLayout{{Factor{"a1", da, Party::A}, Factor{"a1p", db, Party::A},
                            Factor{"b1", db, Party::B}, Factor{"b1p", da, Party::B}}};
}

SubsystemLayout six_factor_layout(int da, int db, int flag) {
    return SubsystemLayout{{Factor{"a1", da, Party::A}, Factor{"a1p", db, Party::A},
                            Factor{"a2p", flag, Party::A}, Factor{"b1", db, Party::B},
                            Factor{"b1p", da, Party::B}, Factor{"b2p", flag, Party::B}}};
}

Vec grouped_pure(const Vec& psi, const SubsystemLayout& layout) {
    if (psi.size() != layout.dim()) throw ShapeError("cse: vector does not match layout");
    std::vector<int> order = layout.party_positions(Party::A);
    auto bpos = layout.party_positions(Party::B);
    order.insert(order.end(), bpos.begin(), bpos.end());
    return permute_vector(psi, layout.dims(), order);
}

} // namespace

CseCandidate canonical_pure_cse(const Vec& psi, const SubsystemLayout& layout) {
    const int da = layout.party_dim(Party::A);
    const int db = layout.party_dim(Party::B);
    Vec g = grouped_pure(psi, layout);
    if (std::abs(g.norm() - 1.0) > 1e-8)
        throw NormalizationError("canonical_pure_cse: state not normalized");

    SchmidtForm sf = schmidt(psi, layout);
    int r = 0;
    for (long j = 0; j < sf.coefficients.size(); ++j)
        if (sf.coefficients(j) > kSupportCut) ++r;
    r = std::max(r, 1);

    // Psi = psi_{a1 b1} x |0>_{a1p} |0>_{b1p}
    SubsystemLayout ext = four_factor_layout(da, db);
    const long de = ext.dim();
    Vec big = Vec::Zero(de);
    for (int ia = 0; ia < da; ++ia)
        for (int ib = 0; ib < db; ++ib) {
            long idx = ((static_cast<long>(ia) * db + 0) * db + ib) * da + 0;
            big(idx) = g(static_cast<long>(ia) * db + ib);
        }

    // witness maps |x_j, 0> to |0, y_j| on the A factors
    const long dA = static_cast<long>(da) * db;
    Mat sources(dA, r), targets(dA, r);
    Vec e0a = basis_vector(da, 0), e0b = basis_vector(db, 0);
    for (int j = 0; j < r; ++j) {
        sources.col(j) = kern::tensor(Mat(sf.left_vectors.col(j)), Mat(e0b)).col(0);
        targets.col(j) = kern::tensor(Mat(e0a), Mat(sf.right_vectors.col(j))).col(0);
    }
    Mat u = unitary_matching(sources, targets);

    CseCandidate out;
    out.state = MultipartiteState{big * big.adjoint(), ext};
    out.witness_a1_b1p = u;
    out.witness_a1p_b1 = u;
    return out;
}

CseCandidate canonical_mixed_cse(const MultipartiteState& rho) {
    MultipartiteState g = group_parties(rho).state;
    const int da = g.layout.party_dim(Party::A);
    const int db = g.layout.party_dim(Party::B);

    auto eig = hermitian_eig(g.rho);
    std::vector<int> kept;
    for (long i = 0; i < eig.eigenvalues.size(); ++i)
        if (eig.eigenvalues(i) > kSupportCut) kept.push_back(static_cast<int>(i));
    if (kept.empty()) kept.push_back(static_cast<int>(eig.eigenvalues.size()) - 1);
    const int r = static_cast<int>(kept.size());

    if (r == 1) return canonical_pure_cse(eig.eigenvectors.col(kept[0]), g.layout);

    SubsystemLayout ext = six_factor_layout(da, db, r);
    ext.validate();
    const long de = ext.dim();

    // Psi = sum_i sqrt(l_i) psi_i_{a1 b1} |0>_{a1p} |i>_{a2p} |0>_{b1p} |i>_{b2p}
    Vec big = Vec::Zero(de);
    std::vector<SchmidtForm> frames(r);
    SubsystemLayout bip = bipartite_layout(da, db);
    for (int k = 0; k < r; ++k) {
        const double lam = eig.eigenvalues(kept[k]);
        Vec psi_k = eig.eigenvectors.col(kept[k]);
        frames[k] = schmidt(psi_k, bip);
        for (int ia = 0; ia < da; ++ia)
            for (int ib = 0; ib < db; ++ib) {
                long idx = ((((static_cast<long>(ia) * db + 0) * r + k) * db + ib) * da + 0) * r + k;
                big(idx) += std::sqrt(lam) * psi_k(static_cast<long>(ia) * db + ib);
            }
    }
    big /= big.norm();

    // witness |x^i_j, 0, i> -> |0, y^i_j, i> on (a1, a1p, a2p)
    const long dA = static_cast<long>(da) * db * r;
    std::vector<Vec> src, tgt;
    Vec e0a = basis_vector(da, 0), e0b = basis_vector(db, 0);
    for (int k = 0; k < r; ++k) {
        const auto& sf = frames[k];
        for (long j = 0; j < sf.coefficients.size(); ++j) {
            if (sf.coefficients(j) <= kSupportCut) continue;
            Vec ek = basis_vector(r, k);
            Vec s = kern::tensor(kern::tensor(Mat(sf.left_vectors.col(j)), Mat(e0b)),
                                 Mat(ek)).col(0);
            Vec t = kern::tensor(kern::tensor(Mat(e0a), Mat(sf.right_vectors.col(j))),
                                 Mat(ek)).col(0);
            src.push_back(s);
            tgt.push_back(t);
        }
    }
    Mat sources(dA, static_cast<long>(src.size()));
    Mat targets(dA, static_cast<long>(tgt.size()));
    for (size_t c = 0; c < src.size(); ++c) {
        sources.col(c) = src[c];
        targets.col(c) = tgt[c];
    }
    Mat u = unitary_matching(sources, targets);

    CseCandidate out;
    out.state = MultipartiteState{big * big.adjoint(), ext};
    out.witness_a1_b1p = u;
    out.witness_a1p_b1 = u;
    return out;
}

CseCandidate separable_cse(const RVec& weights,
                           const std::vector<std::pair<Vec, Vec>>& members,
                           const SubsystemLayout& layout) {
    const int da = layout.party_dim(Party::A);
    const int db = layout.party_dim(Party::B);
    const int nl = static_cast<int>(members.size());
    if (weights.size() != nl) throw ShapeError("separable_cse: weight/member count mismatch");
    double total = 0.0;

    SubsystemLayout ext = six_factor_layout(da, db, nl);
    ext.validate();
    const long de = ext.dim();
    Mat rho = Mat::Zero(de, de);

    for (int l = 0; l < nl; ++l) {
        if (weights(l) < 0.0) throw DomainError("separable_cse: negative weight");
        total += weights(l);
        const auto& [va, vb] = members[l];
        if (va.size() != da || vb.size() != db)
            throw DomainError("separable_cse: member is not a product vector on the layout");
        if (std::abs(va.norm() - 1.0) > 1e-8 || std::abs(vb.norm() - 1.0) > 1e-8)
            throw DomainError("separable_cse: member vectors must be normalized");
        Vec el = basis_vector(nl, l);
        Vec aside = kern::tensor(kern::tensor(Mat(va), Mat(vb)), Mat(el)).col(0);
        Vec bside = kern::tensor(kern::tensor(Mat(vb), Mat(va)), Mat(el)).col(0);
        Vec full = kern::tensor(Mat(aside), Mat(bside)).col(0);
        rho += weights(l) * full * full.adjoint();
    }
    if (std::abs(total - 1.0) > 1e-12)
        throw DomainError("separable_cse: weights do not sum to one");

    CseCandidate out;
    out.state = MultipartiteState{std::move(rho), ext};
    out.witness_a1_b1p = Mat::Identity(static_cast<long>(da) * db * nl,
                                       static_cast<long>(da) * db * nl);
    out.witness_a1p_b1 = out.witness_a1_b1p;
    return out;
}

CseCandidate flagged_mixture_cse(const std::vector<CseCandidate>& parts, const RVec& probs) {
    const int kParts = static_cast<int>(parts.size());
    if (kParts == 0) throw DomainError("flagged_mixture_cse: no parts");
    if (probs.size() != kParts)
        throw ShapeError("flagged_mixture_cse: probability count mismatch");

    const auto& ref = parts[0].state.layout;
    for (const auto& p : parts) {
        const auto& l = p.state.layout;
        if (l.size() != ref.size()) throw ShapeError("flagged_mixture_cse: layout mismatch");
        for (int i = 0; i < l.size(); ++i)
            if (l.factors[i].label != ref.factors[i].label ||
                l.factors[i].dim != ref.factors[i].dim)
                throw ShapeError("flagged_mixture_cse: layout mismatch");
    }

    const int da = ref.factors[ref.position("a1")].dim;
    const int db = ref.factors[ref.position("b1")].dim;
    const int dap = ref.factors[ref.position("a1p")].dim;
    const int dbp = ref.factors[ref.position("b1p")].dim;
    const int f = ref.has("a2p") ? ref.factors[ref.position("a2p")].dim : 1;

    const long dA_old = static_cast<long>(da) * dap * f;
    const long dB_old = static_cast<long>(db) * dbp * f;
    const long dA_new = dA_old * kParts;
    const long dB_new = dB_old * kParts;
    if (dA_new * dB_new > kMaxTotalDim)
        throw DomainError("flagged_mixture_cse: extension exceeds the dimension cap");

    SubsystemLayout ext = six_factor_layout(da, db, 1);
    ext.factors[ext.position("a1p")].dim = dap;
    ext.factors[ext.position("b1p")].dim = dbp;
    ext.factors[ext.position("a2p")].dim = f * kParts;
    ext.factors[ext.position("b2p")].dim = f * kParts;

    // part index r decomposes as rA * dB_old + rB; the new flag digit rides
    // as the fastest digit of each side's merged flag factor
    Mat rho = Mat::Zero(dA_new * dB_new, dA_new * dB_new);
    Mat w1 = Mat::Zero(dA_new, dA_new);
    Mat w2 = Mat::Zero(dA_new, dA_new);
    double total = 0.0;
    for (int i = 0; i < kParts; ++i) {
        if (probs(i) < 0.0) throw DomainError("flagged_mixture_cse: negative probability");
        total += probs(i);
        const Mat& part = parts[i].state.rho;
        for (long r = 0; r < part.rows(); ++r) {
            const long rA = r / dB_old, rB = r % dB_old;
            const long nr = (rA * kParts + i) * dB_new + rB * kParts + i;
            for (long c = 0; c < part.cols(); ++c) {
                if (part(r, c) == cxd(0.0, 0.0)) continue;
                const long cA = c / dB_old, cB = c % dB_old;
                const long nc = (cA * kParts + i) * dB_new + cB * kParts + i;
                rho(nr, nc) += probs(i) * part(r, c);
            }
        }
        for (long r = 0; r < dA_old; ++r)
            for (long c = 0; c < dA_old; ++c) {
                w1(r * kParts + i, c * kParts + i) = parts[i].witness_a1_b1p(r, c);
                w2(r * kParts + i, c * kParts + i) = parts[i].witness_a1p_b1(r, c);
            }
    }
    if (std::abs(total - 1.0) > 1e-12)
        throw DomainError("flagged_mixture_cse: probabilities do not sum to one");

    CseCandidate out;
    out.state = MultipartiteState{std::move(rho), ext};
    out.witness_a1_b1p = std::move(w1);
    out.witness_a1p_b1 = std::move(w2);
    return out;
}

CseVerifyReport verify_cse(const CseCandidate& candidate, const MultipartiteState& original,
                           double tol) {
    const auto& layout = candidate.state.layout;
    for (const char* need : {"a1", "a1p", "b1", "b1p"})
        if (!layout.has(need))
            throw LabelError(std::string("verify_cse: candidate lacks factor '") + need + "'");

    std::vector<std::string> discard;
    for (const auto& fct : layout.factors)
        if (fct.label != candidate.original_a && fct.label != candidate.original_b)
            discard.push_back(fct.label);

    MultipartiteState marginal = partial_trace(candidate.state, discard);
    MultipartiteState orig_grouped = group_parties(original).state;
    CseVerifyReport rep;
    if (marginal.rho.rows() != orig_grouped.rho.rows())
        throw ShapeError("verify_cse: original dimensions do not match the candidate marginal");
    rep.marginal_residual = max_abs(marginal.rho - orig_grouped.rho);

    auto a_positions = layout.party_positions(Party::A);
    auto dims = layout.dims();
    auto swap_residual = [&](const Mat& witness, const std::string& x, const std::string& y) {
        Mat w = kern::embed(witness, dims, a_positions);
        Mat conj = w * candidate.state.rho * w.adjoint();
        Mat s = swap_unitary(layout, x, y);
        return max_abs(s * conj * s.adjoint() - conj);
    };
    rep.swap_residual_1 = swap_residual(candidate.witness_a1_b1p, "a1", "b1p");
    rep.swap_residual_2 = swap_residual(candidate.witness_a1p_b1, "a1p", "b1");
    rep.pass = rep.marginal_residual <= tol && rep.swap_residual_1 <= tol &&
               rep.swap_residual_2 <= tol;
    return rep;
}

} // namespace csent
