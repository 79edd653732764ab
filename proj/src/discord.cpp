#include "csent/discord.hpp"

#include <cmath>

#include <Eigen/SVD>

#include "csent/errors.hpp"
#include "csent/kernels.hpp"
#include "csent/linalg.hpp"
#include "csent/optim.hpp"

namespace csent {

namespace {

void require_optimizable(DistanceKind kind, const char* who) {
    if (kind != DistanceKind::BuresSquared && kind != DistanceKind::HilbertSchmidt)
        throw DomainError(std::string(who) + ": only BuresSquared and HilbertSchmidt accepted");
}

std::vector<int> inverse_order(const std::vector<int>& order) {
    std::vector<int> inv(order.size());
    for (size_t k = 0; k < order.size(); ++k) inv[order[k]] = static_cast<int>(k);
    return inv;
}

struct InnerBures {
    RVec q;
    double fidelity = 0.0;
    int iters = 0;
    bool converged = false;
};

// Maximize F(q) = || N diag(sqrt(q)) ||_* over the probability simplex by
// alternating the dual maximizers: W = U V^dag from the SVD at fixed q, then
// the closed-form simplex optimum q_k ~ max(0, Re(W^dag N)_kk)^2 at fixed W.
// Both half-steps are exact, so F ascends monotonically; this avoids the
// 1/sqrt(q) gradient blow-up of plain projected ascent at vertex optima.
InnerBures closest_cc_bures_inner(const Mat& n, double tol, int max_iters) {
    const long d = n.cols();
    InnerBures res;
    res.q = RVec::Constant(d, 1.0 / static_cast<double>(d));
    double prev = -1.0;
    int flat = 0;
    for (res.iters = 0; res.iters < max_iters; ++res.iters) {
        Mat a = n;
        for (long k = 0; k < d; ++k) a.col(k) *= std::sqrt(std::max(0.0, res.q(k)));
        Eigen::JacobiSVD<Mat> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
        res.fidelity = svd.singularValues().sum();

        Mat wn = svd.matrixV() * (svd.matrixU().adjoint() * n);
        RVec c(d);
        double csum = 0.0;
        for (long k = 0; k < d; ++k) {
            c(k) = std::max(0.0, wn(k, k).real());
            csum += c(k) * c(k);
        }
        if (csum <= 0.0) break;
        res.q = c.cwiseProduct(c) / csum;

        if (std::abs(res.fidelity - prev) <= tol * 1e-4) {
            if (++flat >= 3) {
                res.converged = true;
                break;
            }
        } else {
            flat = 0;
        }
        prev = res.fidelity;
    }
    Mat a = n;
    for (long k = 0; k < d; ++k) a.col(k) *= std::sqrt(std::max(0.0, res.q(k)));
    Eigen::JacobiSVD<Mat> svd(a);
    res.fidelity = svd.singularValues().sum();
    return res;
}

} // namespace

LocalBasisPair realize_basis_pair(const RVec& params_a, const RVec& params_b, int da, int db) {
    LocalBasisPair out;
    out.params_a = params_a;
    out.params_b = params_b;
    out.realized_a = exp_i_hermitian(hermitian_from_params(params_a, da));
    out.realized_b = exp_i_hermitian(hermitian_from_params(params_b, db));
    return out;
}

MultipartiteState cc_to_state(const CcState& cc) {
    return make_cc(cc.bases.realized_a, cc.bases.realized_b, cc.probs);
}

MultipartiteState dephase(const MultipartiteState& s, const Mat& basis_a, const Mat& basis_b) {
    auto grouped = group_parties(s);
    const int da = grouped.state.layout.party_dim(Party::A);
    const int db = grouped.state.layout.party_dim(Party::B);
    if (basis_a.rows() != da || basis_b.rows() != db)
        throw ShapeError("dephase: basis dimensions do not match party dimensions");

    Mat b = kern::tensor(basis_a, basis_b);
    Mat rot = b.adjoint() * grouped.state.rho * b;
    Mat diag = Mat::Zero(rot.rows(), rot.cols());
    for (long i = 0; i < rot.rows(); ++i) diag(i, i) = rot(i, i).real();
    Mat out_grouped = b * diag * b.adjoint();

    Mat back = kern::permute_factors(out_grouped, grouped.state.layout.dims(),
                                     inverse_order(grouped.order));
    return MultipartiteState{std::move(back), s.layout};
}

std::pair<RMat, double> closest_cc_fixed_bases(const MultipartiteState& s, const Mat& basis_a,
                                               const Mat& basis_b, DistanceKind kind,
                                               double tol) {
    require_optimizable(kind, "closest_cc_fixed_bases");
    auto grouped = group_parties(s);
    const int da = grouped.state.layout.party_dim(Party::A);
    const int db = grouped.state.layout.party_dim(Party::B);
    const long d = static_cast<long>(da) * db;
    Mat b = kern::tensor(basis_a, basis_b);

    if (kind == DistanceKind::HilbertSchmidt) {
        Mat rot = b.adjoint() * grouped.state.rho * b;
        RMat probs(da, db);
        double off = 0.0;
        for (long i = 0; i < d; ++i)
            for (long j = 0; j < d; ++j) {
                if (i == j) continue;
                off += std::norm(rot(i, j));
            }
        double diag_dev = 0.0;
        for (int i = 0; i < da; ++i)
            for (int j = 0; j < db; ++j) {
                double p = rot(static_cast<long>(i) * db + j, static_cast<long>(i) * db + j).real();
                probs(i, j) = std::max(0.0, p);
                diag_dev += (p - probs(i, j)) * (p - probs(i, j));
            }
        return {probs, std::sqrt(std::max(0.0, off + diag_dev))};
    }

    // Bures: maximize fidelity over the simplex. sv(A^dag B D) matches
    // sv(sqrt(rho) B D) for any factor rho = A A^dag.
    Mat n = psd_support_factor(grouped.state.rho).adjoint() * b;
    auto res = closest_cc_bures_inner(n, tol, 5000);

    RMat probs(da, db);
    for (int i = 0; i < da; ++i)
        for (int j = 0; j < db; ++j) probs(i, j) = res.q(static_cast<long>(i) * db + j);
    return {probs, std::max(0.0, 2.0 - 2.0 * std::min(res.fidelity, 1.0))};
}

namespace {

struct OuterSetup {
    MultipartiteState grouped;
    int da = 0, db = 0;
    long na = 0, nb = 0;  // parameter counts
};

OuterSetup outer_setup(const MultipartiteState& s) {
    OuterSetup st;
    st.grouped = group_parties(s).state;
    st.da = st.grouped.layout.party_dim(Party::A);
    st.db = st.grouped.layout.party_dim(Party::B);
    st.na = static_cast<long>(st.da) * st.da;
    st.nb = static_cast<long>(st.db) * st.db;
    return st;
}

int default_restarts(const OuterSetup& st, int requested) {
    if (requested > 0) return requested;
    return (st.da == 2 && st.db == 2) ? 16 : 48;
}

std::function<RVec(int)> make_starts(const OuterSetup& st, std::uint64_t seed) {
    // restart 0: computational bases; restart 1: marginal eigenbases;
    // others: random generator coordinates.
    Mat rho_a = kern::partial_trace(st.grouped.rho, st.grouped.layout.dims(),
                                    st.grouped.layout.party_positions(Party::B));
    Mat rho_b = kern::partial_trace(st.grouped.rho, st.grouped.layout.dims(),
                                    st.grouped.layout.party_positions(Party::A));
    RVec eig_start(st.na + st.nb);
    eig_start.head(st.na) = params_from_unitary(hermitian_eig(rho_a).eigenvectors);
    eig_start.tail(st.nb) = params_from_unitary(hermitian_eig(rho_b).eigenvectors);

    const long total = st.na + st.nb;
    return [total, eig_start, seed](int r) {
        if (r == 0) return RVec(RVec::Zero(total));
        if (r == 1) return eig_start;
        Rng rng = Rng(seed).substream(static_cast<std::uint64_t>(r));
        RVec x(total);
        for (long i = 0; i < total; ++i) x(i) = rng.normal();
        return x;
    };
}

DiscordReport run_outer(const OuterSetup& st, const Objective& objective,
                        const DiscordOpts& opts) {
    const int restarts = default_restarts(st, opts.restarts);
    BfgsOptions bopts;
    bopts.max_iters = opts.outer_iters;
    bopts.grad_tol = 1e-7;
    auto ms = multistart_minimize(objective, make_starts(st, opts.seed), restarts, bopts);

    DiscordReport rep;
    rep.value = std::max(0.0, ms.best_f);
    rep.restarts = restarts;
    rep.converged_fraction = ms.converged_fraction;
    rep.terminal_values = ms.terminal_values;
    rep.argmin_bases = realize_basis_pair(ms.best_x.head(st.na), ms.best_x.tail(st.nb),
                                          st.da, st.db);
    return rep;
}

} // namespace

DiscordReport geometric_discord(const MultipartiteState& s, DistanceKind kind,
                                const DiscordOpts& opts) {
    require_optimizable(kind, "geometric_discord");
    OuterSetup st = outer_setup(s);

    Mat factor;
    double tr_rho_sq = 0.0;
    if (kind == DistanceKind::BuresSquared) factor = psd_support_factor(st.grouped.rho).adjoint();
    else tr_rho_sq = purity(st.grouped.rho);

    const long d = st.grouped.rho.rows();
    auto objective = [&, kind](const RVec& x) {
        Mat ua = exp_i_hermitian(hermitian_from_params(x.head(st.na), st.da));
        Mat ub = exp_i_hermitian(hermitian_from_params(x.tail(st.nb), st.db));
        Mat b = kern::tensor(ua, ub);
        if (kind == DistanceKind::HilbertSchmidt) {
            Mat rot = b.adjoint() * st.grouped.rho * b;
            double sum_diag_sq = 0.0;
            for (long i = 0; i < d; ++i) sum_diag_sq += std::norm(rot(i, i));
            return std::sqrt(std::max(0.0, tr_rho_sq - sum_diag_sq));
        }
        Mat n = factor * b;
        auto inner = closest_cc_bures_inner(n, opts.tol, 800);
        return std::max(0.0, 2.0 - 2.0 * std::min(inner.fidelity, 1.0));
    };

    DiscordReport rep = run_outer(st, objective, opts);
    auto [probs, value] = closest_cc_fixed_bases(st.grouped, rep.argmin_bases.realized_a,
                                                 rep.argmin_bases.realized_b, kind, opts.tol);
    rep.argmin_probs = probs;
    rep.value = std::min(rep.value, std::max(0.0, value));
    return rep;
}

DiscordReport mid(const MultipartiteState& s, DistanceKind kind, const DiscordOpts& opts) {
    require_optimizable(kind, "mid");
    OuterSetup st = outer_setup(s);

    double tr_rho_sq = purity(st.grouped.rho);
    const long d = st.grouped.rho.rows();
    auto objective = [&, kind](const RVec& x) {
        Mat ua = exp_i_hermitian(hermitian_from_params(x.head(st.na), st.da));
        Mat ub = exp_i_hermitian(hermitian_from_params(x.tail(st.nb), st.db));
        Mat b = kern::tensor(ua, ub);
        Mat rot = b.adjoint() * st.grouped.rho * b;
        if (kind == DistanceKind::HilbertSchmidt) {
            double sum_diag_sq = 0.0;
            for (long i = 0; i < d; ++i) sum_diag_sq += std::norm(rot(i, i));
            return std::sqrt(std::max(0.0, tr_rho_sq - sum_diag_sq));
        }
        Mat diag = Mat::Zero(d, d);
        for (long i = 0; i < d; ++i) diag(i, i) = std::max(0.0, rot(i, i).real());
        // d(rho, Pi(rho)) is basis-invariant, evaluate in the rotated frame
        return bures_sq(rot, diag);
    };

    return run_outer(st, objective, opts);
}

} // namespace csent
