#include "csent/ent.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/SVD>

#include "csent/errors.hpp"
#include "csent/kernels.hpp"
#include "csent/linalg.hpp"
#include "csent/optim.hpp"

namespace csent {

namespace {

constexpr double kSupportCut = 1e-12;

struct Bipartite {
    MultipartiteState grouped;
    int da = 0, db = 0;
};

Bipartite as_bipartite(const MultipartiteState& s) {
    Bipartite b;
    b.grouped = group_parties(s).state;
    b.da = b.grouped.layout.party_dim(Party::A);
    b.db = b.grouped.layout.party_dim(Party::B);
    return b;
}

Mat reshape_to_matrix(const Vec& psi, int da, int db) {
    Mat m(da, db);
    for (int i = 0; i < da; ++i)
        for (int j = 0; j < db; ++j) m(i, j) = psi(static_cast<long>(i) * db + j);
    return m;
}

double largest_singular_value(const Mat& m) {
    Eigen::JacobiSVD<Mat> svd(m);
    return svd.singularValues()(0);
}

RVec softmax(const RVec& t) {
    RVec w = t;
    double mx = w.maxCoeff();
    for (long i = 0; i < w.size(); ++i) w(i) = std::exp(w(i) - mx);
    return w / w.sum();
}

Vec unit_vector_from(const RVec& x, long offset, int d) {
    Vec v(d);
    for (int i = 0; i < d; ++i) v(i) = cxd(x(offset + 2 * i), x(offset + 2 * i + 1));
    double n = v.norm();
    if (n < 1e-12) return basis_vector(d, 0);
    return v / n;
}

int default_restarts(const EntOpts& opts) {
    if (opts.restarts > 0) return opts.restarts;
    return opts.fast ? 8 : 16;
}

int default_iters(const EntOpts& opts, int dflt) {
    if (opts.max_iters > 0) return opts.max_iters;
    return opts.fast ? std::max(20, dflt / 2) : dflt;
}

struct SpectralData {
    std::vector<int> kept;
    RVec eigenvalues;
    Mat eigenvectors;
    int rank = 0;
};

SpectralData spectral(const Mat& rho) {
    SpectralData sd;
    auto eig = hermitian_eig(rho);
    sd.eigenvalues = eig.eigenvalues;
    sd.eigenvectors = eig.eigenvectors;
    for (long i = 0; i < eig.eigenvalues.size(); ++i)
        if (eig.eigenvalues(i) > kSupportCut) sd.kept.push_back(static_cast<int>(i));
    if (sd.kept.empty()) sd.kept.push_back(static_cast<int>(eig.eigenvalues.size()) - 1);
    sd.rank = static_cast<int>(sd.kept.size());
    return sd;
}

// columns sqrt(lambda_i) |psi_i> over the support
Mat amplitude_matrix(const SpectralData& sd) {
    Mat amp(sd.eigenvectors.rows(), sd.rank);
    for (int k = 0; k < sd.rank; ++k)
        amp.col(k) = std::sqrt(std::max(0.0, sd.eigenvalues(sd.kept[k]))) *
                     sd.eigenvectors.col(sd.kept[k]);
    return amp;
}

} // namespace

double pure_bures_entanglement(const Vec& psi, const SubsystemLayout& layout) {
    SchmidtForm sf = schmidt(psi, layout);
    return std::max(0.0, 2.0 - 2.0 * sf.coefficients(0));
}

double pure_bures_entanglement(const MultipartiteState& s) {
    if (!is_pure(s)) throw DomainError("pure_bures_entanglement: state is not pure");
    return pure_bures_entanglement(pure_vector(s), s.layout);
}

// ---------------------------------------------------------------------------
// separable-set minimization

EntReport bures_entanglement(const MultipartiteState& s, const EntOpts& opts) {
    Bipartite bp = as_bipartite(s);
    const int da = bp.da, db = bp.db;
    const long d = bp.grouped.rho.rows();
    // Caratheodory count (da*db)^2, capped to keep the parameter space sane
    // on flag-extended states
    int k = opts.k > 0 ? opts.k : std::min(static_cast<int>(d) * static_cast<int>(d), 24);
    if (opts.fast && opts.k == 0) k = std::max(4, k / 2);
    const long per_term = 1 + 2 * da + 2 * db;
    const long nparams = k * per_term;

    auto factors_from = [&](const RVec& x) {
        RVec logits(k);
        for (int l = 0; l < k; ++l) logits(l) = x(l * per_term);
        RVec w = softmax(logits);
        Mat c(d, k);
        for (int l = 0; l < k; ++l) {
            Vec va = unit_vector_from(x, l * per_term + 1, da);
            Vec vb = unit_vector_from(x, l * per_term + 1 + 2 * da, db);
            const double sw = std::sqrt(w(l));
            for (int i = 0; i < da; ++i)
                for (int j = 0; j < db; ++j)
                    c(static_cast<long>(i) * db + j, l) = sw * va(i) * vb(j);
        }
        return c;
    };

    const Mat& rho = bp.grouped.rho;
    const Mat sqrt_rho = hermitian_sqrt(rho);
    // F(rho, C C^dag) is the nuclear norm of sqrt(rho) C
    auto objective = [&](const RVec& x) {
        Eigen::JacobiSVD<Mat> svd(sqrt_rho * factors_from(x));
        double f = std::min(svd.singularValues().sum(), 1.0);
        return std::max(0.0, 2.0 - 2.0 * f);
    };

    // restart 0 seeds the ansatz with the eigen-ensemble's closest products
    SpectralData sd = spectral(rho);
    SubsystemLayout bip = bipartite_layout(da, db);
    RVec seed0 = RVec::Zero(nparams);
    for (int l = 0; l < k; ++l) {
        const int src = sd.kept[l % sd.rank];
        SchmidtForm sf = schmidt(sd.eigenvectors.col(src), bip);
        seed0(l * per_term) = std::log(std::max(sd.eigenvalues(src), 1e-6));
        Rng jitter = Rng(opts.seed).substream(900000 + l);
        for (int i = 0; i < da; ++i) {
            cxd amp = sf.left_vectors(i, 0) + 0.05 * cxd(jitter.normal(), jitter.normal());
            seed0(l * per_term + 1 + 2 * i) = amp.real();
            seed0(l * per_term + 2 + 2 * i) = amp.imag();
        }
        for (int i = 0; i < db; ++i) {
            cxd amp = sf.right_vectors(i, 0) + 0.05 * cxd(jitter.normal(), jitter.normal());
            seed0(l * per_term + 1 + 2 * da + 2 * i) = amp.real();
            seed0(l * per_term + 2 + 2 * da + 2 * i) = amp.imag();
        }
    }

    auto starts = [&, seed0](int r) {
        if (r == 0) return seed0;
        Rng rng = Rng(opts.seed).substream(static_cast<std::uint64_t>(r));
        RVec x(nparams);
        for (long i = 0; i < nparams; ++i) x(i) = rng.normal();
        return x;
    };

    BfgsOptions bopts;
    bopts.max_iters = default_iters(opts, 150);
    const int restarts = default_restarts(opts);
    auto ms = multistart_minimize(objective, starts, restarts, bopts);

    EntReport rep;
    rep.value = std::max(0.0, ms.best_f);
    rep.bound_direction = BoundDirection::UpperBound;
    rep.restarts = restarts;
    rep.converged_fraction = ms.converged_fraction;
    rep.certificate = ms.best_x;
    rep.ansatz = "separable";
    rep.terminal_values = ms.terminal_values;
    return rep;
}

// ---------------------------------------------------------------------------
// convex roof

namespace {

struct RoofContext {
    Mat amp;  // d x r amplitude matrix
    int da = 0, db = 0, r = 0, m = 0;
};

// members phi_j with weights p_j from the mixing-unitary coordinates
struct RoofEnsemble {
    RVec weights;
    std::vector<Vec> unnormalized;
};

RoofEnsemble roof_ensemble(const RoofContext& ctx, const RVec& theta) {
    Mat w = exp_i_hermitian(hermitian_from_params(theta, ctx.m)).leftCols(ctx.r);
    RoofEnsemble out;
    out.weights = RVec::Zero(ctx.m);
    out.unnormalized.resize(ctx.m);
    for (int j = 0; j < ctx.m; ++j) {
        Vec phi = ctx.amp * w.row(j).adjoint();
        out.weights(j) = phi.squaredNorm();
        out.unnormalized[j] = std::move(phi);
    }
    return out;
}

} // namespace

EntReport convex_roof_bures(const MultipartiteState& s, const EntOpts& opts) {
    Bipartite bp = as_bipartite(s);
    SpectralData sd = spectral(bp.grouped.rho);

    if (sd.rank == 1) {
        EntReport rep;
        rep.value = pure_bures_entanglement(sd.eigenvectors.col(sd.kept[0]),
                                            bipartite_layout(bp.da, bp.db));
        rep.bound_direction = BoundDirection::Exact;
        rep.restarts = 0;
        rep.converged_fraction = 1.0;
        rep.ansatz = "roof";
        return rep;
    }

    RoofContext ctx;
    ctx.amp = amplitude_matrix(sd);
    ctx.da = bp.da;
    ctx.db = bp.db;
    ctx.r = sd.rank;
    ctx.m = opts.m > 0 ? opts.m : std::min(sd.rank * sd.rank, 16);
    if (ctx.m < ctx.r) throw DomainError("convex_roof_bures: ensemble size below rank");
    const long nparams = static_cast<long>(ctx.m) * ctx.m;

    auto objective = [&ctx](const RVec& theta) {
        RoofEnsemble ens = roof_ensemble(ctx, theta);
        double acc = 0.0;
        for (int j = 0; j < ctx.m; ++j) {
            if (ens.weights(j) < 1e-15) continue;
            double smax = largest_singular_value(
                reshape_to_matrix(ens.unnormalized[j], ctx.da, ctx.db));
            acc += std::sqrt(ens.weights(j)) * smax;
        }
        return std::max(0.0, 2.0 - 2.0 * std::min(acc, 1.0));
    };

    auto starts = [&](int r) {
        if (r == 0) return RVec(RVec::Zero(nparams));
        Rng rng = Rng(opts.seed).substream(static_cast<std::uint64_t>(r));
        RVec x(nparams);
        for (long i = 0; i < nparams; ++i) x(i) = 0.7 * rng.normal();
        return x;
    };

    BfgsOptions bopts;
    bopts.max_iters = default_iters(opts, 150);
    const int restarts = default_restarts(opts);
    auto ms = multistart_minimize(objective, starts, restarts, bopts);

    EntReport rep;
    rep.value = std::max(0.0, ms.best_f);
    rep.bound_direction = BoundDirection::UpperBound;
    rep.restarts = restarts;
    rep.converged_fraction = ms.converged_fraction;
    rep.certificate = ms.best_x;
    rep.ansatz = "roof";
    rep.terminal_values = ms.terminal_values;
    return rep;
}

// ---------------------------------------------------------------------------
// restricted-family CSE discord minimization

namespace {

// Schmidt data of one ensemble member needed by the block-level candidates.
struct MemberFrame {
    double weight = 0.0;
    Vec normalized;
    SchmidtForm schmidt_form;
};

std::vector<MemberFrame> member_frames(const RoofContext& ctx, const RoofEnsemble& ens) {
    std::vector<MemberFrame> frames;
    SubsystemLayout bip = bipartite_layout(ctx.da, ctx.db);
    for (int j = 0; j < ctx.m; ++j) {
        MemberFrame f;
        f.weight = ens.weights(j);
        if (f.weight < 1e-15) continue;
        f.normalized = ens.unnormalized[j] / std::sqrt(f.weight);
        f.schmidt_form = schmidt(f.normalized, bip);
        frames.push_back(std::move(f));
    }
    return frames;
}

// Blockwise value of the flagged extension against the flagged CC candidate.
// Bures: flag weights q_j ~ p_j F_j^2 give F = sqrt(sum p_j F_j^2).
// HS: q = p is optimal because the block candidate satisfies tr(Phi sigma) =
// tr(sigma^2), leaving d^2 = sum p_j^2 (1 - sum_k mu_k^2).
double blockwise_value(DistanceKind kind, const std::vector<MemberFrame>& frames) {
    if (kind == DistanceKind::BuresSquared) {
        double acc = 0.0;
        for (const auto& f : frames) {
            double fj = f.schmidt_form.coefficients(0);
            acc += f.weight * fj * fj;
        }
        return std::max(0.0, 2.0 - 2.0 * std::sqrt(std::min(acc, 1.0)));
    }
    double acc = 0.0;
    for (const auto& f : frames) {
        double purity_block = f.schmidt_form.coefficients.array().square().square().sum();
        acc += f.weight * f.weight * std::max(0.0, 1.0 - purity_block);
    }
    return std::sqrt(acc);
}

// Per-block CC candidate on the four-factor extension layout of the part.
Mat block_cc_candidate(DistanceKind kind, const MemberFrame& f, int da, int db) {
    const long dext = static_cast<long>(da) * db * db * da;
    Mat sigma = Mat::Zero(dext, dext);
    const auto& sf = f.schmidt_form;
    const int terms = kind == DistanceKind::BuresSquared
                          ? 1
                          : static_cast<int>(sf.coefficients.size());
    for (int t = 0; t < terms; ++t) {
        double w = kind == DistanceKind::BuresSquared ? 1.0
                                                      : sf.coefficients(t) * sf.coefficients(t);
        if (w < 1e-15) continue;
        Vec v = Vec::Zero(dext);
        for (int ia = 0; ia < da; ++ia)
            for (int ib = 0; ib < db; ++ib) {
                long idx = ((static_cast<long>(ia) * db + 0) * db + ib) * da + 0;
                v(idx) = sf.left_vectors(ia, t) * sf.right_vectors(ib, t);
            }
        sigma += w * v * v.adjoint();
    }
    return sigma;
}

// Splice per-part matrices into the flag-merged space used by
// flagged_mixture_cse; dB_old is the B-side dimension of one part.
Mat flag_blocks(const std::vector<Mat>& blocks, const RVec& probs, long dA_old, long dB_old) {
    const int kParts = static_cast<int>(blocks.size());
    const long dA_new = dA_old * kParts;
    const long dB_new = dB_old * kParts;
    Mat out = Mat::Zero(dA_new * dB_new, dA_new * dB_new);
    for (int i = 0; i < kParts; ++i) {
        const Mat& part = blocks[i];
        for (long r = 0; r < part.rows(); ++r) {
            const long rA = r / dB_old, rB = r % dB_old;
            const long nr = (rA * kParts + i) * dB_new + rB * kParts + i;
            for (long c = 0; c < part.cols(); ++c) {
                if (part(r, c) == cxd(0.0, 0.0)) continue;
                const long cA = c / dB_old, cB = c % dB_old;
                const long nc = (cA * kParts + i) * dB_new + cB * kParts + i;
                out(nr, nc) += probs(i) * part(r, c);
            }
        }
    }
    return out;
}

} // namespace

EntReport cse_discord_min(const MultipartiteState& s, DistanceKind kind, const EntOpts& opts,
                          CseCandidate* certificate_out) {
    if (kind != DistanceKind::BuresSquared && kind != DistanceKind::HilbertSchmidt)
        throw DomainError("cse_discord_min: only BuresSquared and HilbertSchmidt accepted");

    Bipartite bp = as_bipartite(s);
    const int da = bp.da, db = bp.db;
    SpectralData sd = spectral(bp.grouped.rho);
    SubsystemLayout bip = bipartite_layout(da, db);

    // pure states: the extension is psi x |00> and the block candidate is the
    // Schmidt-frame classically correlated state
    if (sd.rank == 1 || is_pure(bp.grouped, 1e-10)) {
        Vec psi = sd.eigenvectors.col(sd.kept[sd.rank - 1]);
        CseCandidate ext = canonical_pure_cse(psi, bip);
        MemberFrame f;
        f.weight = 1.0;
        f.normalized = psi;
        f.schmidt_form = schmidt(psi, bip);
        Mat sigma = block_cc_candidate(kind, f, da, db);
        double value = kind == DistanceKind::BuresSquared
                           ? bures_sq(ext.state.rho, sigma)
                           : hs_distance(ext.state.rho, sigma);

        auto ver = verify_cse(ext, bp.grouped, 1e-9);
        EntReport rep;
        rep.value = std::max(0.0, value);
        rep.bound_direction = BoundDirection::UpperBound;
        rep.restarts = 0;
        rep.converged_fraction = 1.0;
        rep.ansatz = "cse-pure";
        rep.certificate_residual = std::max({ver.marginal_residual, ver.swap_residual_1,
                                             ver.swap_residual_2});
        if (certificate_out) *certificate_out = std::move(ext);
        return rep;
    }

    RoofContext ctx;
    ctx.amp = amplitude_matrix(sd);
    ctx.da = da;
    ctx.db = db;
    ctx.r = sd.rank;
    const long part_dim = static_cast<long>(da) * db * db * da;
    int m_cap = 1;
    while (part_dim * static_cast<long>(m_cap + 1) * (m_cap + 1) <= kMaxTotalDim) ++m_cap;
    ctx.m = opts.m > 0 ? opts.m : std::max(sd.rank, std::min(4, m_cap));
    if (ctx.m < ctx.r)
        throw DomainError("cse_discord_min: ensemble size below rank");
    if (part_dim * static_cast<long>(ctx.m) * ctx.m > kMaxTotalDim)
        throw DomainError("cse_discord_min: extension would exceed the dimension cap of " +
                          std::to_string(kMaxTotalDim));
    const long nparams = static_cast<long>(ctx.m) * ctx.m;

    auto objective = [&ctx, kind](const RVec& theta) {
        RoofEnsemble ens = roof_ensemble(ctx, theta);
        return blockwise_value(kind, member_frames(ctx, ens));
    };

    auto starts = [&](int r) {
        if (r == 0) return RVec(RVec::Zero(nparams));
        Rng rng = Rng(opts.seed).substream(static_cast<std::uint64_t>(r));
        RVec x(nparams);
        for (long i = 0; i < nparams; ++i) x(i) = 0.7 * rng.normal();
        return x;
    };

    BfgsOptions bopts;
    bopts.max_iters = default_iters(opts, 120);
    const int restarts = default_restarts(opts);
    auto ms = multistart_minimize(objective, starts, restarts, bopts);

    // construct the best extension and evaluate the distance on the full
    // matrices
    RoofEnsemble ens = roof_ensemble(ctx, ms.best_x);
    auto frames = member_frames(ctx, ens);
    std::vector<CseCandidate> parts;
    std::vector<Mat> sigma_blocks;
    RVec probs(static_cast<long>(frames.size()));
    RVec flag_weights(static_cast<long>(frames.size()));
    double total = 0.0;
    for (size_t j = 0; j < frames.size(); ++j) total += frames[j].weight;
    double fid_total = 0.0;
    if (kind == DistanceKind::BuresSquared) {
        for (const auto& f : frames) {
            double fj = f.schmidt_form.coefficients(0);
            fid_total += (f.weight / total) * fj * fj;
        }
    }
    for (size_t j = 0; j < frames.size(); ++j) {
        parts.push_back(canonical_pure_cse(frames[j].normalized, bip));
        sigma_blocks.push_back(block_cc_candidate(kind, frames[j], da, db));
        probs(static_cast<long>(j)) = frames[j].weight / total;
        if (kind == DistanceKind::BuresSquared) {
            double fj = frames[j].schmidt_form.coefficients(0);
            flag_weights(static_cast<long>(j)) = probs(static_cast<long>(j)) * fj * fj /
                                                 std::max(fid_total, 1e-300);
        } else {
            flag_weights(static_cast<long>(j)) = probs(static_cast<long>(j));
        }
    }

    CseCandidate ext = parts.size() == 1 ? parts[0] : flagged_mixture_cse(parts, probs);
    double value_full;
    if (parts.size() == 1) {
        value_full = kind == DistanceKind::BuresSquared
                         ? bures_sq(ext.state.rho, sigma_blocks[0])
                         : hs_distance(ext.state.rho, sigma_blocks[0]);
    } else {
        const long dA_old = static_cast<long>(da) * db;
        const long dB_old = dA_old;
        Mat sigma = flag_blocks(sigma_blocks, flag_weights, dA_old, dB_old);
        value_full = kind == DistanceKind::BuresSquared ? bures_sq(ext.state.rho, sigma)
                                                        : hs_distance(ext.state.rho, sigma);
    }

    auto ver = verify_cse(ext, bp.grouped, 1e-9);
    EntReport rep;
    rep.value = std::max(0.0, std::min(ms.best_f, value_full));
    rep.bound_direction = BoundDirection::UpperBound;
    rep.restarts = restarts;
    rep.converged_fraction = ms.converged_fraction;
    rep.certificate = ms.best_x;
    rep.ansatz = "cse-flagged";
    rep.certificate_residual = std::max({ver.marginal_residual, ver.swap_residual_1,
                                         ver.swap_residual_2});
    rep.terminal_values = ms.terminal_values;
    if (certificate_out) *certificate_out = std::move(ext);
    return rep;
}

// ---------------------------------------------------------------------------
// theorem harnesses

Theorem2Report theorem2_check(const Vec& psi, const SubsystemLayout& layout, DistanceKind kind,
                              const EntOpts& opts, double tol) {
    if (kind != DistanceKind::BuresSquared)
        throw DomainError("theorem2_check: established for the Bures case only");
    MultipartiteState s = state_from_pure(psi, layout);

    Theorem2Report rep;
    rep.tol = tol;
    rep.cse_value = cse_discord_min(s, kind, opts).value;
    DiscordOpts dopts;
    dopts.seed = opts.seed;
    dopts.restarts = opts.restarts;
    rep.direct_discord = geometric_discord(s, kind, dopts).value;
    rep.pure_entanglement = pure_bures_entanglement(psi, layout);
    rep.pass = std::abs(rep.cse_value - rep.direct_discord) <= tol &&
               std::abs(rep.cse_value - rep.pure_entanglement) <= tol &&
               std::abs(rep.direct_discord - rep.pure_entanglement) <= tol;
    return rep;
}

Theorem3Report theorem3_sandwich(const MultipartiteState& s, const EntOpts& opts, double tol,
                                 double gap_tol) {
    Bipartite bp = as_bipartite(s);
    if (bp.da > 3 || bp.db > 3)
        throw DomainError("theorem3_sandwich: party dimensions above 3 are out of scope");

    Theorem3Report rep;
    rep.tol = tol;
    rep.gap_tol = gap_tol;
    rep.lower = bures_entanglement(s, opts).value;
    rep.upper = convex_roof_bures(s, opts).value;
    rep.cse_value = cse_discord_min(s, DistanceKind::BuresSquared, opts).value;
    rep.max_gap = rep.upper - rep.lower;
    rep.pass = rep.lower - tol <= rep.cse_value && rep.cse_value <= rep.upper + tol &&
               rep.max_gap <= gap_tol;
    return rep;
}

} // namespace csent
