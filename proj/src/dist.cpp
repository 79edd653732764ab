#include "csent/dist.hpp"

#include <cmath>
#include <limits>

#include <Eigen/QR>

#include "csent/errors.hpp"
#include "csent/kernels.hpp"
#include "csent/linalg.hpp"

namespace csent {

std::string to_string(DistanceKind k) {
    switch (k) {
        case DistanceKind::BuresSquared: return "bures-squared";
        case DistanceKind::HilbertSchmidt: return "hilbert-schmidt";
        case DistanceKind::Trace: return "trace";
        case DistanceKind::RelativeEntropy: return "relative-entropy";
    }
    return "?";
}

namespace {

void check_same_shape(const Mat& a, const Mat& b, const char* who) {
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw ShapeError(std::string(who) + ": dimension mismatch");
}

double nuclear_norm(const Mat& m) {
    if (m.rows() == 0 || m.cols() == 0) return 0.0;
    Eigen::JacobiSVD<Mat> svd(m);
    return svd.singularValues().sum();
}

} // namespace

// Eigenvalues below the relative cut are treated as exact zeros, which keeps
// tr sqrt(...) clear of sqrt(eps) noise on rank-deficient states.
Mat psd_support_factor(const Mat& m, double rel_cut) {
    auto eig = hermitian_eig(m);
    const double cut = rel_cut * std::max(1.0, eig.eigenvalues.cwiseAbs().maxCoeff());
    std::vector<int> kept;
    for (long i = 0; i < eig.eigenvalues.size(); ++i) {
        if (eig.eigenvalues(i) < -1e-10)
            throw NotPsdError("fidelity: eigenvalue " + std::to_string(eig.eigenvalues(i)) +
                              " below -1e-10");
        if (eig.eigenvalues(i) > cut) kept.push_back(static_cast<int>(i));
    }
    Mat a(m.rows(), static_cast<long>(kept.size()));
    for (size_t k = 0; k < kept.size(); ++k)
        a.col(static_cast<long>(k)) =
            std::sqrt(eig.eigenvalues(kept[k])) * eig.eigenvectors.col(kept[k]);
    return a;
}

double fidelity(const Mat& rho, const Mat& sigma) {
    check_same_shape(rho, sigma, "fidelity");
    // tr sqrt(sqrt(sigma) rho sqrt(sigma)) = || A^dag B ||_* for any factors
    // rho = A A^dag, sigma = B B^dag
    Mat a = psd_support_factor(rho);
    Mat b = psd_support_factor(sigma);
    return std::min(nuclear_norm(a.adjoint() * b), 1.0);
}

double fidelity(const MultipartiteState& rho, const MultipartiteState& sigma) {
    return fidelity(rho.rho, sigma.rho);
}

double fidelity_factors(const Mat& rho, const Mat& c) {
    if (c.rows() != rho.rows()) throw ShapeError("fidelity_factors: dimension mismatch");
    return std::min(nuclear_norm(psd_support_factor(rho).adjoint() * c), 1.0);
}

double bures_sq(const Mat& rho, const Mat& sigma) {
    return std::max(0.0, 2.0 - 2.0 * fidelity(rho, sigma));
}

double bures_sq(const MultipartiteState& rho, const MultipartiteState& sigma) {
    return bures_sq(rho.rho, sigma.rho);
}

double hs_distance(const Mat& rho, const Mat& sigma) {
    check_same_shape(rho, sigma, "hs_distance");
    return (rho - sigma).norm();
}

double hs_distance(const MultipartiteState& rho, const MultipartiteState& sigma) {
    return hs_distance(rho.rho, sigma.rho);
}

double trace_distance(const Mat& rho, const Mat& sigma) {
    check_same_shape(rho, sigma, "trace_distance");
    auto eig = hermitian_eig(rho - sigma);
    return 0.5 * eig.eigenvalues.cwiseAbs().sum();
}

double relative_entropy(const Mat& rho, const Mat& sigma) {
    check_same_shape(rho, sigma, "relative_entropy");
    auto er = hermitian_eig(rho);
    auto es = hermitian_eig(sigma);
    const double cut = 1e-12;

    // support check: rho eigenvectors must lie in the sigma support
    for (long i = 0; i < er.eigenvalues.size(); ++i) {
        if (er.eigenvalues(i) <= cut) continue;
        double outside = 0.0;
        for (long j = 0; j < es.eigenvalues.size(); ++j) {
            if (es.eigenvalues(j) > cut) continue;
            outside += std::norm((es.eigenvectors.col(j).adjoint() * er.eigenvectors.col(i))(0));
        }
        if (outside * er.eigenvalues(i) > 1e-10)
            return std::numeric_limits<double>::infinity();
    }

    double s = 0.0;
    for (long i = 0; i < er.eigenvalues.size(); ++i) {
        double l = er.eigenvalues(i);
        if (l > cut) s += l * std::log(l);
    }
    for (long i = 0; i < er.eigenvalues.size(); ++i) {
        double l = std::max(0.0, er.eigenvalues(i));
        if (l <= cut) continue;
        for (long j = 0; j < es.eigenvalues.size(); ++j) {
            double q = es.eigenvalues(j);
            if (q <= cut) continue;
            double w = std::norm((es.eigenvectors.col(j).adjoint() * er.eigenvectors.col(i))(0));
            s -= l * w * std::log(q);
        }
    }
    return std::max(0.0, s);
}

double distance(DistanceKind kind, const Mat& rho, const Mat& sigma) {
    switch (kind) {
        case DistanceKind::BuresSquared: return bures_sq(rho, sigma);
        case DistanceKind::HilbertSchmidt: return hs_distance(rho, sigma);
        case DistanceKind::Trace: return trace_distance(rho, sigma);
        case DistanceKind::RelativeEntropy: return relative_entropy(rho, sigma);
    }
    throw DomainError("distance: unknown kind");
}

AncillaInvarianceReport pure_ancilla_invariance_check(DistanceKind kind, const Mat& rho,
                                                      const Mat& sigma, int trials,
                                                      std::uint64_t seed) {
    AncillaInvarianceReport rep;
    rep.trials = std::max(1, trials);
    Mat anc = Mat::Zero(2, 2);
    anc(0, 0) = 1.0;
    Rng rng(seed);
    const int d = static_cast<int>(rho.rows());
    for (int t = 0; t < rep.trials; ++t) {
        Mat a = t == 0 ? rho : random_density(d, d, rng);
        Mat b = t == 0 ? sigma : random_density(d, d, rng);
        double plain = distance(kind, a, b);
        double extended = distance(kind, kern::tensor(a, anc), kern::tensor(b, anc));
        rep.max_deviation = std::max(rep.max_deviation, std::abs(plain - extended));
    }
    rep.pass = rep.max_deviation <= 1e-10;
    return rep;
}

std::vector<Mat> random_kraus(int d, int k, Rng& rng) {
    Mat g = ginibre(rng, d * k, d);
    Eigen::HouseholderQR<Mat> qr(g);
    Mat q = qr.householderQ();
    Mat iso = q.leftCols(d);  // isometry C^d -> C^(dk)
    std::vector<Mat> kraus(k);
    for (int i = 0; i < k; ++i) kraus[i] = iso.middleRows(static_cast<long>(i) * d, d);
    return kraus;
}

Mat apply_kraus(const std::vector<Mat>& kraus, const Mat& rho) {
    Mat out = Mat::Zero(kraus[0].rows(), kraus[0].rows());
    for (const auto& k : kraus) out += k * rho * k.adjoint();
    return out;
}

HsWitness hs_noncontractivity_witness(int ancilla_dim) {
    const int d = ancilla_dim;
    HsWitness w;
    w.channel_description =
        "partial trace over a maximally mixed factor of dimension " + std::to_string(d);

    Mat p0 = Mat::Zero(2, 2), p1 = Mat::Zero(2, 2);
    p0(0, 0) = 1.0;
    p1(1, 1) = 1.0;
    Mat mixed = Mat::Identity(d, d) / static_cast<double>(d);

    SubsystemLayout layout{{Factor{"a1", 2, Party::A}, Factor{"b1", d, Party::B}}};
    w.rho = MultipartiteState{kern::tensor(p0, mixed), layout};
    w.sigma = MultipartiteState{kern::tensor(p1, mixed), layout};
    w.rho_after = partial_trace(w.rho, {"b1"});
    w.sigma_after = partial_trace(w.sigma, {"b1"});

    w.before = hs_distance(w.rho, w.sigma);
    w.after = hs_distance(w.rho_after, w.sigma_after);
    w.bures_before = bures_sq(w.rho, w.sigma);
    w.bures_after = bures_sq(w.rho_after, w.sigma_after);
    return w;
}

} // namespace csent
