#include "csent/state.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "csent/errors.hpp"
#include "csent/kernels.hpp"
#include "csent/linalg.hpp"

namespace csent {

void MultipartiteState::validate() const {
    layout.validate();
    if (rho.rows() != rho.cols())
        throw ValidationError("state: matrix not square");
    if (rho.rows() != layout.dim())
        throw ValidationError("state: matrix dimension does not match layout product");
    if (max_abs(rho - rho.adjoint()) > 1e-10)
        throw ValidationError("state: hermiticity violated beyond 1e-10");
    if (std::abs(rho.trace().real() - 1.0) > 1e-12 || std::abs(rho.trace().imag()) > 1e-12)
        throw ValidationError("state: trace differs from one beyond 1e-12");
    auto eig = hermitian_eig(rho);
    if (eig.eigenvalues(0) < -1e-10)
        throw ValidationError("state: PSD violated, min eigenvalue " +
                              std::to_string(eig.eigenvalues(0)));
}

MultipartiteState make_state(Mat rho, SubsystemLayout layout, bool validate) {
    MultipartiteState s{std::move(rho), std::move(layout)};
    if (validate) s.validate();
    return s;
}

MultipartiteState state_from_pure(const Vec& psi, SubsystemLayout layout) {
    if (psi.size() != layout.dim())
        throw ShapeError("state_from_pure: vector does not match layout");
    if (std::abs(psi.norm() - 1.0) > 1e-8)
        throw NormalizationError("state_from_pure: vector not normalized");
    return MultipartiteState{psi * psi.adjoint(), std::move(layout)};
}

MultipartiteState partial_trace(const MultipartiteState& s,
                                const std::vector<std::string>& discard) {
    auto positions = s.layout.positions(discard);
    Mat reduced = kern::partial_trace(s.rho, s.layout.dims(), positions);
    return MultipartiteState{std::move(reduced), s.layout.erased(discard)};
}

Mat swap_unitary(const SubsystemLayout& layout, const std::string& x, const std::string& y) {
    int px = layout.position(x);
    int py = layout.position(y);
    if (layout.factors[px].dim != layout.factors[py].dim)
        throw ShapeError("swap_unitary: factor dimensions differ");
    std::vector<int> order(layout.size());
    std::iota(order.begin(), order.end(), 0);
    std::swap(order[px], order[py]);
    return kern::permutation_unitary(layout.dims(), order);
}

MultipartiteState tensor(const MultipartiteState& a, const MultipartiteState& b) {
    SubsystemLayout layout = a.layout;
    for (const auto& f : b.layout.factors) layout.factors.push_back(f);
    layout.validate();
    return MultipartiteState{kern::tensor(a.rho, b.rho), std::move(layout)};
}

GroupedState group_parties(const MultipartiteState& s) {
    std::vector<int> order = s.layout.party_positions(Party::A);
    for (int p : s.layout.party_positions(Party::B)) order.push_back(p);
    if (s.layout.is_grouped())
        return GroupedState{s, order};
    Mat rho = kern::permute_factors(s.rho, s.layout.dims(), order);
    return GroupedState{MultipartiteState{std::move(rho), s.layout.reordered(order)}, order};
}

Vec permute_vector(const Vec& psi, const std::vector<int>& dims, const std::vector<int>& order) {
    auto map = kern::permutation_map(dims, order);
    Vec out(psi.size());
    for (long i = 0; i < psi.size(); ++i) out(map[i]) = psi(i);
    return out;
}

SchmidtForm schmidt(const Vec& psi, const SubsystemLayout& layout) {
    if (psi.size() != layout.dim())
        throw ShapeError("schmidt: vector does not match layout");
    if (std::abs(psi.norm() - 1.0) > 1e-8)
        throw NormalizationError("schmidt: vector not normalized");

    std::vector<int> order = layout.party_positions(Party::A);
    auto bpos = layout.party_positions(Party::B);
    order.insert(order.end(), bpos.begin(), bpos.end());
    Vec grouped = permute_vector(psi, layout.dims(), order);

    const int da = layout.party_dim(Party::A);
    const int db = layout.party_dim(Party::B);
    Mat m(da, db);
    for (int i = 0; i < da; ++i)
        for (int j = 0; j < db; ++j) m(i, j) = grouped(static_cast<long>(i) * db + j);

    Eigen::JacobiSVD<Mat> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
    SchmidtForm out;
    out.coefficients = svd.singularValues();
    out.left_vectors = svd.matrixU();
    out.right_vectors = svd.matrixV().conjugate();
    return out;
}

PptReport is_ppt(const MultipartiteState& s, double tol) {
    Mat pt = kern::partial_transpose(s.rho, s.layout.dims(), s.layout.party_positions(Party::B));
    auto eig = hermitian_eig(pt);
    double mn = eig.eigenvalues(0);
    return PptReport{mn >= -tol, mn};
}

double concurrence_2q(const MultipartiteState& s) {
    if (s.layout.party_dim(Party::A) != 2 || s.layout.party_dim(Party::B) != 2)
        throw ShapeError("concurrence_2q: requires a 2x2 layout");
    MultipartiteState g = group_parties(s).state;
    Mat sy(2, 2);
    sy << 0.0, cxd(0, -1), cxd(0, 1), 0.0;
    Mat yy = kern::tensor(sy, sy);
    Mat rho_tilde = yy * g.rho.conjugate() * yy;
    Eigen::ComplexEigenSolver<Mat> es(g.rho * rho_tilde);
    std::vector<double> lam;
    for (int i = 0; i < 4; ++i)
        lam.push_back(std::sqrt(std::max(0.0, es.eigenvalues()(i).real())));
    std::sort(lam.begin(), lam.end(), std::greater<double>());
    return std::max(0.0, lam[0] - lam[1] - lam[2] - lam[3]);
}

MultipartiteState make_cc(const Mat& basis_a, const Mat& basis_b, const RMat& probs) {
    const int da = static_cast<int>(basis_a.rows());
    const int db = static_cast<int>(basis_b.rows());
    if (probs.rows() != da || probs.cols() != db)
        throw ShapeError("make_cc: probability table does not match basis dimensions");
    double total = 0.0;
    for (int i = 0; i < da; ++i)
        for (int j = 0; j < db; ++j) {
            if (probs(i, j) < 0.0) throw DomainError("make_cc: negative probability");
            total += probs(i, j);
        }
    if (std::abs(total - 1.0) > 1e-12)
        throw DomainError("make_cc: probabilities do not sum to one");

    Mat rho = Mat::Zero(da * db, da * db);
    for (int i = 0; i < da; ++i)
        for (int j = 0; j < db; ++j) {
            if (probs(i, j) == 0.0) continue;
            Vec v = kern::tensor(basis_a.col(i), basis_b.col(j));
            rho += probs(i, j) * v * v.adjoint();
        }
    return MultipartiteState{std::move(rho), bipartite_layout(da, db)};
}

MultipartiteState make_separable(const RVec& weights,
                                 const std::vector<std::pair<Vec, Vec>>& members,
                                 const SubsystemLayout& layout) {
    if (weights.size() != static_cast<long>(members.size()))
        throw ShapeError("make_separable: weight/member count mismatch");
    double total = 0.0;
    Mat rho = Mat::Zero(layout.dim(), layout.dim());
    for (long l = 0; l < weights.size(); ++l) {
        if (weights(l) < 0.0) throw DomainError("make_separable: negative weight");
        total += weights(l);
        const auto& [va, vb] = members[l];
        if (va.size() != layout.party_dim(Party::A) || vb.size() != layout.party_dim(Party::B))
            throw ShapeError("make_separable: member dimensions do not match layout");
        Vec prod = kern::tensor((va / va.norm()).eval(), (vb / vb.norm()).eval());
        rho += weights(l) * prod * prod.adjoint();
    }
    if (std::abs(total - 1.0) > 1e-12)
        throw DomainError("make_separable: weights do not sum to one");
    return MultipartiteState{std::move(rho), layout};
}

Purification purify(const MultipartiteState& s) {
    auto eig = hermitian_eig(s.rho);
    std::vector<int> kept;
    for (long i = 0; i < eig.eigenvalues.size(); ++i)
        if (eig.eigenvalues(i) > 1e-12) kept.push_back(static_cast<int>(i));
    const int r = std::max<int>(1, static_cast<int>(kept.size()));

    std::string label = "env";
    while (s.layout.has(label)) label += "x";

    Purification out;
    out.layout = s.layout;
    out.layout.factors.push_back(Factor{label, r, Party::B});
    out.ancilla_label = label;
    out.rank = r;

    const long d = s.dim();
    out.psi = Vec::Zero(d * r);
    if (kept.empty()) {
        // numerically zero state; fall back to the largest eigenvector
        kept.push_back(static_cast<int>(eig.eigenvalues.size()) - 1);
    }
    for (int k = 0; k < static_cast<int>(kept.size()); ++k) {
        double lam = std::max(0.0, eig.eigenvalues(kept[k]));
        Vec v = eig.eigenvectors.col(kept[k]);
        for (long i = 0; i < d; ++i) out.psi(i * r + k) += std::sqrt(lam) * v(i);
    }
    out.psi /= out.psi.norm();
    return out;
}

EnsembleDecomposition ensemble_from_isometry(const MultipartiteState& s, const Mat& isometry) {
    auto eig = hermitian_eig(s.rho);
    std::vector<int> kept;
    for (long i = 0; i < eig.eigenvalues.size(); ++i)
        if (eig.eigenvalues(i) > 1e-12) kept.push_back(static_cast<int>(i));
    if (kept.empty()) kept.push_back(static_cast<int>(eig.eigenvalues.size()) - 1);
    const int r = static_cast<int>(kept.size());
    if (isometry.cols() != r)
        throw ShapeError("ensemble_from_isometry: isometry columns must equal rank");
    const int m = static_cast<int>(isometry.rows());
    if (m < r) throw ShapeError("ensemble_from_isometry: need at least rank rows");

    Mat amp(s.dim(), r);  // columns sqrt(lambda_i) |psi_i>
    for (int k = 0; k < r; ++k)
        amp.col(k) = std::sqrt(std::max(0.0, eig.eigenvalues(kept[k]))) *
                     eig.eigenvectors.col(kept[k]);

    EnsembleDecomposition out;
    out.weights = RVec::Zero(m);
    out.states.resize(m);
    for (int j = 0; j < m; ++j) {
        Vec unnorm = amp * isometry.row(j).adjoint();
        double p = unnorm.squaredNorm();
        out.weights(j) = p;
        out.states[j] = p > 1e-15 ? Vec(unnorm / std::sqrt(p)) : Vec(amp.col(0) / amp.col(0).norm());
    }
    return out;
}

bool is_pure(const MultipartiteState& s, double tol) {
    return purity(s.rho) >= 1.0 - tol;
}

Vec pure_vector(const MultipartiteState& s, double tol) {
    if (!is_pure(s, tol)) throw DomainError("pure_vector: state is not pure");
    auto eig = hermitian_eig(s.rho);
    return eig.eigenvectors.col(eig.eigenvalues.size() - 1);
}

namespace {
Vec two_qubit_vec(std::initializer_list<cxd> amps) {
    Vec v(4);
    int i = 0;
    for (cxd a : amps) v(i++) = a;
    return v;
}
} // namespace

Vec bell_phi_plus() { return two_qubit_vec({M_SQRT1_2, 0, 0, M_SQRT1_2}); }
Vec bell_phi_minus() { return two_qubit_vec({M_SQRT1_2, 0, 0, -M_SQRT1_2}); }
Vec bell_psi_plus() { return two_qubit_vec({0, M_SQRT1_2, M_SQRT1_2, 0}); }
Vec bell_psi_minus() { return two_qubit_vec({0, M_SQRT1_2, -M_SQRT1_2, 0}); }

MultipartiteState werner(double p) {
    if (p < 0.0 || p > 1.0) throw DomainError("werner: p outside [0, 1]");
    Vec psi = bell_psi_minus();
    Mat rho = p * psi * psi.adjoint() + (1.0 - p) * 0.25 * Mat::Identity(4, 4);
    return MultipartiteState{std::move(rho), bipartite_layout(2, 2)};
}

MultipartiteState bell_diagonal(const RVec& weights) {
    if (weights.size() != 4) throw ShapeError("bell_diagonal: four weights required");
    std::vector<Vec> bells = {bell_phi_plus(), bell_phi_minus(), bell_psi_plus(),
                              bell_psi_minus()};
    Mat rho = Mat::Zero(4, 4);
    double total = 0.0;
    for (int i = 0; i < 4; ++i) {
        if (weights(i) < 0.0) throw DomainError("bell_diagonal: negative weight");
        total += weights(i);
        rho += weights(i) * bells[i] * bells[i].adjoint();
    }
    if (std::abs(total - 1.0) > 1e-12)
        throw DomainError("bell_diagonal: weights do not sum to one");
    return MultipartiteState{std::move(rho), bipartite_layout(2, 2)};
}

} // namespace csent
