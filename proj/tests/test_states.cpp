#include <cmath>

#include <doctest.h>

#include "csent/errors.hpp"
#include "csent/kernels.hpp"
#include "csent/linalg.hpp"
#include "csent/rng.hpp"
#include "csent/state.hpp"

#include "oracles.hpp"

using namespace csent;

namespace {
const SubsystemLayout kTwoQubits = bipartite_layout(2, 2);
}

TEST_CASE("schmidt decomposition anchors") {
    auto sf = schmidt(bell_phi_plus(), kTwoQubits);
    CHECK(sf.coefficients(0) == doctest::Approx(M_SQRT1_2).epsilon(1e-12));
    CHECK(sf.coefficients(1) == doctest::Approx(M_SQRT1_2).epsilon(1e-12));

    Vec v01 = Vec::Zero(4);
    v01(1) = 1.0;
    auto sp = schmidt(v01, kTwoQubits);
    CHECK(sp.coefficients(0) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(sp.coefficients(1) == doctest::Approx(0.0).epsilon(1e-12));

    double theta = M_PI / 6.0;
    Vec partial = Vec::Zero(4);
    partial(0) = std::cos(theta);
    partial(3) = std::sin(theta);
    auto sp2 = schmidt(partial, kTwoQubits);
    CHECK(sp2.coefficients(0) == doctest::Approx(std::cos(theta)).epsilon(1e-12));
    CHECK(sp2.coefficients(1) == doctest::Approx(std::sin(theta)).epsilon(1e-12));

    Vec unnorm = 2.0 * bell_phi_plus();
    CHECK_THROWS_AS(schmidt(unnorm, kTwoQubits), NormalizationError);
}

TEST_CASE("schmidt reconstruction and local-unitary invariance") {
    Rng rng(31);
    for (int t = 0; t < 20; ++t) {
        Vec psi = random_pure(4, rng);
        auto sf = schmidt(psi, kTwoQubits);
        // squares sum to one, descending order
        CHECK(sf.coefficients.squaredNorm() == doctest::Approx(1.0).epsilon(1e-10));
        CHECK(sf.coefficients(0) >= sf.coefficients(1));
        // reconstruction
        Vec rebuilt = Vec::Zero(4);
        for (int j = 0; j < sf.coefficients.size(); ++j)
            rebuilt += sf.coefficients(j) *
                       kern::tensor(Mat(sf.left_vectors.col(j)), Mat(sf.right_vectors.col(j)))
                           .col(0);
        CHECK((rebuilt - psi).norm() < 1e-10);

        Mat ua = random_unitary(2, rng), ub = random_unitary(2, rng);
        Vec rotated = kern::tensor(ua, ub) * psi;
        auto sf2 = schmidt(rotated, kTwoQubits);
        CHECK((sf.coefficients - sf2.coefficients).cwiseAbs().maxCoeff() < 1e-10);
    }
}

TEST_CASE("ppt criterion") {
    MultipartiteState bell = state_from_pure(bell_phi_plus(), kTwoQubits);
    auto rep = is_ppt(bell);
    CHECK_FALSE(rep.ppt);
    CHECK(rep.min_eigenvalue == doctest::Approx(-0.5).epsilon(1e-12));

    Rng rng(17);
    Mat ra = random_density(2, 2, rng), rb = random_density(2, 2, rng);
    MultipartiteState prod{kern::tensor(ra, rb), kTwoQubits};
    CHECK(is_ppt(prod).ppt);

    for (double p : {0.1, 1.0 / 3.0, 0.5, 0.9}) {
        auto w = werner(p);
        auto r = is_ppt(w);
        CHECK(r.min_eigenvalue == doctest::Approx((1.0 - 3.0 * p) / 4.0).epsilon(1e-10));
        CHECK(r.ppt == (p <= 1.0 / 3.0 + 1e-12));
    }
}

TEST_CASE("concurrence anchors") {
    CHECK(concurrence_2q(state_from_pure(bell_phi_plus(), kTwoQubits)) ==
          doctest::Approx(1.0).epsilon(1e-10));

    Vec v01 = Vec::Zero(4);
    v01(1) = 1.0;
    CHECK(concurrence_2q(state_from_pure(v01, kTwoQubits)) == doctest::Approx(0.0));

    CHECK(concurrence_2q(werner(2.0 / 3.0)) == doctest::Approx(0.5).epsilon(1e-10));
    CHECK(concurrence_2q(werner(0.2)) == doctest::Approx(0.0));
}

TEST_CASE("ppt and concurrence agree on two qubits") {
    for (int t = 0; t < 500; ++t) {
        Rng rng = Rng(5000).substream(t);
        MultipartiteState s{random_density(4, 1 + t % 4, rng), kTwoQubits};
        bool entangled_by_c = concurrence_2q(s) > 1e-9;
        bool entangled_by_ppt = !is_ppt(s, 1e-11).ppt;
        CHECK(entangled_by_c == entangled_by_ppt);
    }
}

TEST_CASE("make_cc and dephasing fixed point") {
    Rng rng(77);
    RMat probs(2, 2);
    probs << 0.5, 0.0, 0.0, 0.5;
    auto cc = make_cc(Mat::Identity(2, 2), Mat::Identity(2, 2), probs);
    Mat expected = Mat::Zero(4, 4);
    expected(0, 0) = 0.5;
    expected(3, 3) = 0.5;
    CHECK(max_abs(cc.rho - expected) < 1e-14);

    RMat neg(2, 2);
    neg << 0.5, 0.5, 0.2, -0.2;
    CHECK_THROWS_AS(make_cc(Mat::Identity(2, 2), Mat::Identity(2, 2), neg), DomainError);

    // separable construction is PPT
    RVec w(3);
    w << 0.3, 0.3, 0.4;
    std::vector<std::pair<Vec, Vec>> members;
    for (int i = 0; i < 3; ++i) members.emplace_back(random_pure(2, rng), random_pure(2, rng));
    auto sep = make_separable(w, members, kTwoQubits);
    CHECK(is_ppt(sep).ppt);
}

TEST_CASE("purify recovers the marginal") {
    // pure input: trivial ancilla
    MultipartiteState bell = state_from_pure(bell_phi_plus(), kTwoQubits);
    auto p = purify(bell);
    CHECK(p.rank == 1);

    // maximally mixed qubit: ancilla of dim 2, marginal check
    MultipartiteState mixed{0.5 * Mat::Identity(2, 2),
                            SubsystemLayout{{Factor{"a1", 2, Party::A}}}};
    auto pm = purify(mixed);
    CHECK(pm.rank == 2);
    MultipartiteState big = state_from_pure(pm.psi, pm.layout);
    CHECK(max_abs(partial_trace(big, {pm.ancilla_label}).rho - mixed.rho) < 1e-10);

    Rng rng(99);
    MultipartiteState r3{random_density(4, 3, rng), kTwoQubits};
    auto p3 = purify(r3);
    CHECK(p3.rank == 3);
    MultipartiteState big3 = state_from_pure(p3.psi, p3.layout);
    CHECK(max_abs(partial_trace(big3, {p3.ancilla_label}).rho - r3.rho) < 1e-10);
}

TEST_CASE("ensembles from isometries reconstruct the state") {
    Rng rng(123);
    MultipartiteState s{random_density(4, 2, rng), kTwoQubits};
    Mat mix = random_unitary(4, rng).leftCols(2);
    auto ens = ensemble_from_isometry(s, mix);
    CHECK(ens.weights.sum() == doctest::Approx(1.0).epsilon(1e-10));
    Mat rebuilt = Mat::Zero(4, 4);
    for (int j = 0; j < 4; ++j)
        rebuilt += ens.weights(j) * ens.states[j] * ens.states[j].adjoint();
    CHECK(max_abs(rebuilt - s.rho) < 1e-10);
}

TEST_CASE("grouping keeps party content") {
    SubsystemLayout interleaved{{Factor{"b1", 2, Party::B}, Factor{"a1", 2, Party::A}}};
    Rng rng(6);
    Mat ra = random_density(2, 2, rng), rb = random_density(2, 2, rng);
    MultipartiteState s{kern::tensor(rb, ra), interleaved};
    auto g = group_parties(s);
    CHECK(g.state.layout.factors[0].label == "a1");
    CHECK(max_abs(g.state.rho - kern::tensor(ra, rb)) < 1e-13);
}

TEST_CASE("validation catches broken inputs") {
    Mat bad = Mat::Identity(4, 4);  // trace 4
    CHECK_THROWS_AS(make_state(bad, kTwoQubits), ValidationError);

    Mat nonherm = Mat::Zero(4, 4);
    nonherm(0, 1) = 1.0;
    nonherm(0, 0) = 1.0;
    CHECK_THROWS_AS(make_state(nonherm, kTwoQubits), ValidationError);
}
