#include <cmath>

#include <doctest.h>

#include "csent/cse.hpp"
#include "csent/discord.hpp"
#include "csent/errors.hpp"
#include "csent/kernels.hpp"
#include "csent/linalg.hpp"
#include "csent/rng.hpp"
#include "csent/verify_suites.hpp"

using namespace csent;

namespace {
const SubsystemLayout kTwoQubits = bipartite_layout(2, 2);
}

TEST_CASE("canonical pure cse on a product state") {
    Vec v01 = Vec::Zero(4);
    v01(1) = 1.0;
    auto cand = canonical_pure_cse(v01, kTwoQubits);

    // extension is |01> x |00> on the ancillas
    CHECK(cand.state.layout.size() == 4);
    CHECK(std::abs(purity(cand.state.rho) - 1.0) < 1e-10);
    auto rep = verify_cse(cand, state_from_pure(v01, kTwoQubits), 1e-9);
    CHECK(rep.pass);
    CHECK(rep.swap_residual_1 <= 1e-9);
    CHECK(rep.swap_residual_2 <= 1e-9);

    // product input gives an extension with vanishing discord
    DiscordOpts opts;
    opts.seed = 2;
    opts.restarts = 4;
    opts.outer_iters = 40;
    CHECK(geometric_discord(cand.state, DistanceKind::BuresSquared, opts).value <= 1e-6);
}

TEST_CASE("canonical pure cse on the Bell state") {
    auto cand = canonical_pure_cse(bell_phi_plus(), kTwoQubits);
    auto rep = verify_cse(cand, state_from_pure(bell_phi_plus(), kTwoQubits), 1e-9);
    CHECK(rep.pass);
    CHECK(rep.marginal_residual <= 1e-10);
}

TEST_CASE("canonical mixed cse") {
    // maximally mixed 2x2: flags of dimension 4
    MultipartiteState mm{0.25 * Mat::Identity(4, 4), kTwoQubits};
    auto cand = canonical_mixed_cse(mm);
    CHECK(cand.state.layout.has("a2p"));
    CHECK(cand.state.layout.factors[cand.state.layout.position("a2p")].dim == 4);
    auto rep = verify_cse(cand, mm, 1e-9);
    CHECK(rep.pass);
    CHECK(std::abs(purity(cand.state.rho) - 1.0) < 1e-10);

    // pure input reduces to the pure constructor's four-factor form
    auto pure_cand = canonical_mixed_cse(state_from_pure(bell_phi_plus(), kTwoQubits));
    CHECK(pure_cand.state.layout.size() == 4);

    // Werner marginal recovery
    auto w = werner(0.5);
    auto candw = canonical_mixed_cse(w);
    auto repw = verify_cse(candw, w, 1e-9);
    CHECK(repw.pass);
    CHECK(repw.marginal_residual <= 1e-10);
}

TEST_CASE("separable cse") {
    // (|00><00| + |11><11|)/2
    RVec w(2);
    w << 0.5, 0.5;
    std::vector<std::pair<Vec, Vec>> members;
    members.emplace_back(basis_vector(2, 0), basis_vector(2, 0));
    members.emplace_back(basis_vector(2, 1), basis_vector(2, 1));
    auto sep = make_separable(w, members, kTwoQubits);
    auto cand = separable_cse(w, members, kTwoQubits);
    auto rep = verify_cse(cand, sep, 1e-9);
    CHECK(rep.pass);

    // flagged product extension is classically correlated
    DiscordOpts opts;
    opts.seed = 5;
    opts.restarts = 3;
    opts.outer_iters = 30;
    CHECK(geometric_discord(cand.state, DistanceKind::BuresSquared, opts).value <= 1e-6);

    // single product member
    RVec w1(1);
    w1 << 1.0;
    std::vector<std::pair<Vec, Vec>> single;
    single.emplace_back(basis_vector(2, 0), basis_vector(2, 1));
    auto cand1 = separable_cse(w1, single, kTwoQubits);
    CHECK(verify_cse(cand1, make_separable(w1, single, kTwoQubits), 1e-9).pass);
    CHECK(geometric_discord(cand1.state, DistanceKind::BuresSquared, opts).value <= 1e-6);

    // three-term random ensemble: marginal recovery
    Rng rng(9);
    RVec w3(3);
    w3 << 0.2, 0.5, 0.3;
    std::vector<std::pair<Vec, Vec>> m3;
    for (int i = 0; i < 3; ++i) m3.emplace_back(random_pure(2, rng), random_pure(2, rng));
    auto cand3 = separable_cse(w3, m3, kTwoQubits);
    auto rep3 = verify_cse(cand3, make_separable(w3, m3, kTwoQubits), 1e-9);
    CHECK(rep3.marginal_residual <= 1e-10);
    CHECK(rep3.pass);
}

TEST_CASE("flagged mixture cse") {
    Vec psi0 = Vec::Zero(4);
    psi0(0) = 1.0;  // |00>
    auto part_a = canonical_pure_cse(psi0, kTwoQubits);
    auto part_b = canonical_pure_cse(bell_phi_plus(), kTwoQubits);

    RVec probs(2);
    probs << 0.5, 0.5;
    auto mix = flagged_mixture_cse({part_a, part_b}, probs);
    Mat target = 0.5 * psi0 * psi0.adjoint() + 0.5 * bell_phi_plus() * bell_phi_plus().adjoint();
    auto rep = verify_cse(mix, make_state(target, kTwoQubits, false), 1e-9);
    CHECK(rep.pass);

    // single part with probability one stays equivalent to the part
    RVec one(1);
    one << 1.0;
    auto single = flagged_mixture_cse({part_b}, one);
    auto reps = verify_cse(single, state_from_pure(bell_phi_plus(), kTwoQubits), 1e-9);
    CHECK(reps.pass);

    // marginal additivity over three random parts
    Rng rng(10);
    std::vector<CseCandidate> parts;
    std::vector<Vec> vecs;
    for (int i = 0; i < 3; ++i) {
        vecs.push_back(random_pure(4, rng));
        parts.push_back(canonical_pure_cse(vecs.back(), kTwoQubits));
    }
    RVec p3(3);
    p3 << 0.2, 0.3, 0.5;
    auto mix3 = flagged_mixture_cse(parts, p3);
    Mat expect = Mat::Zero(4, 4);
    for (int i = 0; i < 3; ++i) expect += p3(i) * vecs[i] * vecs[i].adjoint();
    auto rep3 = verify_cse(mix3, make_state(expect, kTwoQubits, false), 1e-9);
    CHECK(rep3.marginal_residual <= 1e-10);

    // separable parts keep the A|B cut PPT
    std::vector<std::pair<Vec, Vec>> m1, m2;
    m1.emplace_back(random_pure(2, rng), random_pure(2, rng));
    m2.emplace_back(random_pure(2, rng), random_pure(2, rng));
    RVec w1(1);
    w1 << 1.0;
    auto sep_mix = flagged_mixture_cse(
        {separable_cse(w1, m1, kTwoQubits), separable_cse(w1, m2, kTwoQubits)}, probs);
    CHECK(is_ppt(sep_mix.state, 1e-10).ppt);
}

TEST_CASE("verify_cse negative controls") {
    Rng rng(11);
    auto cand = canonical_pure_cse(bell_phi_plus(), kTwoQubits);
    MultipartiteState bell = state_from_pure(bell_phi_plus(), kTwoQubits);

    // corrupted witness: fail reported, not thrown
    CseCandidate bad = cand;
    bad.witness_a1_b1p = random_unitary(4, rng);
    auto rep = verify_cse(bad, bell, 1e-9);
    CHECK_FALSE(rep.pass);
    CHECK(rep.swap_residual_1 > 0.1);

    // perturbed marginal shows up at the right scale
    MultipartiteState off = bell;
    Mat bump = Mat::Zero(4, 4);
    bump(0, 0) = 1e-3;
    bump(3, 3) = -1e-3;
    off.rho += bump;
    auto rep2 = verify_cse(cand, off, 1e-9);
    CHECK(rep2.marginal_residual == doctest::Approx(1e-3).epsilon(1e-6));
    CHECK_FALSE(rep2.pass);

    // missing labels throw
    CseCandidate broken = cand;
    broken.state.layout.factors[1].label = "zz";
    CHECK_THROWS_AS(verify_cse(broken, bell, 1e-9), LabelError);
}

TEST_CASE("swap residual is stable under degenerate-frame rotations") {
    // the maximally mixed state has a fully degenerate spectrum; the witness
    // built from any deterministic frame must still verify
    MultipartiteState mm{0.25 * Mat::Identity(4, 4), kTwoQubits};
    auto cand = canonical_mixed_cse(mm);
    auto rep = verify_cse(cand, mm, 1e-9);
    CHECK(rep.pass);

    // rotating the state by a local unitary and rebuilding keeps residuals
    Rng rng(12);
    Mat u = kern::tensor(random_unitary(2, rng), random_unitary(2, rng));
    MultipartiteState rotated{u * mm.rho * u.adjoint(), kTwoQubits};
    auto cand2 = canonical_mixed_cse(rotated);
    CHECK(verify_cse(cand2, rotated, 1e-9).pass);
}

TEST_CASE("cse suite at reduced scale") {
    auto res = suite_cse(12, 321);
    for (const auto& c : res.checks) {
        INFO(c.name, " worst ", c.worst);
        CHECK(c.pass);
    }
}
