#include <cmath>

#include <doctest.h>

#include "csent/ent.hpp"
#include "csent/errors.hpp"
#include "csent/kernels.hpp"
#include "csent/rng.hpp"
#include "csent/verify_suites.hpp"

#include "oracles.hpp"

using namespace csent;

namespace {
const SubsystemLayout kTwoQubits = bipartite_layout(2, 2);

EntOpts quick_opts(std::uint64_t seed, int restarts = 8, int iters = 100) {
    EntOpts o;
    o.seed = seed;
    o.restarts = restarts;
    o.max_iters = iters;
    return o;
}
} // namespace

TEST_CASE("pure bures entanglement against the product-overlap oracle") {
    // Bell state: overlap oracle confirms max overlap 1/sqrt(2)
    double overlap = oracle::max_product_overlap(bell_phi_plus(), 2, 2);
    CHECK(overlap == doctest::Approx(M_SQRT1_2).epsilon(1e-9));
    CHECK(pure_bures_entanglement(bell_phi_plus(), kTwoQubits) ==
          doctest::Approx(2.0 - M_SQRT2).epsilon(1e-10));

    Vec v10 = Vec::Zero(4);
    v10(2) = 1.0;
    CHECK(pure_bures_entanglement(v10, kTwoQubits) == doctest::Approx(0.0));

    double theta = M_PI / 6.0;
    Vec psi = Vec::Zero(4);
    psi(0) = std::cos(theta);
    psi(3) = std::sin(theta);
    CHECK(oracle::max_product_overlap(psi, 2, 2) ==
          doctest::Approx(std::cos(theta)).epsilon(1e-9));
    CHECK(pure_bures_entanglement(psi, kTwoQubits) ==
          doctest::Approx(2.0 - 2.0 * std::cos(theta)).epsilon(1e-10));

    // the oracle agrees with the Schmidt route on random states
    for (int t = 0; t < 10; ++t) {
        Vec r = random_pure(4, 1000 + t);
        CHECK(oracle::max_product_overlap(r, 2, 2) ==
              doctest::Approx(1.0 - 0.5 * pure_bures_entanglement(r, kTwoQubits))
                  .epsilon(1e-7));
    }

    CHECK_THROWS_AS(pure_bures_entanglement(werner(0.5)), DomainError);
}

TEST_CASE("bures entanglement: separable states sit at zero") {
    auto opts = quick_opts(3);
    for (int t = 0; t < 3; ++t) {
        auto s = random_separable_2q(500 + t);
        auto rep = bures_entanglement(s, opts);
        CHECK(rep.value <= 1e-4);
        CHECK(rep.bound_direction == BoundDirection::UpperBound);
    }
}

TEST_CASE("bures entanglement anchors") {
    auto opts = quick_opts(7, 12, 150);
    MultipartiteState bell = state_from_pure(bell_phi_plus(), kTwoQubits);
    CHECK(bures_entanglement(bell, opts).value ==
          doctest::Approx(2.0 - M_SQRT2).epsilon(5e-3 / (2.0 - M_SQRT2)));

    // Werner p = 0.9 against the concurrence closed form
    double c = concurrence_2q(werner(0.9));
    CHECK(c == doctest::Approx((3.0 * 0.9 - 1.0) / 2.0).epsilon(1e-10));
    double closed = two_qubit_bures_closed_form(c);
    CHECK(bures_entanglement(werner(0.9), opts).value ==
          doctest::Approx(closed).epsilon(1e-2 / closed));
}

TEST_CASE("convex roof bures") {
    auto opts = quick_opts(11, 8, 120);

    // pure input is exact
    MultipartiteState bell = state_from_pure(bell_phi_plus(), kTwoQubits);
    auto rep = convex_roof_bures(bell, opts);
    CHECK(rep.value == doctest::Approx(2.0 - M_SQRT2).epsilon(1e-12));
    CHECK(rep.bound_direction == BoundDirection::Exact);

    // separable mixed states admit product-pure decompositions
    auto sep = random_separable_2q(777);
    CHECK(convex_roof_bures(sep, opts).value <= 1e-4);

    // roof dominates the separable-set value up to optimizer error
    for (int t = 0; t < 3; ++t) {
        auto s = random_two_qubit(900 + t, 2 + t % 3);
        double lower = bures_entanglement(s, opts).value;
        double upper = convex_roof_bures(s, opts).value;
        CHECK(upper >= lower - 1e-3);
    }
}

TEST_CASE("cse discord min on pure states") {
    auto opts = quick_opts(13);

    // Bell state: feasible extension psi x |00> gives 2 - sqrt(2)
    MultipartiteState bell = state_from_pure(bell_phi_plus(), kTwoQubits);
    CseCandidate cert;
    auto rep = cse_discord_min(bell, DistanceKind::BuresSquared, opts, &cert);
    CHECK(rep.value == doctest::Approx(2.0 - M_SQRT2).epsilon(1e-9));
    CHECK(rep.certificate_residual <= 1e-9);
    CHECK(verify_cse(cert, bell, 1e-9).pass);

    // the reported value never exceeds the discord of the psi x |00> point
    DiscordOpts dopts;
    dopts.seed = 4;
    dopts.restarts = 4;
    dopts.outer_iters = 40;
    double direct = geometric_discord(cert.state, DistanceKind::BuresSquared, dopts).value;
    CHECK(rep.value <= direct + 1e-6);

    // HS kind on the Bell state: closed block form sqrt(1 - sum mu^2) = 1/sqrt(2)
    auto rep_hs = cse_discord_min(bell, DistanceKind::HilbertSchmidt, opts);
    CHECK(rep_hs.value == doctest::Approx(M_SQRT1_2).epsilon(1e-9));
}

TEST_CASE("cse discord min on mixed and separable states") {
    auto opts = quick_opts(17, 12, 120);

    // separable feasible point drives the value to zero
    auto sep = random_separable_2q(4242);
    auto rep = cse_discord_min(sep, DistanceKind::BuresSquared, opts);
    CHECK(rep.value <= 1e-4);

    // sandwich on a Werner state
    auto w = werner(0.7);
    CseCandidate cert;
    auto repw = cse_discord_min(w, DistanceKind::BuresSquared, opts, &cert);
    double closed = two_qubit_bures_closed_form(concurrence_2q(w));
    CHECK(repw.value >= closed - 1e-3);
    CHECK(repw.value <= closed + 1e-2);
    CHECK(repw.certificate_residual <= 1e-9);
    CHECK(verify_cse(cert, w, 1e-9).pass);

    // certificate marginal matches the input
    auto marg = partial_trace(cert.state, {"a1p", "a2p", "b1p", "b2p"});
    CHECK(max_abs(marg.rho - w.rho) <= 1e-9);
}

TEST_CASE("cse discord min convexity in the sense of the flag construction") {
    auto opts = quick_opts(29, 10, 100);
    for (int t = 0; t < 2; ++t) {
        auto a = random_two_qubit(3100 + t, 2);
        auto b = random_two_qubit(3200 + t, 2);
        double p = 0.3 + 0.2 * t;
        MultipartiteState mix{p * a.rho + (1 - p) * b.rho, kTwoQubits};
        double lhs = cse_discord_min(mix, DistanceKind::BuresSquared, opts).value;
        double rhs = p * cse_discord_min(a, DistanceKind::BuresSquared, opts).value +
                     (1 - p) * cse_discord_min(b, DistanceKind::BuresSquared, opts).value;
        CHECK(lhs <= rhs + 1e-2);
    }
}

TEST_CASE("theorem 2 on anchor states") {
    auto opts = quick_opts(31, 10, 120);
    auto rep = theorem2_check(bell_phi_plus(), kTwoQubits, DistanceKind::BuresSquared, opts);
    CHECK(rep.pass);
    CHECK(rep.cse_value == doctest::Approx(2.0 - M_SQRT2).epsilon(1e-6));
    CHECK(rep.direct_discord == doctest::Approx(2.0 - M_SQRT2).epsilon(1e-4));
    CHECK(rep.pure_entanglement == doctest::Approx(2.0 - M_SQRT2).epsilon(1e-12));

    Vec v00 = Vec::Zero(4);
    v00(0) = 1.0;
    auto repp = theorem2_check(v00, kTwoQubits, DistanceKind::BuresSquared, opts);
    CHECK(repp.pass);
    CHECK(repp.cse_value <= 1e-4);

    double theta = M_PI / 8.0;
    Vec psi = Vec::Zero(4);
    psi(0) = std::cos(theta);
    psi(3) = std::sin(theta);
    auto rept = theorem2_check(psi, kTwoQubits, DistanceKind::BuresSquared, opts);
    CHECK(rept.pass);
    CHECK(rept.cse_value == doctest::Approx(2.0 - 2.0 * std::cos(theta)).epsilon(5e-3));

    CHECK_THROWS_AS(theorem2_check(psi, kTwoQubits, DistanceKind::HilbertSchmidt, opts),
                    DomainError);
}

TEST_CASE("theorem 3 sandwich on anchor states") {
    auto opts = quick_opts(37, 10, 120);

    auto repw = theorem3_sandwich(werner(0.7), opts);
    CHECK(repw.pass);
    CHECK(repw.max_gap <= 2e-2);

    auto sep = random_separable_2q(555);
    auto reps = theorem3_sandwich(sep, opts);
    CHECK(reps.pass);
    CHECK(reps.lower <= 1e-3);
    CHECK(reps.cse_value <= 1e-3);

    MultipartiteState bell = state_from_pure(bell_phi_plus(), kTwoQubits);
    auto repb = theorem3_sandwich(bell, opts);
    CHECK(repb.pass);
    CHECK(repb.cse_value == doctest::Approx(2.0 - M_SQRT2).epsilon(1e-2));

    MultipartiteState too_big{Mat::Identity(16, 16) / 16.0, bipartite_layout(4, 4)};
    CHECK_THROWS_AS(theorem3_sandwich(too_big, opts), DomainError);
}

TEST_CASE("quantifier determinism at fixed seeds") {
    auto opts = quick_opts(41, 6, 60);
    auto s = random_two_qubit(9999, 3);
    auto a = bures_entanglement(s, opts);
    auto b = bures_entanglement(s, opts);
    CHECK(a.value == b.value);
    auto c1 = cse_discord_min(s, DistanceKind::BuresSquared, opts);
    auto c2 = cse_discord_min(s, DistanceKind::BuresSquared, opts);
    CHECK(c1.value == c2.value);
    for (double tv : c1.terminal_values) CHECK(c1.value <= tv + 1e-12);
}
