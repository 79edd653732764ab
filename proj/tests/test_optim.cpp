#include <cmath>

#include <doctest.h>

#include "csent/optim.hpp"
#include "csent/rng.hpp"

using namespace csent;

TEST_CASE("bfgs minimizes a quadratic") {
    auto f = [](const RVec& x) {
        double acc = 0.0;
        for (long i = 0; i < x.size(); ++i) acc += (i + 1) * (x(i) - i) * (x(i) - i);
        return acc;
    };
    RVec x0 = RVec::Constant(5, 3.0);
    auto res = bfgs_minimize(f, x0, {});
    CHECK(res.converged);
    for (long i = 0; i < 5; ++i) CHECK(res.x(i) == doctest::Approx(double(i)).epsilon(1e-5));
}

TEST_CASE("bfgs handles rosenbrock") {
    auto f = [](const RVec& x) {
        double a = 1.0 - x(0);
        double b = x(1) - x(0) * x(0);
        return a * a + 100.0 * b * b;
    };
    BfgsOptions opts;
    opts.max_iters = 500;
    auto res = bfgs_minimize(f, RVec::Zero(2), opts);
    CHECK(res.f < 1e-8);
}

TEST_CASE("multistart picks the best basin deterministically") {
    auto f = [](const RVec& x) {
        double v = x(0);
        return std::min((v - 1.0) * (v - 1.0), 0.5 + (v + 2.0) * (v + 2.0));
    };
    auto starts = [](int r) {
        RVec x(1);
        x(0) = r % 2 == 0 ? 2.0 : -3.0;
        return x;
    };
    auto a = multistart_minimize(f, starts, 6, {});
    auto b = multistart_minimize(f, starts, 6, {});
    CHECK(a.best_f == b.best_f);
    CHECK(a.best_index == b.best_index);
    CHECK(a.best_f == doctest::Approx(0.0).epsilon(1e-8));
    // reported best never exceeds any terminal value
    for (double tv : a.terminal_values) CHECK(a.best_f <= tv + 1e-15);
}

TEST_CASE("simplex projection") {
    RVec v(3);
    v << 0.2, 0.3, 0.5;
    CHECK((project_simplex(v) - v).norm() < 1e-14);

    RVec w(3);
    w << 2.0, 0.0, 0.0;
    RVec p = project_simplex(w);
    CHECK(p(0) == doctest::Approx(1.0));
    CHECK(p(1) == doctest::Approx(0.0));
    CHECK(p.sum() == doctest::Approx(1.0).epsilon(1e-14));

    Rng rng(9);
    for (int t = 0; t < 50; ++t) {
        RVec r(6);
        for (int i = 0; i < 6; ++i) r(i) = 3.0 * rng.normal();
        RVec q = project_simplex(r);
        CHECK(q.minCoeff() >= -1e-15);
        CHECK(q.sum() == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("projected gradient ascent solves a concave simplex program") {
    // maximize sum_i c_i sqrt(q_i): optimum q_i = c_i^2 / sum c^2
    RVec c(4);
    c << 1.0, 2.0, 3.0, 4.0;
    auto fg = [&c](const RVec& q, RVec* g) {
        double f = 0.0;
        for (int i = 0; i < 4; ++i) {
            double s = std::sqrt(std::max(q(i), 1e-14));
            f += c(i) * s;
            if (g) (*g)(i) = c(i) / (2.0 * s);
        }
        return f;
    };
    auto res = simplex_pga_max(fg, RVec::Constant(4, 0.25));
    double z = c.squaredNorm();
    for (int i = 0; i < 4; ++i) CHECK(res.q(i) == doctest::Approx(c(i) * c(i) / z).epsilon(1e-5));
    CHECK(res.f == doctest::Approx(std::sqrt(z)).epsilon(1e-8));
}
