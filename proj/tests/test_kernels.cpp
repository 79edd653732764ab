#include <doctest.h>

#include "csent/kernels.hpp"
#include "csent/rng.hpp"

using namespace csent;

TEST_CASE("tensor basics") {
    Mat i2 = Mat::Identity(2, 2);
    CHECK(max_abs(kern::tensor(i2, i2) - Mat::Identity(4, 4)) == 0.0);

    Mat p0 = Mat::Zero(2, 2), p1 = Mat::Zero(2, 2);
    p0(0, 0) = 1.0;
    p1(1, 1) = 1.0;
    Mat d = kern::tensor(p0, p1);
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            CHECK(d(i, j) == (i == 1 && j == 1 ? cxd(1.0) : cxd(0.0)));

    Rng rng(3);
    Mat a = ginibre(rng, 2, 2), b = ginibre(rng, 2, 2);
    cxd lhs = kern::tensor(a, b).trace();
    cxd rhs = a.trace() * b.trace();
    CHECK(std::abs(lhs - rhs) < 1e-13);
}

TEST_CASE("parallel kernels match the serial reference") {
    Rng rng(11);
    std::vector<int> dims = {2, 3, 2, 2};
    Mat m = random_density(24, 24, rng);

    CHECK(max_abs(kern::partial_trace(m, dims, {1}) -
                  kern::serial::partial_trace(m, dims, {1})) < 1e-13);
    CHECK(max_abs(kern::partial_trace(m, dims, {0, 3}) -
                  kern::serial::partial_trace(m, dims, {0, 3})) < 1e-13);
    CHECK(max_abs(kern::partial_transpose(m, dims, {1, 2}) -
                  kern::serial::partial_transpose(m, dims, {1, 2})) < 1e-13);
    std::vector<int> order = {3, 1, 0, 2};
    CHECK(max_abs(kern::permute_factors(m, dims, order) -
                  kern::serial::permute_factors(m, dims, order)) < 1e-13);
    Mat a = ginibre(rng, 4, 4), b = ginibre(rng, 6, 6);
    CHECK(max_abs(kern::tensor(a, b) - kern::serial::tensor(a, b)) < 1e-13);
    Mat op = random_unitary(6, rng);
    CHECK(max_abs(kern::embed(op, dims, {1, 3}) -
                  kern::serial::embed(op, dims, {1, 3})) < 1e-13);
}

TEST_CASE("partial trace composes and preserves trace") {
    Rng rng(5);
    std::vector<int> dims = {2, 2, 3};
    Mat m = random_density(12, 12, rng);

    Mat once = kern::partial_trace(kern::partial_trace(m, dims, {0}), {2, 3}, {1});
    Mat both = kern::partial_trace(m, dims, {0, 2});
    CHECK(max_abs(once - both) < 1e-12);
    CHECK(std::abs(kern::partial_trace(m, dims, {1}).trace().real() - 1.0) < 1e-12);
}

TEST_CASE("permutation unitaries implement factor moves") {
    Rng rng(7);
    Mat a = ginibre(rng, 2, 2), b = ginibre(rng, 2, 2);
    std::vector<int> dims = {2, 2};
    Mat s = kern::permutation_unitary(dims, {1, 0});
    CHECK(max_abs(s * s - Mat::Identity(4, 4)) == 0.0);
    CHECK(max_abs(s * kern::tensor(a, b) * s.adjoint() - kern::tensor(b, a)) < 1e-13);

    // swap then trace over the swapped pair equals the plain trace
    std::vector<int> dims3 = {2, 3, 3};
    Mat m = random_density(18, 18, rng);
    Mat sw = kern::permutation_unitary(dims3, {0, 2, 1});
    Mat lhs = kern::partial_trace(sw * m * sw.adjoint(), dims3, {1, 2});
    Mat rhs = kern::partial_trace(m, dims3, {1, 2});
    CHECK(max_abs(lhs - rhs) < 1e-12);
}

TEST_CASE("embed places an operator on selected factors") {
    Rng rng(9);
    Mat u = random_unitary(3, rng);
    std::vector<int> dims = {2, 3};
    Mat full = kern::embed(u, dims, {1});
    CHECK(max_abs(full - kern::tensor(Mat::Identity(2, 2), u)) < 1e-14);
    CHECK(max_abs(full * full.adjoint() - Mat::Identity(6, 6)) < 1e-13);
}
