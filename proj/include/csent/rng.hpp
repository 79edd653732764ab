#pragma once

#include <cstdint>
#include <random>

#include "csent/types.hpp"

namespace csent {

// Explicit-seed generator; every consumer owns its own instance. Substreams
// derived from (seed, index) keep parallel restarts order-independent.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : seed_(seed), eng_(seed) {}

    std::uint64_t seed() const { return seed_; }

    double uniform() {
        std::uniform_real_distribution<double> d(0.0, 1.0);
        return d(eng_);
    }

    double normal() {
        std::normal_distribution<double> d(0.0, 1.0);
        return d(eng_);
    }

    // Inclusive bounds.
    int uniform_int(int lo, int hi) {
        std::uniform_int_distribution<int> d(lo, hi);
        return d(eng_);
    }

    static std::uint64_t mix(std::uint64_t a, std::uint64_t b);

    Rng substream(std::uint64_t index) const { return Rng(mix(seed_, index)); }

private:
    std::uint64_t seed_;
    std::mt19937_64 eng_;
};

// Matrix of i.i.d. standard complex Gaussians.
Mat ginibre(Rng& rng, int rows, int cols);

// Haar unitary via QR of a Ginibre matrix with the R-diagonal phase fix.
Mat random_unitary(int d, Rng& rng);
Mat random_unitary(int d, std::uint64_t seed);

// Trace-one PSD matrix of the requested rank.
Mat random_density(int d, int rank, Rng& rng);
Mat random_density(int d, int rank, std::uint64_t seed);

// Normalized Haar-random state vector.
Vec random_pure(int d, Rng& rng);
Vec random_pure(int d, std::uint64_t seed);

} // namespace csent
