#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "csent/ent.hpp"
#include "csent/locc.hpp"
#include "csent/state.hpp"

// Property suites shared by the csent CLI `verify` subcommand and the
// acceptance binary; the two differ only in sample counts, never in
// tolerances.

namespace csent {

struct CheckResult {
    std::string name;
    bool pass = true;
    double worst = 0.0;
    int count = 0;
    std::string note;
};

struct SuiteResult {
    std::string suite;
    std::vector<CheckResult> checks;
    bool pass() const {
        for (const auto& c : checks)
            if (!c.pass) return false;
        return true;
    }
};

// Samplers reused across suites and tests.
MultipartiteState random_two_qubit(std::uint64_t seed, int rank);
MultipartiteState random_separable_2q(std::uint64_t seed, int terms = 4);
// Rejection-sampled two-qubit state with concurrence >= min_concurrence
// (alternates pure and rank-2 draws).
MultipartiteState random_entangled_2q(std::uint64_t seed, double min_concurrence);

// 2 - 2 sqrt((1 + sqrt(1 - C^2)) / 2), the two-qubit closed form.
double two_qubit_bures_closed_form(double concurrence);

SuiteResult suite_distances(int samples, std::uint64_t seed);
SuiteResult suite_cse(int samples, std::uint64_t seed);
SuiteResult suite_hs_noncontractive();
SuiteResult suite_theorem1(int bures_trials, int hs_trials, std::uint64_t seed,
                           const EntOpts& opts);
SuiteResult suite_theorem2(int random_samples, std::uint64_t seed, const EntOpts& opts,
                           double tol = 5e-3);
SuiteResult suite_theorem3(int random_samples, std::uint64_t seed, const EntOpts& opts);
SuiteResult suite_faithfulness(int separable_samples, int entangled_samples, std::uint64_t seed,
                               const EntOpts& opts);

std::string format_suite(const SuiteResult& r);

} // namespace csent
