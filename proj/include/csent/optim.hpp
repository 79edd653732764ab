#pragma once

#include <functional>
#include <vector>

#include "csent/types.hpp"

namespace csent {

using Objective = std::function<double(const RVec&)>;

struct BfgsOptions {
    int max_iters = 200;
    double grad_tol = 1e-7;
    double fd_step = 1e-6;  // central-difference half step
};

struct BfgsResult {
    RVec x;
    double f = 0.0;
    int iters = 0;
    bool converged = false;
};

// Quasi-Newton minimization with central-difference gradients and Armijo
// backtracking. Deterministic for a fixed starting point.
BfgsResult bfgs_minimize(const Objective& f, const RVec& x0, const BfgsOptions& opts = {});

struct MultistartResult {
    RVec best_x;
    double best_f = 0.0;
    int best_index = -1;
    double converged_fraction = 0.0;
    std::vector<double> terminal_values;
};

// Independent restarts run concurrently; the fold is ordered by restart index
// (ties keep the lowest index), so thread count never changes the answer.
MultistartResult multistart_minimize(const Objective& f,
                                     const std::function<RVec(int)>& initial_point,
                                     int restarts, const BfgsOptions& opts = {});

// Euclidean projection onto the probability simplex.
RVec project_simplex(const RVec& v);

struct PgaResult {
    RVec q;
    double f = 0.0;
    int iters = 0;
    bool converged = false;
};

// Projected gradient ascent of a concave objective over the simplex; the
// callback returns the value and fills the gradient. Stops at projected
// gradient norm <= grad_tol or max_iters.
PgaResult simplex_pga_max(const std::function<double(const RVec&, RVec*)>& fg, const RVec& q0,
                          double grad_tol = 1e-8, int max_iters = 5000);

} // namespace csent
