#include "csent/optim.hpp"

#include <algorithm>
#include <cmath>

namespace csent {

namespace {

RVec central_diff_gradient(const Objective& f, const RVec& x, double h) {
    RVec g(x.size());
    RVec xp = x;
    for (long i = 0; i < x.size(); ++i) {
        const double xi = x(i);
        xp(i) = xi + h;
        const double fp = f(xp);
        xp(i) = xi - h;
        const double fm = f(xp);
        xp(i) = xi;
        g(i) = (fp - fm) / (2.0 * h);
    }
    return g;
}

} // namespace

BfgsResult bfgs_minimize(const Objective& f, const RVec& x0, const BfgsOptions& opts) {
    const long n = x0.size();
    BfgsResult res;
    res.x = x0;
    res.f = f(res.x);
    RVec g = central_diff_gradient(f, res.x, opts.fd_step);
    RMat hinv = RMat::Identity(n, n);

    for (res.iters = 0; res.iters < opts.max_iters; ++res.iters) {
        if (g.norm() <= opts.grad_tol) {
            res.converged = true;
            break;
        }
        RVec dir = -(hinv * g);
        double slope = g.dot(dir);
        if (!(slope < 0.0)) {
            hinv = RMat::Identity(n, n);
            dir = -g;
            slope = g.dot(dir);
            if (!(slope < 0.0)) break;
        }

        double t = 1.0;
        double fn = res.f;
        RVec xn = res.x;
        bool improved = false;
        for (int ls = 0; ls < 50; ++ls) {
            xn = res.x + t * dir;
            fn = f(xn);
            if (fn <= res.f + 1e-4 * t * slope) {
                improved = true;
                break;
            }
            t *= 0.5;
        }
        if (!improved || !(fn < res.f)) break;

        RVec gn = central_diff_gradient(f, xn, opts.fd_step);
        RVec s = xn - res.x;
        RVec y = gn - g;
        const double sy = s.dot(y);
        if (sy > 1e-12) {
            RVec hy = hinv * y;
            const double yhy = y.dot(hy);
            hinv += ((sy + yhy) / (sy * sy)) * (s * s.transpose());
            RMat cross = hy * s.transpose();
            hinv -= (cross + cross.transpose()) / sy;
        }
        res.x = xn;
        res.f = fn;
        g = gn;
    }
    return res;
}

MultistartResult multistart_minimize(const Objective& f,
                                     const std::function<RVec(int)>& initial_point,
                                     int restarts, const BfgsOptions& opts) {
    std::vector<BfgsResult> runs(restarts);
#pragma omp parallel for schedule(dynamic)
    for (int r = 0; r < restarts; ++r) runs[r] = bfgs_minimize(f, initial_point(r), opts);

    MultistartResult out;
    out.terminal_values.reserve(restarts);
    int converged = 0;
    for (int r = 0; r < restarts; ++r) {
        out.terminal_values.push_back(runs[r].f);
        if (runs[r].converged) ++converged;
        if (out.best_index < 0 || runs[r].f < out.best_f) {
            out.best_index = r;
            out.best_f = runs[r].f;
            out.best_x = runs[r].x;
        }
    }
    out.converged_fraction = restarts > 0 ? static_cast<double>(converged) / restarts : 0.0;
    return out;
}

RVec project_simplex(const RVec& v) {
    const long n = v.size();
    std::vector<double> u(v.data(), v.data() + n);
    std::sort(u.begin(), u.end(), std::greater<double>());
    double css = 0.0;
    double theta = 0.0;
    int rho = 0;
    for (long i = 0; i < n; ++i) {
        css += u[i];
        double t = (css - 1.0) / static_cast<double>(i + 1);
        if (u[i] - t > 0.0) {
            rho = static_cast<int>(i + 1);
            theta = t;
        }
    }
    (void)rho;
    RVec out(n);
    for (long i = 0; i < n; ++i) out(i) = std::max(0.0, v(i) - theta);
    return out;
}

PgaResult simplex_pga_max(const std::function<double(const RVec&, RVec*)>& fg, const RVec& q0,
                          double grad_tol, int max_iters) {
    PgaResult res;
    res.q = project_simplex(q0);
    RVec g(res.q.size());
    res.f = fg(res.q, &g);
    double t = 0.25;
    const double probe = 1e-3;

    for (res.iters = 0; res.iters < max_iters; ++res.iters) {
        RVec probe_q = project_simplex(res.q + probe * g);
        if ((probe_q - res.q).norm() / probe <= grad_tol) {
            res.converged = true;
            break;
        }

        RVec target = project_simplex(res.q + t * g);
        RVec dir = target - res.q;
        const double slope = g.dot(dir);
        if (slope <= 0.0) {
            t *= 0.5;
            if (t < 1e-14) break;
            continue;
        }

        double alpha = 1.0;
        bool improved = false;
        for (int ls = 0; ls < 40; ++ls) {
            RVec qn = res.q + alpha * dir;  // convex combination stays feasible
            RVec gn(qn.size());
            const double fn = fg(qn, &gn);
            if (fn >= res.f + 1e-4 * alpha * slope) {
                res.q = qn;
                res.f = fn;
                g = gn;
                improved = true;
                break;
            }
            alpha *= 0.5;
        }
        if (improved) {
            t = std::min(t * 1.3, 8.0);
        } else {
            t *= 0.25;
            if (t < 1e-14) break;
        }
    }
    return res;
}

} // namespace csent
