// Timing comparison of the OpenMP kernels against the serial reference
// implementations, with an output agreement check at each size.

#include <chrono>
#include <cstdio>
#include <string>
#include <vector>

#include "csent/kernels.hpp"
#include "csent/rng.hpp"
#include "csent/types.hpp"

using namespace csent;

namespace {

double ms_since(std::chrono::steady_clock::time_point t0) {
    auto t1 = std::chrono::steady_clock::now();
    return std::chrono::duration_cast<std::chrono::duration<double, std::milli>>(t1 - t0).count();
}

template <typename F>
double time_best(F&& f, int reps) {
    double best = 1e300;
    for (int i = 0; i < reps; ++i) {
        auto t0 = std::chrono::steady_clock::now();
        f();
        best = std::min(best, ms_since(t0));
    }
    return best;
}

void row(const char* name, int dim, double serial_ms, double parallel_ms, double agreement) {
    std::printf("%-16s dim %4d   serial %9.3f ms   parallel %9.3f ms   speedup %5.2fx   "
                "max|diff| %.1e\n",
                name, dim, serial_ms, parallel_ms, serial_ms / parallel_ms, agreement);
}

} // namespace

int main(int argc, char** argv) {
    int reps = 5;
    std::vector<int> sizes = {64, 128, 256};
    for (int i = 1; i < argc; ++i) {
        std::string arg = argv[i];
        if (arg == "--quick") {
            sizes = {32, 64};
            reps = 3;
        }
    }

    Rng rng(42);
    for (int d : sizes) {
        const int half = d / 2;
        Mat a = random_density(half, half, rng);
        Mat b = random_density(2, 2, rng);
        Mat big = random_density(d, d, rng);
        std::vector<int> dims = {2, d / 4, 2};
        Mat op = random_unitary(d / 4, rng);

        Mat t_par, t_ser;
        double tp = time_best([&] { t_par = kern::tensor(a, b); }, reps);
        double ts = time_best([&] { t_ser = kern::serial::tensor(a, b); }, reps);
        row("tensor", d, ts, tp, max_abs(t_par - t_ser));

        Mat pt_par, pt_ser;
        double pp = time_best([&] { pt_par = kern::partial_trace(big, dims, {1}); }, reps);
        double ps = time_best([&] { pt_ser = kern::serial::partial_trace(big, dims, {1}); }, reps);
        row("partial_trace", d, ps, pp, max_abs(pt_par - pt_ser));

        Mat pm_par, pm_ser;
        std::vector<int> order = {2, 1, 0};
        double mp = time_best([&] { pm_par = kern::permute_factors(big, dims, order); }, reps);
        double msr = time_best([&] { pm_ser = kern::serial::permute_factors(big, dims, order); },
                               reps);
        row("permute", d, msr, mp, max_abs(pm_par - pm_ser));

        Mat em_par, em_ser;
        double ep = time_best([&] { em_par = kern::embed(op, dims, {1}); }, reps);
        double es = time_best([&] { em_ser = kern::serial::embed(op, dims, {1}); }, reps);
        row("embed", d, es, ep, max_abs(em_par - em_ser));
    }
    return 0;
}
