// Timings of the OpenMP kernels against their serial reference versions.

#include "medwit/kernels.hpp"
#include "medwit/random.hpp"

#include <omp.h>

#include <chrono>
#include <cstdio>
#include <cstring>
#include <functional>
#include <vector>

using namespace medwit;

namespace {

double seconds(const std::function<Matrix()>& f, int reps, Matrix& out) {
    const auto t0 = std::chrono::steady_clock::now();
    for (int i = 0; i < reps; ++i) out = f();
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count() / reps;
}

struct Case {
    const char* name;
    std::function<Matrix()> parallel;
    std::function<Matrix()> serial;
};

}  // namespace

int main(int argc, char** argv) {
    const bool quick = argc > 1 && std::strcmp(argv[1], "--quick") == 0;
    const std::vector<std::vector<int>> shapes =
        quick ? std::vector<std::vector<int>>{{2, 3, 4}, {4, 2, 4}} : std::vector<std::vector<int>>{{4, 4, 4}, {8, 4, 8}, {8, 8, 8}};
    const int reps = quick ? 2 : 10;

    std::printf("threads %d\n", omp_get_max_threads());
    std::printf("%-18s %-10s %12s %12s %8s %10s\n", "kernel", "dims", "parallel_s", "serial_s", "speedup", "max_diff");
    bool ok = true;
    Rng rng(42);
    for (const auto& dims : shapes) {
        Index d = 1;
        for (int x : dims) d *= x;
        const Matrix x = random_density(d, d, rng);
        const Index dop = static_cast<Index>(dims[0]) * dims[2];
        const Matrix op = random_unitary(dop, rng);
        const std::vector<std::size_t> keep{0, 2}, on{1}, order{2, 0, 1}, pos{2, 0};
        const std::vector<Case> cases{
            {"partial_trace", [&] { return kernels::partial_trace(x, dims, keep); },
             [&] { return kernels::reference::partial_trace(x, dims, keep); }},
            {"partial_transpose", [&] { return kernels::partial_transpose(x, dims, on); },
             [&] { return kernels::reference::partial_transpose(x, dims, on); }},
            {"permute", [&] { return kernels::permute(x, dims, order); },
             [&] { return kernels::reference::permute(x, dims, order); }},
            {"embed", [&] { return kernels::embed(op, dims, pos); },
             [&] { return kernels::reference::embed(op, dims, pos); }},
            {"conjugate", [&] { return kernels::conjugate(op, x, dims, pos); },
             [&] { return kernels::reference::conjugate(op, x, dims, pos); }},
        };
        char shape[32];
        std::snprintf(shape, sizeof shape, "%dx%dx%d", dims[0], dims[1], dims[2]);
        for (const auto& c : cases) {
            Matrix a, b;
            const double tp = seconds(c.parallel, reps, a);
            const double ts = seconds(c.serial, reps, b);
            const double diff = (a - b).cwiseAbs().maxCoeff();
            ok = ok && diff <= 1e-12;
            std::printf("%-18s %-10s %12.3e %12.3e %8.2f %10.1e\n", c.name, shape, tp, ts, ts / tp, diff);
        }
    }
    if (!ok) std::printf("MISMATCH between parallel and serial kernels\n");
    return ok ? 0 : 1;
}
