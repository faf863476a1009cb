// Kernel benchmark: OpenMP-parallel entry points against the serial
// reference implementations, plus one full deflated moment apply.

#include <chrono>
#include <cstdio>
#include <functional>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "tpx/gap_analysis.hpp"
#include "tpx/kernels.hpp"
#include "tpx/moment_ops.hpp"

using tpx::cplx;

namespace {

double time_ms(const std::function<void()>& fn, int reps) {
    fn(); // warm-up (plan caches, page faults)
    auto t0 = std::chrono::steady_clock::now();
    for (int r = 0; r < reps; ++r) fn();
    auto dt = std::chrono::steady_clock::now() - t0;
    return std::chrono::duration<double, std::milli>(dt).count() / reps;
}

void row(const char* name, double serial_ms, double parallel_ms) {
    std::printf("%-28s %10.3f ms %10.3f ms %7.2fx\n", name, serial_ms, parallel_ms,
                serial_ms / parallel_ms);
}

} // namespace

int main(int argc, char** argv) {
    std::int64_t n = argc > 1 ? std::atoll(argv[1]) : 512;
    int copies = argc > 2 ? std::atoi(argv[2]) : 2;
    int reps = argc > 3 ? std::atoi(argv[3]) : 5;

    tpx::TupleSpace space(n, copies);
    std::int64_t dim = space.dim();
#ifdef _OPENMP
    std::printf("N=%lld copies=%d dim=%lld threads=%d\n", (long long)n, copies, (long long)dim,
                omp_get_max_threads());
#else
    std::printf("N=%lld copies=%d dim=%lld (no OpenMP)\n", (long long)n, copies, (long long)dim);
#endif
    std::printf("%-28s %13s %13s %8s\n", "kernel", "serial", "parallel", "speedup");

    tpx::CounterRng rng{7};
    std::vector<cplx> x(static_cast<size_t>(dim)), y(static_cast<size_t>(dim));
    for (std::int64_t i = 0; i < dim; ++i) x[size_t(i)] = rng.gaussian(std::uint64_t(i));

    row("dot",
        time_ms([&] { (void)tpx::kernels::serial::dot(x, x); }, reps),
        time_ms([&] { (void)tpx::kernels::dot(x, x); }, reps));

    std::vector<int> image = tpx::random_permutation(n, rng.derive(1));
    row("gather_tuple_perm",
        time_ms([&] { tpx::kernels::serial::gather_tuple_perm(space, image, x, y); }, reps),
        time_ms([&] { tpx::kernels::gather_tuple_perm(space, image, x, y); }, reps));

    row("dft_factor",
        time_ms([&] { tpx::kernels::serial::dft_factor(space, 0, +1, y); }, 1),
        time_ms([&] { tpx::kernels::dft_factor(space, 0, +1, y); }, reps));

    {
        tpx::PartitionIndex patterns(copies);
        std::vector<std::int32_t> cls(static_cast<size_t>(dim));
        std::vector<int> tuple(static_cast<size_t>(copies)), ids(static_cast<size_t>(copies));
        for (std::int64_t t = 0; t < dim; ++t) {
            space.decode(t, tuple);
            tpx::equality_pattern_ids(tuple, ids);
            cls[size_t(t)] = std::int32_t(patterns.position_of_ids(ids));
        }
        row("class_sums",
            time_ms([&] { (void)tpx::kernels::serial::class_sums(x, cls, patterns.size()); }, reps),
            time_ms([&] { (void)tpx::kernels::class_sums(x, cls, patterns.size()); }, reps));
    }

    if (copies % 2 == 0) {
        int k = copies / 2;
        tpx::QuantumEnsemble ens;
        ens.n = n;
        ens.k = k;
        for (int i = 0; i < 4; ++i)
            ens.entries.push_back(
                {tpx::PermGenerator{tpx::random_permutation(n, rng.derive(std::uint64_t(10 + i)))},
                 0.2});
        ens.entries.push_back({tpx::FourierGenerator{}, 0.2});
        tpx::OpPtr op = tpx::ensemble_moment(ens);
        auto haar = tpx::haar_projector(space, k);
        std::vector<cplx> t1(static_cast<size_t>(dim)), t2(static_cast<size_t>(dim));
        double apply_ms = time_ms(
            [&] {
                haar->apply(x, t1);
                tpx::kernels::axpy(cplx(-1.0, 0.0), t1, x);
                op->apply(x, t2);
            },
            reps);
        std::printf("%-28s %10s    %10.3f ms\n", "deflated moment apply", "-", apply_ms);
    }
    return 0;
}
