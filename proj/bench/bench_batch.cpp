// Compares the serial replicate kernel against the OpenMP one and checks
// that both produce identical bytes.

#include "yule/sim.hpp"

#include <chrono>
#include <cstdio>
#include <cstring>
#include <omp.h>
#include <vector>

namespace {

double seconds_for(void (*fill)(int, std::uint64_t,
                                std::span<yule::ReplicateSample>, int),
                   int n, std::uint64_t seed,
                   std::vector<yule::ReplicateSample>& out, int threads) {
    const auto start = std::chrono::steady_clock::now();
    fill(n, seed, out, threads);
    const auto stop = std::chrono::steady_clock::now();
    return std::chrono::duration<double>(stop - start).count();
}

void serial_fill(int n, std::uint64_t seed,
                 std::span<yule::ReplicateSample> out, int) {
    yule::simulate_batch_serial(n, seed, out);
}

void parallel_fill(int n, std::uint64_t seed,
                   std::span<yule::ReplicateSample> out, int threads) {
    yule::simulate_batch_parallel(n, seed, out, threads);
}

} // namespace

int main() {
    const std::uint64_t seed = 1;
    const int threads = omp_get_max_threads();
    std::printf("replicate batch kernel, serial vs OpenMP (%d threads)\n\n",
                threads);
    std::printf("%8s %10s %12s %12s %9s %10s\n", "n", "replicates",
                "serial [s]", "openmp [s]", "speedup", "identical");

    struct Case {
        int n;
        long replicates;
    };
    const Case cases[] = {{10, 200000}, {100, 50000}, {1000, 5000},
                          {2500, 2000}};

    for (const auto& c : cases) {
        std::vector<yule::ReplicateSample> a(static_cast<size_t>(c.replicates));
        std::vector<yule::ReplicateSample> b(static_cast<size_t>(c.replicates));
        const double ts = seconds_for(serial_fill, c.n, seed, a, 1);
        const double tp = seconds_for(parallel_fill, c.n, seed, b, threads);
        const bool same = std::memcmp(a.data(), b.data(),
                                      a.size() * sizeof(a[0])) == 0;
        std::printf("%8d %10ld %12.4f %12.4f %8.2fx %10s\n", c.n, c.replicates,
                    ts, tp, ts / tp, same ? "yes" : "NO");
        if (!same) return 1;
    }
    return 0;
}
