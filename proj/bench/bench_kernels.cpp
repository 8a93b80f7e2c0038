// Times the OpenMP graph kernels against their serial reference twins and
// checks that both produce identical bits. Run with no arguments for the
// default sizes, or pass node counts, e.g.: bench_kernels 500 2000 8000

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <string>
#include <vector>

#include "tokennet/graph_stats.hpp"
#include "tokennet/reference.hpp"
#include "tokennet/synth.hpp"

namespace {

using Clock = std::chrono::steady_clock;

template <typename F>
double time_ms(F&& fn, int reps) {
    const auto start = Clock::now();
    for (int r = 0; r < reps; ++r) fn();
    const auto stop = Clock::now();
    return std::chrono::duration<double, std::milli>(stop - start).count() /
           static_cast<double>(reps);
}

}  // namespace

int main(int argc, char** argv) {
    std::vector<int> sizes;
    for (int i = 1; i < argc; ++i) sizes.push_back(std::atoi(argv[i]));
    if (sizes.empty()) sizes = {500, 2000, 6000};

    std::printf("%8s %10s %18s %18s %8s\n", "nodes", "edges", "kernel", "ms/call",
                "speedup");
    for (int n : sizes) {
        if (n < 20) {
            std::fprintf(stderr, "skipping size %d (too small)\n", n);
            continue;
        }
        // a dense-core planted graph keeps the triangle and BFS kernels busy
        const int core = n / 20 + 2;
        const auto g = tokennet::gen_planted_cp(core, n - core, 0.6, 30.0 / n, 6.0 / n,
                                                1234u + static_cast<unsigned>(n));
        const int reps = n <= 1000 ? 20 : 5;

        const auto par_cluster = tokennet::clustering_stats(g);
        const auto ser_cluster = tokennet::reference::clustering_stats(g);
        if (par_cluster.cluster_mean != ser_cluster.cluster_mean ||
            par_cluster.cluster_std != ser_cluster.cluster_std ||
            par_cluster.transitivity != ser_cluster.transitivity) {
            std::fprintf(stderr, "clustering kernels disagree at n=%d\n", n);
            return 1;
        }
        const auto par_close = tokennet::closeness_centrality_stats(g);
        const auto ser_close = tokennet::reference::closeness_centrality_stats(g);
        if (par_close.closeness_mean != ser_close.closeness_mean ||
            par_close.closeness_std != ser_close.closeness_std) {
            std::fprintf(stderr, "closeness kernels disagree at n=%d\n", n);
            return 1;
        }

        const double c_par = time_ms([&] { tokennet::clustering_stats(g); }, reps);
        const double c_ser =
            time_ms([&] { tokennet::reference::clustering_stats(g); }, reps);
        const double b_par =
            time_ms([&] { tokennet::closeness_centrality_stats(g); }, reps);
        const double b_ser =
            time_ms([&] { tokennet::reference::closeness_centrality_stats(g); }, reps);

        std::printf("%8d %10d %18s %18.3f %8s\n", g.num_nodes(), g.num_edges(),
                    "clustering/omp", c_par, "");
        std::printf("%8s %10s %18s %18.3f %7.2fx\n", "", "", "clustering/serial", c_ser,
                    c_par > 0 ? c_ser / c_par : 0.0);
        std::printf("%8s %10s %18s %18.3f %8s\n", "", "", "closeness/omp", b_par, "");
        std::printf("%8s %10s %18s %18.3f %7.2fx\n", "", "", "closeness/serial", b_ser,
                    b_par > 0 ? b_ser / b_par : 0.0);
    }
    return 0;
}
