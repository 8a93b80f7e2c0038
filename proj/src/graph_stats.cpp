#include "tokennet/graph_stats.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>

#include "tokennet/error.hpp"

namespace tokennet {

double mean_of(const std::vector<double>& xs) {
    if (xs.empty()) return 0.0;
    return std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
}

double population_std(const std::vector<double>& xs) {
    if (xs.empty()) return 0.0;
    const double m = mean_of(xs);
    double ss = 0.0;
    for (double x : xs) ss += (x - m) * (x - m);
    return std::sqrt(ss / static_cast<double>(xs.size()));
}

ComponentPartition connected_components(const DailyGraph& g) {
    const int n = g.num_nodes();
    ComponentPartition part;
    part.assignments.assign(static_cast<std::size_t>(n), -1);
    std::vector<int> stack;
    std::vector<int> sizes;
    int next_id = 0;
    for (int start = 0; start < n; ++start) {
        if (part.assignments[static_cast<std::size_t>(start)] != -1) continue;
        int size = 0;
        stack.push_back(start);
        part.assignments[static_cast<std::size_t>(start)] = next_id;
        while (!stack.empty()) {
            const int u = stack.back();
            stack.pop_back();
            ++size;
            for (int v : g.adj[static_cast<std::size_t>(u)]) {
                if (part.assignments[static_cast<std::size_t>(v)] == -1) {
                    part.assignments[static_cast<std::size_t>(v)] = next_id;
                    stack.push_back(v);
                }
            }
        }
        sizes.push_back(size);
        ++next_id;
    }
    part.component_sizes = sizes;
    std::sort(part.component_sizes.begin(), part.component_sizes.end(), std::greater<>());
    return part;
}

double giant_component_ratio(const DailyGraph& g) {
    const auto part = connected_components(g);
    return static_cast<double>(part.component_sizes.front()) /
           static_cast<double>(g.num_nodes());
}

DegreeStats degree_stats(const DailyGraph& g, const std::vector<int>* top_override) {
    const int n = g.num_nodes();
    if (n < 2) throw DegenerateGraph("degree stats need at least 2 nodes");

    std::vector<double> degrees(static_cast<std::size_t>(n));
    for (int v = 0; v < n; ++v) degrees[static_cast<std::size_t>(v)] = g.degree(v);

    DegreeStats s;
    s.degree_mean = mean_of(degrees);
    s.degree_std = population_std(degrees);
    s.relative_degree =
        2.0 * g.num_edges() / (static_cast<double>(n) * static_cast<double>(n - 1));
    s.dc_mean = s.degree_mean / static_cast<double>(n - 1);
    s.dc_std = s.degree_std / static_cast<double>(n - 1);

    std::vector<double> top;
    if (top_override != nullptr) {
        for (int v : *top_override) top.push_back(g.degree(v));
    } else {
        top = degrees;
        std::sort(top.begin(), top.end(), std::greater<>());
        if (top.size() > 10) top.resize(10);
    }
    if (!top.empty()) {
        s.top10_degree_mean = mean_of(top);
        s.top10_degree_std = population_std(top);
        s.top10_degree_mean_ratio = s.top10_degree_mean / s.degree_mean;
    }
    return s;
}

namespace {

// Edges among each node's neighborhood, counted by sorted-list lookups.
// Per-index writes keep the result independent of the thread count.
std::vector<std::int64_t> neighborhood_links(const DailyGraph& g) {
    const int n = g.num_nodes();
    std::vector<std::int64_t> links(static_cast<std::size_t>(n), 0);
#pragma omp parallel for schedule(dynamic, 64)
    for (int u = 0; u < n; ++u) {
        const auto& nbrs = g.adj[static_cast<std::size_t>(u)];
        std::int64_t count = 0;
        for (std::size_t i = 0; i < nbrs.size(); ++i) {
            const auto& ni = g.adj[static_cast<std::size_t>(nbrs[i])];
            for (std::size_t j = i + 1; j < nbrs.size(); ++j) {
                if (std::binary_search(ni.begin(), ni.end(), nbrs[j])) ++count;
            }
        }
        links[static_cast<std::size_t>(u)] = count;
    }
    return links;
}

}  // namespace

std::vector<double> local_clustering(const DailyGraph& g) {
    const int n = g.num_nodes();
    const auto links = neighborhood_links(g);
    std::vector<double> coeff(static_cast<std::size_t>(n), 0.0);
    for (int u = 0; u < n; ++u) {
        const double d = static_cast<double>(g.degree(u));
        if (d >= 2.0)
            coeff[static_cast<std::size_t>(u)] =
                2.0 * static_cast<double>(links[static_cast<std::size_t>(u)]) / (d * (d - 1.0));
    }
    return coeff;
}

ClusteringStats clustering_stats(const DailyGraph& g) {
    const int n = g.num_nodes();
    const auto links = neighborhood_links(g);

    std::vector<double> coeff(static_cast<std::size_t>(n), 0.0);
    std::int64_t total_triples = 0;
    std::int64_t closed_corners = 0;  // each triangle contributes 3 corners
    for (int u = 0; u < n; ++u) {
        const std::int64_t d = g.degree(u);
        total_triples += d * (d - 1) / 2;
        closed_corners += links[static_cast<std::size_t>(u)];
        if (d >= 2)
            coeff[static_cast<std::size_t>(u)] =
                2.0 * static_cast<double>(links[static_cast<std::size_t>(u)]) /
                (static_cast<double>(d) * static_cast<double>(d - 1));
    }

    ClusteringStats s;
    s.cluster_mean = mean_of(coeff);
    s.cluster_std = population_std(coeff);
    s.transitivity = total_triples == 0
                         ? 0.0
                         : static_cast<double>(closed_corners) /
                               static_cast<double>(total_triples);
    return s;
}

std::vector<double> eigenvector_centrality(const DailyGraph& g) {
    const int n = g.num_nodes();
    const double inv_sqrt_n = 1.0 / std::sqrt(static_cast<double>(n));
    std::vector<double> x(static_cast<std::size_t>(n), inv_sqrt_n);
    std::vector<double> next(static_cast<std::size_t>(n));
    for (int iter = 0; iter < 1000; ++iter) {
        // next = (I + A) x, which keeps bipartite graphs from oscillating.
        for (int u = 0; u < n; ++u) {
            double acc = x[static_cast<std::size_t>(u)];
            for (int v : g.adj[static_cast<std::size_t>(u)])
                acc += x[static_cast<std::size_t>(v)];
            next[static_cast<std::size_t>(u)] = acc;
        }
        double norm_sq = 0.0;
        for (double v : next) norm_sq += v * v;
        const double inv_norm = 1.0 / std::sqrt(norm_sq);
        double max_diff = 0.0;
        for (int u = 0; u < n; ++u) {
            next[static_cast<std::size_t>(u)] *= inv_norm;
            max_diff = std::max(max_diff, std::abs(next[static_cast<std::size_t>(u)] -
                                                   x[static_cast<std::size_t>(u)]));
        }
        x.swap(next);
        if (max_diff < 1e-10) return x;
    }
    throw NoConvergence("eigenvector power iteration exceeded 1000 iterations");
}

EigStats eigenvector_centrality_stats(const DailyGraph& g) {
    const auto x = eigenvector_centrality(g);
    return {mean_of(x), population_std(x)};
}

std::vector<double> closeness_centrality(const DailyGraph& g) {
    const int n = g.num_nodes();
    const auto part = connected_components(g);
    std::vector<int> comp_size(part.assignments.size());
    {
        // component_sizes is sorted, so recount per id from assignments.
        std::vector<int> by_id(static_cast<std::size_t>(part.count()), 0);
        for (int a : part.assignments) ++by_id[static_cast<std::size_t>(a)];
        for (int v = 0; v < n; ++v)
            comp_size[static_cast<std::size_t>(v)] =
                by_id[static_cast<std::size_t>(part.assignments[static_cast<std::size_t>(v)])];
    }

    std::vector<double> closeness(static_cast<std::size_t>(n), 0.0);
#pragma omp parallel
    {
        std::vector<int> dist(static_cast<std::size_t>(n));
        std::vector<int> queue(static_cast<std::size_t>(n));
#pragma omp for schedule(dynamic, 32)
        for (int src = 0; src < n; ++src) {
            const int r = comp_size[static_cast<std::size_t>(src)];
            if (r < 2) continue;
            std::fill(dist.begin(), dist.end(), -1);
            int head = 0;
            int tail = 0;
            dist[static_cast<std::size_t>(src)] = 0;
            queue[tail++] = src;
            std::int64_t total = 0;
            while (head < tail) {
                const int u = queue[head++];
                total += dist[static_cast<std::size_t>(u)];
                for (int v : g.adj[static_cast<std::size_t>(u)]) {
                    if (dist[static_cast<std::size_t>(v)] == -1) {
                        dist[static_cast<std::size_t>(v)] =
                            dist[static_cast<std::size_t>(u)] + 1;
                        queue[tail++] = v;
                    }
                }
            }
            const double reach = static_cast<double>(r - 1);
            closeness[static_cast<std::size_t>(src)] =
                (reach / static_cast<double>(total)) * (reach / static_cast<double>(n - 1));
        }
    }
    return closeness;
}

ClosenessStats closeness_centrality_stats(const DailyGraph& g) {
    const auto c = closeness_centrality(g);
    return {mean_of(c), population_std(c)};
}

}  // namespace tokennet
