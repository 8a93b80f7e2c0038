#include "tokennet/reference.hpp"

#include <algorithm>
#include <cstdint>

namespace tokennet::reference {

std::vector<double> local_clustering(const DailyGraph& g) {
    const int n = g.num_nodes();
    std::vector<double> coeff(static_cast<std::size_t>(n), 0.0);
    for (int u = 0; u < n; ++u) {
        const auto& nbrs = g.adj[static_cast<std::size_t>(u)];
        if (nbrs.size() < 2) continue;
        std::int64_t links = 0;
        for (std::size_t i = 0; i < nbrs.size(); ++i) {
            const auto& ni = g.adj[static_cast<std::size_t>(nbrs[i])];
            for (std::size_t j = i + 1; j < nbrs.size(); ++j) {
                if (std::binary_search(ni.begin(), ni.end(), nbrs[j])) ++links;
            }
        }
        const double d = static_cast<double>(nbrs.size());
        coeff[static_cast<std::size_t>(u)] = 2.0 * static_cast<double>(links) / (d * (d - 1.0));
    }
    return coeff;
}

ClusteringStats clustering_stats(const DailyGraph& g) {
    const int n = g.num_nodes();
    const auto coeff = reference::local_clustering(g);
    std::int64_t total_triples = 0;
    std::int64_t closed_corners = 0;
    for (int u = 0; u < n; ++u) {
        const auto& nbrs = g.adj[static_cast<std::size_t>(u)];
        const std::int64_t d = static_cast<std::int64_t>(nbrs.size());
        total_triples += d * (d - 1) / 2;
        std::int64_t links = 0;
        for (std::size_t i = 0; i < nbrs.size(); ++i) {
            const auto& ni = g.adj[static_cast<std::size_t>(nbrs[i])];
            for (std::size_t j = i + 1; j < nbrs.size(); ++j) {
                if (std::binary_search(ni.begin(), ni.end(), nbrs[j])) ++links;
            }
        }
        closed_corners += links;
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

std::vector<double> closeness_centrality(const DailyGraph& g) {
    const int n = g.num_nodes();
    const auto part = connected_components(g);
    std::vector<int> by_id(static_cast<std::size_t>(part.count()), 0);
    for (int a : part.assignments) ++by_id[static_cast<std::size_t>(a)];

    std::vector<double> closeness(static_cast<std::size_t>(n), 0.0);
    std::vector<int> dist(static_cast<std::size_t>(n));
    std::vector<int> queue(static_cast<std::size_t>(n));
    for (int src = 0; src < n; ++src) {
        const int r = by_id[static_cast<std::size_t>(part.assignments[static_cast<std::size_t>(src)])];
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
                    dist[static_cast<std::size_t>(v)] = dist[static_cast<std::size_t>(u)] + 1;
                    queue[tail++] = v;
                }
            }
        }
        const double reach = static_cast<double>(r - 1);
        closeness[static_cast<std::size_t>(src)] =
            (reach / static_cast<double>(total)) * (reach / static_cast<double>(n - 1));
    }
    return closeness;
}

ClosenessStats closeness_centrality_stats(const DailyGraph& g) {
    const auto c = reference::closeness_centrality(g);
    return {mean_of(c), population_std(c)};
}

}  // namespace tokennet::reference
