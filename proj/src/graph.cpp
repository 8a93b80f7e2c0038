#include "tokennet/graph.hpp"

#include <algorithm>
#include <map>

#include "tokennet/error.hpp"

namespace tokennet {

namespace {

// Shared canonicalization path. Values per unordered pair are sorted before
// summation so the result is bit-identical under any permutation of the input.
DailyGraph finalize(Day day, std::map<std::pair<std::string, std::string>,
                                      std::vector<double>>&& pair_values) {
    if (pair_values.empty()) throw EmptyDay(format_day(day));

    DailyGraph g;
    g.date = day;
    for (const auto& [pair, values] : pair_values) {
        g.nodes.push_back(pair.first);
        g.nodes.push_back(pair.second);
    }
    std::sort(g.nodes.begin(), g.nodes.end());
    g.nodes.erase(std::unique(g.nodes.begin(), g.nodes.end()), g.nodes.end());

    g.edges.reserve(pair_values.size());
    g.edge_weights.reserve(pair_values.size());
    g.adj.resize(g.nodes.size());
    for (auto& [pair, values] : pair_values) {
        const int u = g.node_index(pair.first);
        const int v = g.node_index(pair.second);
        std::sort(values.begin(), values.end());
        double weight = 0.0;
        for (double x : values) weight += x;
        g.edges.emplace_back(u, v);
        g.edge_weights.push_back(weight);
        g.adj[static_cast<std::size_t>(u)].push_back(v);
        g.adj[static_cast<std::size_t>(v)].push_back(u);
    }
    std::sort(g.edges.begin(), g.edges.end());
    for (auto& nbrs : g.adj) std::sort(nbrs.begin(), nbrs.end());
    return g;
}

}  // namespace

int DailyGraph::node_index(const std::string& address) const {
    auto it = std::lower_bound(nodes.begin(), nodes.end(), address);
    if (it == nodes.end() || *it != address) return -1;
    return static_cast<int>(it - nodes.begin());
}

DailyGraph build_daily_graph(const std::vector<TransferRecord>& batch, Day day,
                             bool keep_zero_edges) {
    std::map<std::pair<std::string, std::string>, std::vector<double>> pair_values;
    for (const auto& rec : batch) {
        if (day_of(rec.timestamp) != day)
            throw InvalidParams("transfer record outside requested day");
        if (rec.from_address == rec.to_address) continue;
        if (rec.value == 0.0 && !keep_zero_edges) continue;
        auto key = std::minmax(rec.from_address, rec.to_address);
        pair_values[key].push_back(rec.value);
    }
    return finalize(day, std::move(pair_values));
}

DailyGraph graph_from_edges(Day day, const std::vector<WeightedEdge>& raw_edges) {
    std::map<std::pair<std::string, std::string>, std::vector<double>> pair_values;
    for (const auto& e : raw_edges) {
        if (e.u == e.v) continue;
        auto key = std::minmax(e.u, e.v);
        pair_values[key].push_back(e.weight);
    }
    return finalize(day, std::move(pair_values));
}

void validate_graph(const DailyGraph& g) {
    if (!std::is_sorted(g.nodes.begin(), g.nodes.end()) ||
        std::adjacent_find(g.nodes.begin(), g.nodes.end()) != g.nodes.end())
        throw DegenerateGraph("nodes not sorted unique");
    if (g.edges.size() != g.edge_weights.size())
        throw DegenerateGraph("edge/weight size mismatch");
    if (g.adj.size() != g.nodes.size()) throw DegenerateGraph("adjacency size mismatch");
    const int n = g.num_nodes();
    std::vector<std::vector<int>> rebuilt(g.nodes.size());
    std::pair<int, int> prev{-1, -1};
    for (const auto& [u, v] : g.edges) {
        if (u < 0 || v < 0 || u >= n || v >= n || u >= v)
            throw DegenerateGraph("edge endpoints out of order");
        if (std::pair{u, v} <= prev) throw DegenerateGraph("edges not sorted unique");
        prev = {u, v};
        rebuilt[static_cast<std::size_t>(u)].push_back(v);
        rebuilt[static_cast<std::size_t>(v)].push_back(u);
    }
    for (std::size_t i = 0; i < rebuilt.size(); ++i) {
        std::sort(rebuilt[i].begin(), rebuilt[i].end());
        if (rebuilt[i] != g.adj[i]) throw DegenerateGraph("adjacency inconsistent with edges");
        if (rebuilt[i].empty()) throw DegenerateGraph("isolated node present");
    }
}

}  // namespace tokennet
