#pragma once

#include <string>
#include <utility>
#include <vector>

#include "tokennet/date.hpp"
#include "tokennet/ingest.hpp"

namespace tokennet {

// Undirected simple graph for one UTC day. Transfer direction is ignored and
// parallel transfers between the same pair are merged by summing their values.
// Weights are metadata only; every structural statistic treats the graph as
// unweighted. Nodes are sorted lexicographically so the index assignment is a
// pure function of the node set.
struct DailyGraph {
    Day date = 0;
    std::vector<std::string> nodes;
    std::vector<std::pair<int, int>> edges;  // u < v, sorted by (u, v)
    std::vector<double> edge_weights;        // parallel to edges
    std::vector<std::vector<int>> adj;       // sorted neighbor lists

    int num_nodes() const { return static_cast<int>(nodes.size()); }
    int num_edges() const { return static_cast<int>(edges.size()); }
    int degree(int v) const { return static_cast<int>(adj[static_cast<std::size_t>(v)].size()); }
    // Index of an address, or -1 when absent.
    int node_index(const std::string& address) const;
};

// Raw edge before canonicalization; used by the generators and by tests.
struct WeightedEdge {
    std::string u;
    std::string v;
    double weight = 1.0;
};

DailyGraph build_daily_graph(const std::vector<TransferRecord>& batch, Day day,
                             bool keep_zero_edges = false);

// Builds a DailyGraph from an explicit edge list, applying the same
// canonicalization as build_daily_graph (self-loops dropped, duplicate pairs
// merged by weight summation, nodes sorted).
DailyGraph graph_from_edges(Day day, const std::vector<WeightedEdge>& raw_edges);

// Checks the structural invariants (sorted unique nodes, u < v edge ordering,
// adjacency consistent with the edge list, minimum degree 1). Throws
// DegenerateGraph on violation. Used by tests and after counterfactual edits.
void validate_graph(const DailyGraph& g);

}  // namespace tokennet
