#pragma once

#include <cstdint>
#include <vector>

#include "tokennet/graph.hpp"

namespace tokennet {

struct CommunityPartition {
    std::vector<int> assignments;  // node index -> community id, ids consecutive
    int community_count = 0;
    double q = 0.0;                // Newman-Girvan modularity of the partition
};

// Newman-Girvan modularity Q = sum_c (e_c/m - (d_c/2m)^2) for an arbitrary
// node-community assignment.
double modularity_score(const DailyGraph& g, const std::vector<int>& assignments);

enum class ModularityMethod {
    greedy,      // agglomerative merging plus single-node move refinement
    multilevel,  // local moves with graph aggregation between levels
};

// Deterministic given (g, seed). Graphs with at most 10 nodes are solved
// exactly by enumerating every partition, regardless of method. Beyond that
// the greedy method alternates merge passes (merge the community pair with
// the best positive modularity gain) with single-node move refinement until
// neither improves Q, and the multilevel method shuffles the node visit order
// from the seed between aggregation levels.
CommunityPartition detect_communities(const DailyGraph& g, std::uint64_t seed,
                                      ModularityMethod method = ModularityMethod::greedy);

// Q of the detected partition; the value recorded in the daily feature row.
double modularity(const DailyGraph& g, std::uint64_t seed,
                  ModularityMethod method = ModularityMethod::greedy);

}  // namespace tokennet
