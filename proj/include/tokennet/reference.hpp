#pragma once

#include <vector>

#include "tokennet/graph.hpp"
#include "tokennet/graph_stats.hpp"

namespace tokennet::reference {

// Serial twins of the parallel kernels in graph_stats.cpp. They are written
// as plain loops without any threading pragmas and must return bit-identical
// results; tests compare the pair and bench_kernels times them side by side.

std::vector<double> local_clustering(const DailyGraph& g);
ClusteringStats clustering_stats(const DailyGraph& g);

std::vector<double> closeness_centrality(const DailyGraph& g);
ClosenessStats closeness_centrality_stats(const DailyGraph& g);

}  // namespace tokennet::reference
