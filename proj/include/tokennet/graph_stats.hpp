#pragma once

#include <vector>

#include "tokennet/graph.hpp"

namespace tokennet {

struct ComponentPartition {
    std::vector<int> assignments;     // node index -> component id
    std::vector<int> component_sizes; // descending
    int count() const { return static_cast<int>(component_sizes.size()); }
};

struct DegreeStats {
    double degree_mean = 0.0;
    double degree_std = 0.0;
    double top10_degree_mean = 0.0;
    double top10_degree_std = 0.0;
    double top10_degree_mean_ratio = 0.0;
    double relative_degree = 0.0;
    double dc_mean = 0.0;
    double dc_std = 0.0;
};

struct ClusteringStats {
    double cluster_mean = 0.0;
    double cluster_std = 0.0;
    double transitivity = 0.0;
};

struct EigStats {
    double eig_mean = 0.0;
    double eig_std = 0.0;
};

struct ClosenessStats {
    double closeness_mean = 0.0;
    double closeness_std = 0.0;
};

// Population mean and standard deviation of a vector; (0,0) when empty.
double mean_of(const std::vector<double>& xs);
double population_std(const std::vector<double>& xs);

ComponentPartition connected_components(const DailyGraph& g);
double giant_component_ratio(const DailyGraph& g);

// Top-10 statistics use the 10 highest-degree nodes of the day. When
// top_override is non-null they instead use the degrees of exactly those node
// indices (the globally ranked address set restricted to this day); an empty
// override leaves the top10 fields at 0.
DegreeStats degree_stats(const DailyGraph& g, const std::vector<int>* top_override = nullptr);

// Local clustering coefficients (0 for degree < 2) and global transitivity
// 3*triangles/triples. Parallel over nodes; see reference.hpp for the serial
// twin used in tests and benchmarks.
ClusteringStats clustering_stats(const DailyGraph& g);
std::vector<double> local_clustering(const DailyGraph& g);

// Power iteration on I + A from the uniform vector, unit Euclidean norm,
// max-norm tolerance 1e-10, at most 1000 iterations. Throws NoConvergence.
EigStats eigenvector_centrality_stats(const DailyGraph& g);
std::vector<double> eigenvector_centrality(const DailyGraph& g);

// Wasserman-Faust closeness: ((r-1)/sum_dist) * ((r-1)/(n-1)) with r the size
// of the node's component; 0 for singleton components. Parallel over sources.
ClosenessStats closeness_centrality_stats(const DailyGraph& g);
std::vector<double> closeness_centrality(const DailyGraph& g);

}  // namespace tokennet
