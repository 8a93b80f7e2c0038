#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "tokennet/graph.hpp"
#include "tokennet/rng.hpp"

namespace tokennet {

enum class CPLabel : std::uint8_t { periphery = 0, core = 1 };

std::string to_string(CPLabel label);

// A core-periphery assignment. Single-pair detection leaves every node in
// pair 0; multi-pair detection groups nodes into pairs, each with its own
// core and periphery. quality is the Pearson correlation between the
// vectorized off-diagonal adjacency and the ideal pattern implied by the
// assignment (entry 1 for a same-pair dyad unless both nodes are periphery,
// 0 otherwise), with the convention quality = 0 when either vector is
// constant.
struct CPAssignment {
    std::vector<CPLabel> labels;
    std::vector<int> pair_id;
    double quality = 0.0;

    int core_count() const;
};

struct CPTestResult {
    double p_value = 1.0;
    bool significant = false;
    int n_randomizations = 0;
    double observed_quality = 0.0;
    std::vector<double> null_qualities;
    CPAssignment observed;  // assignment behind observed_quality
};

struct CoreStats {
    int core_cnt = 0;
    double avg_core_neighbor = 0.0;
};

enum class CPAlgorithm { borgatti_everett, km_multipair };

// Pearson correlation of the adjacency indicator against the ideal pattern,
// from the four sufficient counts: total dyads, edges, pattern-1 dyads, and
// edges falling on pattern-1 dyads. Returns 0 when a vector is constant.
double pattern_pearson(std::int64_t n_dyads, std::int64_t n_edges,
                       std::int64_t pattern_ones, std::int64_t edges_on_ones);

// Recomputes the Pearson quality of an assignment from scratch.
double assignment_quality(const DailyGraph& g, const CPAssignment& a);

// The multi-pair objective: sum over same-pair dyads (i,j), excluding
// periphery-periphery dyads, of A_ij - d_i*d_j/(2m). Used to compare
// assignments; not normalized.
double km_quality(const DailyGraph& g, const CPAssignment& a);

// Single-pair detection: greedy single-label switching maximizing the
// Pearson quality, restarted from `restarts` random initial labelings.
// Deterministic given seed. Requires at least 3 nodes.
CPAssignment be_detect(const DailyGraph& g, std::uint64_t seed, int restarts = 10);

// Multi-pair detection: label switching on (pair, core/periphery) moves
// maximizing km_quality, started both from all-singleton-core pairs and from
// the single-pair assignment found by be_detect. The returned assignment is
// whichever of the two switched optima and the plain be_detect embedding has
// the highest Pearson quality, so the result never scores below the
// single-pair baseline. Pair ids are relabeled by descending size, ties by
// smallest member.
CPAssignment km_multi_detect(const DailyGraph& g, std::uint64_t seed);

// Degree-preserving randomization by double-edge swaps, 10*|edges| attempts,
// swaps producing self-loops or duplicate edges rejected. Node names and
// degree multiset are preserved; weights are reassigned in edge order.
// Throws RewireFailure when the graph has fewer than 2 edges.
DailyGraph rewire_degree_preserving(const DailyGraph& g, Rng& rng);

// Null-model significance of detected structure: quality of the observed
// assignment against n_rand degree-preserving randomizations, add-one
// p-value (1 + #{null >= observed}) / (1 + n_rand), significant at 0.05.
// Replicate i uses seed + i; requires n_rand >= 19.
CPTestResult qs_significance(const DailyGraph& g, CPAlgorithm algorithm, int n_rand,
                             std::uint64_t seed, int restarts = 10);

CoreStats core_stats(const DailyGraph& g, const CPAssignment& a);

// Counterfactual graph with all core nodes and incident edges removed;
// nodes isolated by the removal are dropped. Throws EmptyCounterfactual
// when no edge survives.
DailyGraph remove_cores(const DailyGraph& g, const CPAssignment& a);

}  // namespace tokennet
