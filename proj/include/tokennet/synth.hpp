#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "tokennet/date.hpp"
#include "tokennet/graph.hpp"
#include "tokennet/ingest.hpp"

namespace tokennet {

enum class Archetype { centralized, decentralized, distributed };

std::string to_string(Archetype a);
Archetype archetype_from_string(const std::string& name);

/// Parameters for single-graph generation. Unused fields are ignored by the
/// archetypes that do not need them.
struct GeneratorSpec {
    Archetype archetype = Archetype::centralized;
    int n_nodes = 100;
    int n_hubs = 4;          // decentralized: hubs forming a clique
    int per_hub = 0;         // decentralized: leaves per hub; 0 splits n_nodes evenly
    int regular_degree = 3;  // distributed: target degree
    std::uint64_t seed = 0;
    Day date = 0;
};

/// Stable address for a generator slot: "0x" plus the zero-padded hex index,
/// so lexicographic node order equals slot order.
std::string slot_address(int slot);

// centralized: star with slot 0 at the hub.
// decentralized: n_hubs hubs in a clique, leaves attached round-robin.
// distributed: random regular graph by the stub-pairing model with rejection
// of self-loops and duplicate edges (whole-shuffle retry, capped).
DailyGraph gen_archetype(const GeneratorSpec& spec);

/// Stochastic block graph with a planted core (slots < n_core) and periphery.
/// Dyads are sampled in fixed i<j order, so output is a pure function of the
/// arguments. Requires p_cc >= p_cp >= p_pp. Slots left isolated are absent
/// from the graph.
DailyGraph gen_planted_cp(int n_core, int n_periph, double p_cc, double p_cp, double p_pp,
                          std::uint64_t seed, Day date = 0);

struct TrajectorySchedule {
    int n_nodes = 200;          // daily slot budget (>= 60)
    double coupling = 0.4;      // next-day log-return loading on the coupled series
    double noise_sigma = 0.02;  // iid Gaussian log-return noise
    Day start_day = 18628;      // 2021-01-01
    int peak_day = -1;          // day of maximum decentralization; -1 = midpoint,
                                // days-1 makes the whole run monotone
    bool with_tvl = true;
};

struct TrajectoryResult {
    std::vector<DailyGraph> graphs;
    std::vector<TransferRecord> transfers;  // one row per edge, ascending time
    EconSeries econ;
    LabelMap labels;                          // first 50 slots, EOA/CA alternating
    std::vector<std::string> hub_addresses;   // the two persistent hubs (slots 0, 1)
    std::vector<double> coupled_regressor;    // the series the price path loads on
};

/// Daily graph sequence that decentralizes towards peak_day and recentralizes
/// after it: the component count rises, block sizes even out, and intra-block
/// structure morphs from hub-and-spoke to sparse uniform. Slots 0 and 1 sit in
/// the core of the largest block every day. The price path carries a known
/// coefficient on the component-count regressor (daily change, min-max scaled,
/// 7-day trailing mean), so regression recovery can be tested against ground
/// truth. Volatility is the trailing 30-day population std of log returns and
/// TVL an independent log random walk.
TrajectoryResult gen_trajectory(int days, const TrajectorySchedule& schedule,
                                std::uint64_t seed);

/// One transfer row per edge (u -> v in sorted edge order), value = edge
/// weight, timestamps ascending within the day. Rebuilding a daily graph from
/// these rows reproduces the input exactly.
std::vector<TransferRecord> transfers_from_graph(const DailyGraph& g);

}  // namespace tokennet
