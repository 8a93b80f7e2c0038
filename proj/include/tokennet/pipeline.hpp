#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "tokennet/econ.hpp"
#include "tokennet/features.hpp"
#include "tokennet/ingest.hpp"

namespace tokennet {

/// Shared knobs for the file-level commands. Commands ignore the fields they
/// do not use.
struct RunConfig {
    std::string transfers_path;
    std::string econ_path;
    std::string labels_path;   // optional; unlabeled addresses read "unknown"
    std::string features_path; // regress / plot input
    std::string cores_path;    // plot input for the box-plot figure
    std::string out_dir = ".";
    std::uint64_t seed = 42;
    int n_rand = 100;
    int restarts = 10;
    int hac_lag = -1;  // negative: sample-size rule
    std::vector<int> horizons = {1, 7, 14, 21, 28, 35, 42, 49, 56, 90};
    bool keep_zero_edges = false;
    bool global_top10 = false;
};

/// Reads and buckets the transfers file (.jsonl switches the parser, anything
/// else is csv). Throws "no days" when the file holds no records.
std::map<Day, std::vector<TransferRecord>> load_transfer_days(const RunConfig& cfg);

struct DailyComputation {
    FeatureTable table;
    std::map<Day, DayAssignment> assignments;  // days with >= 3 nodes only
};

/// Per-day engine behind cmd_features and cmd_counterfactual: graph build,
/// single-pair core-periphery detection with its degree-preserving
/// significance test, full feature row. Days are processed in parallel with
/// per-day derived seeds, so output is independent of thread count. With
/// counterfactual set, rows describe the core-removed graphs and days whose
/// graph vanishes become all-null rows.
DailyComputation compute_daily_features(
    const std::map<Day, std::vector<TransferRecord>>& buckets, const RunConfig& cfg,
    bool counterfactual = false);

/// Pairwise-complete Pearson correlations between all feature columns.
/// Pairs with fewer than 2 joint observations or zero variance read 0.
Eigen::MatrixXd feature_correlations(const FeatureTable& table,
                                     std::vector<std::string>& names_out);

void cmd_features(const RunConfig& cfg);        // features.csv + cores.csv
void cmd_counterfactual(const RunConfig& cfg);  // counterfactual_features.csv
void cmd_regress(const RunConfig& cfg);  // regressions.csv + pca.csv + correlations.csv
void cmd_plot(const RunConfig& cfg);     // svg figures + their data tables

/// Generator command parameters; kind selects an archetype name, "planted-cp"
/// or "trajectory".
struct GenConfig {
    std::string kind = "centralized";
    int n_nodes = 100;
    int n_hubs = 4;
    int per_hub = 0;
    int regular_degree = 3;
    int n_core = 12;
    int n_periph = 88;
    double p_cc = 0.9;
    double p_cp = 0.6;
    double p_pp = 0.05;
    int days = 365;
    double coupling = 0.4;
    double noise_sigma = 0.02;
    int peak_day = -1;
    bool with_tvl = true;
    std::string date = "2021-01-01";
    std::string out_dir = ".";
    std::uint64_t seed = 42;
};

/// Writes transfers.csv, plus econ.csv and labels.csv for trajectories.
void cmd_gen(const GenConfig& cfg);

}  // namespace tokennet
