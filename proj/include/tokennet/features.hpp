#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "tokennet/cp.hpp"
#include "tokennet/graph.hpp"
#include "tokennet/ingest.hpp"
#include "tokennet/modularity.hpp"

namespace tokennet {

// NaN marks a feature that is undefined for the day (for example the
// core-periphery fields when the graph has fewer than 3 nodes). CSV writers
// emit nulls as empty fields.
double null_value();
bool is_null(double x);

// One day of the feature table. All 24 features are stored as doubles;
// counts are exact small integers in double form.
struct FeatureRow {
    Day date = 0;
    double num_nodes = 0;
    double num_edges = 0;
    double degree_mean = 0;
    double degree_std = 0;
    double top10_degree_mean = 0;
    double top10_degree_std = 0;
    double top10_degree_mean_ratio = 0;
    double relative_degree = 0;
    double dc_mean = 0;
    double dc_std = 0;
    double cluster_mean = 0;
    double cluster_std = 0;
    double modularity = 0;
    double transitivity = 0;
    double eig_mean = 0;
    double eig_std = 0;
    double closeness_mean = 0;
    double closeness_std = 0;
    double giant_com_ratio = 0;
    double components_cnt = 0;
    double cp_test_pvalue = 0;
    double cp_significance = 0;
    double core_cnt = 0;
    double avg_core_neighbor = 0;
};

// Column names in file order and member pointers in the same order, shared
// by the csv round-trip and the plotting code.
inline constexpr std::size_t kFeatureCount = 24;
extern const std::array<const char*, kFeatureCount> kFeatureNames;
extern const std::array<double FeatureRow::*, kFeatureCount> kFeatureMembers;

struct FeatureTable {
    std::vector<FeatureRow> rows;  // ascending by date
};

// Assembles a full row from the day's graph and its core-periphery results.
// Passing null cp/assignment (graphs below 3 nodes) nulls the four
// core-periphery fields. Eigenvector non-convergence nulls eig_mean/eig_std
// and leaves the rest of the row intact. top_override forwards to
// degree_stats for the globally ranked top-10 variant.
FeatureRow feature_row(const DailyGraph& g, const CPTestResult* cp, const CPAssignment* a,
                       std::uint64_t seed,
                       ModularityMethod method = ModularityMethod::greedy,
                       const std::vector<int>* top_override = nullptr);

void write_features_csv(std::ostream& out, const FeatureTable& table);
FeatureTable read_features_csv(std::istream& in);

// Per-day assignment with the node names it refers to.
struct DayAssignment {
    std::vector<std::string> nodes;
    CPAssignment assignment;
};

void write_cp_assignment_csv(std::ostream& out, const DayAssignment& day);

struct CoreDayRecord {
    std::string address;
    AccountKind kind = AccountKind::unknown;
    int core_day_count = 0;
};

// Number of days each address was labeled core, joined with account labels.
// Sorted by descending count, ties by address.
std::vector<CoreDayRecord> core_day_counts(const std::map<Day, DayAssignment>& assignments,
                                           const LabelMap& labels);

void write_cores_csv(std::ostream& out, const std::vector<CoreDayRecord>& records);
std::vector<CoreDayRecord> read_cores_csv(std::istream& in);

// Linear-interpolation quantile of a sorted sample (the common spreadsheet
// and numpy default).
double quantile_type7(const std::vector<double>& sorted_values, double p);

// Tukey upper-fence outliers: count > Q3 + 1.5*IQR. With by_kind set the EOA
// and CA groups are fenced separately and unknown-kind records are skipped;
// otherwise all records form one group. Input order is preserved.
std::vector<CoreDayRecord> boxplot_outliers(const std::vector<CoreDayRecord>& records,
                                            bool by_kind = true);

}  // namespace tokennet
