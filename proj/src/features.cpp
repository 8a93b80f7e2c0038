#include "tokennet/features.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <ostream>

#include "tokennet/csv.hpp"
#include "tokennet/error.hpp"
#include "tokennet/graph_stats.hpp"

namespace tokennet {

double null_value() { return std::numeric_limits<double>::quiet_NaN(); }

bool is_null(double x) { return std::isnan(x); }

const std::array<const char*, kFeatureCount> kFeatureNames = {
    "num_nodes",      "num_edges",      "degree_mean",
    "degree_std",     "top10_degree_mean", "top10_degree_std",
    "top10_degree_mean_ratio", "relative_degree", "dc_mean",
    "dc_std",         "cluster_mean",   "cluster_std",
    "modularity",     "transitivity",   "eig_mean",
    "eig_std",        "closeness_mean", "closeness_std",
    "giant_com_ratio", "components_cnt", "cp_test_pvalue",
    "cp_significance", "core_cnt",      "avg_core_neighbor",
};

const std::array<double FeatureRow::*, kFeatureCount> kFeatureMembers = {
    &FeatureRow::num_nodes,      &FeatureRow::num_edges,
    &FeatureRow::degree_mean,    &FeatureRow::degree_std,
    &FeatureRow::top10_degree_mean, &FeatureRow::top10_degree_std,
    &FeatureRow::top10_degree_mean_ratio, &FeatureRow::relative_degree,
    &FeatureRow::dc_mean,        &FeatureRow::dc_std,
    &FeatureRow::cluster_mean,   &FeatureRow::cluster_std,
    &FeatureRow::modularity,     &FeatureRow::transitivity,
    &FeatureRow::eig_mean,       &FeatureRow::eig_std,
    &FeatureRow::closeness_mean, &FeatureRow::closeness_std,
    &FeatureRow::giant_com_ratio, &FeatureRow::components_cnt,
    &FeatureRow::cp_test_pvalue, &FeatureRow::cp_significance,
    &FeatureRow::core_cnt,       &FeatureRow::avg_core_neighbor,
};

FeatureRow feature_row(const DailyGraph& g, const CPTestResult* cp, const CPAssignment* a,
                       std::uint64_t seed, ModularityMethod method,
                       const std::vector<int>* top_override) {
    FeatureRow row;
    row.date = g.date;
    row.num_nodes = g.num_nodes();
    row.num_edges = g.num_edges();

    const DegreeStats deg = degree_stats(g, top_override);
    row.degree_mean = deg.degree_mean;
    row.degree_std = deg.degree_std;
    row.top10_degree_mean = deg.top10_degree_mean;
    row.top10_degree_std = deg.top10_degree_std;
    row.top10_degree_mean_ratio = deg.top10_degree_mean_ratio;
    row.relative_degree = deg.relative_degree;
    row.dc_mean = deg.dc_mean;
    row.dc_std = deg.dc_std;

    const ClusteringStats cl = clustering_stats(g);
    row.cluster_mean = cl.cluster_mean;
    row.cluster_std = cl.cluster_std;
    row.transitivity = cl.transitivity;

    row.modularity = modularity(g, seed, method);

    try {
        const EigStats eig = eigenvector_centrality_stats(g);
        row.eig_mean = eig.eig_mean;
        row.eig_std = eig.eig_std;
    } catch (const NoConvergence&) {
        row.eig_mean = null_value();
        row.eig_std = null_value();
    }

    const ClosenessStats cc = closeness_centrality_stats(g);
    row.closeness_mean = cc.closeness_mean;
    row.closeness_std = cc.closeness_std;

    const ComponentPartition part = connected_components(g);
    row.components_cnt = part.count();
    row.giant_com_ratio = static_cast<double>(part.component_sizes.front()) / g.num_nodes();

    if (cp != nullptr) {
        row.cp_test_pvalue = cp->p_value;
        row.cp_significance = cp->significant ? 1.0 : 0.0;
    } else {
        row.cp_test_pvalue = null_value();
        row.cp_significance = null_value();
    }
    if (a != nullptr) {
        const CoreStats cs = core_stats(g, *a);
        row.core_cnt = cs.core_cnt;
        row.avg_core_neighbor = cs.avg_core_neighbor;
    } else {
        row.core_cnt = null_value();
        row.avg_core_neighbor = null_value();
    }
    return row;
}

void write_features_csv(std::ostream& out, const FeatureTable& table) {
    out << "date";
    for (const char* name : kFeatureNames) out << ',' << name;
    out << '\n';
    for (const FeatureRow& row : table.rows) {
        out << format_day(row.date);
        for (auto member : kFeatureMembers) {
            out << ',';
            const double v = row.*member;
            if (!is_null(v)) out << csv::format_double(v);
        }
        out << '\n';
    }
}

FeatureTable read_features_csv(std::istream& in) {
    std::string line;
    if (!csv::getline(in, line)) throw MissingColumn("date");
    const auto header = csv::split_line(line);
    if (header.empty() || header[0] != "date") throw MissingColumn("date");
    std::vector<std::size_t> member_col(kFeatureCount);
    for (std::size_t f = 0; f < kFeatureCount; ++f) {
        const auto it = std::find(header.begin(), header.end(), std::string(kFeatureNames[f]));
        if (it == header.end()) throw MissingColumn(kFeatureNames[f]);
        member_col[f] = static_cast<std::size_t>(it - header.begin());
    }

    FeatureTable table;
    std::size_t line_no = 1;
    while (csv::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        const auto fields = csv::split_line(line);
        if (fields.size() < header.size()) throw MalformedRow(line_no, "too few fields");
        FeatureRow row;
        const auto date = parse_day(fields[0]);
        if (!date) throw MalformedRow(line_no, "unparseable date");
        row.date = *date;
        for (std::size_t f = 0; f < kFeatureCount; ++f) {
            const std::string& cell = fields[member_col[f]];
            if (cell.empty()) {
                row.*kFeatureMembers[f] = null_value();
            } else {
                const auto v = csv::parse_double(cell);
                if (!v) throw MalformedRow(line_no, std::string("unparseable ") + kFeatureNames[f]);
                row.*kFeatureMembers[f] = *v;
            }
        }
        if (!table.rows.empty() && table.rows.back().date >= row.date)
            throw MalformedRow(line_no, "dates not strictly increasing");
        table.rows.push_back(row);
    }
    return table;
}

void write_cp_assignment_csv(std::ostream& out, const DayAssignment& day) {
    out << "address,pair_id,label\n";
    for (std::size_t v = 0; v < day.nodes.size(); ++v) {
        out << day.nodes[v] << ',' << day.assignment.pair_id[v] << ','
            << to_string(day.assignment.labels[v]) << '\n';
    }
}

std::vector<CoreDayRecord> core_day_counts(const std::map<Day, DayAssignment>& assignments,
                                           const LabelMap& labels) {
    std::map<std::string, int> counts;
    for (const auto& [day, da] : assignments) {
        for (std::size_t v = 0; v < da.nodes.size(); ++v) {
            if (da.assignment.labels[v] == CPLabel::core) ++counts[da.nodes[v]];
        }
    }
    std::vector<CoreDayRecord> records;
    records.reserve(counts.size());
    for (const auto& [address, count] : counts)
        records.push_back({address, labels.kind_of(address), count});
    std::sort(records.begin(), records.end(), [](const CoreDayRecord& a, const CoreDayRecord& b) {
        if (a.core_day_count != b.core_day_count) return a.core_day_count > b.core_day_count;
        return a.address < b.address;
    });
    return records;
}

void write_cores_csv(std::ostream& out, const std::vector<CoreDayRecord>& records) {
    out << "address,kind,core_day_count\n";
    for (const auto& rec : records)
        out << rec.address << ',' << to_string(rec.kind) << ',' << rec.core_day_count << '\n';
}

std::vector<CoreDayRecord> read_cores_csv(std::istream& in) {
    std::string line;
    if (!csv::getline(in, line)) throw MissingColumn("address");
    const auto header = csv::split_line(line);
    const auto col = [&](const char* name) {
        const auto it = std::find(header.begin(), header.end(), std::string(name));
        if (it == header.end()) throw MissingColumn(name);
        return static_cast<std::size_t>(it - header.begin());
    };
    const std::size_t c_addr = col("address");
    const std::size_t c_kind = col("kind");
    const std::size_t c_count = col("core_day_count");

    std::vector<CoreDayRecord> records;
    std::size_t line_no = 1;
    while (csv::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        const auto fields = csv::split_line(line);
        if (fields.size() < header.size()) throw MalformedRow(line_no, "too few fields");
        CoreDayRecord rec;
        rec.address = fields[c_addr];
        if (fields[c_kind] == "EOA") {
            rec.kind = AccountKind::eoa;
        } else if (fields[c_kind] == "CA") {
            rec.kind = AccountKind::ca;
        } else if (fields[c_kind] == "unknown") {
            rec.kind = AccountKind::unknown;
        } else {
            throw MalformedRow(line_no, "unknown account kind " + fields[c_kind]);
        }
        const auto count = csv::parse_int(fields[c_count]);
        if (!count || *count < 0) throw MalformedRow(line_no, "invalid core_day_count");
        rec.core_day_count = static_cast<int>(*count);
        records.push_back(std::move(rec));
    }
    return records;
}

double quantile_type7(const std::vector<double>& sorted_values, double p) {
    if (sorted_values.empty()) throw InvalidParams("quantile of empty sample");
    if (sorted_values.size() == 1) return sorted_values.front();
    const double pos = p * static_cast<double>(sorted_values.size() - 1);
    const auto lo = static_cast<std::size_t>(pos);
    if (lo + 1 >= sorted_values.size()) return sorted_values.back();
    const double frac = pos - static_cast<double>(lo);
    return sorted_values[lo] + frac * (sorted_values[lo + 1] - sorted_values[lo]);
}

std::vector<CoreDayRecord> boxplot_outliers(const std::vector<CoreDayRecord>& records,
                                            bool by_kind) {
    if (records.empty()) throw InvalidParams("outlier detection needs records");
    // the by-kind variant compares the two account types, so records of
    // unknown kind stay outside the scan
    const auto in_scope = [by_kind](const CoreDayRecord& rec) {
        return !by_kind || rec.kind != AccountKind::unknown;
    };
    std::map<AccountKind, std::vector<double>> groups;
    for (const auto& rec : records) {
        if (!in_scope(rec)) continue;
        const AccountKind key = by_kind ? rec.kind : AccountKind::unknown;
        groups[key].push_back(rec.core_day_count);
    }
    std::map<AccountKind, double> fences;
    for (auto& [kind, values] : groups) {
        std::sort(values.begin(), values.end());
        const double q1 = quantile_type7(values, 0.25);
        const double q3 = quantile_type7(values, 0.75);
        fences[kind] = q3 + 1.5 * (q3 - q1);
    }
    std::vector<CoreDayRecord> out;
    for (const auto& rec : records) {
        if (!in_scope(rec)) continue;
        const AccountKind key = by_kind ? rec.kind : AccountKind::unknown;
        if (rec.core_day_count > fences[key]) out.push_back(rec);
    }
    return out;
}

}  // namespace tokennet
