#include "tokennet/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <unordered_map>

#include "tokennet/cp.hpp"
#include "tokennet/csv.hpp"
#include "tokennet/error.hpp"
#include "tokennet/graph.hpp"
#include "tokennet/rng.hpp"
#include "tokennet/svg.hpp"
#include "tokennet/synth.hpp"

namespace tokennet {

namespace {

namespace fs = std::filesystem;

std::ifstream open_input(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open " + path);
    return in;
}

std::ofstream open_output(const fs::path& path) {
    if (!path.parent_path().empty()) fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path.string());
    return out;
}

void finish_output(std::ofstream& out, const fs::path& path) {
    out.flush();
    if (!out) throw Error("failed writing " + path.string());
}

std::uint64_t day_stream(Day day) {
    return static_cast<std::uint64_t>(static_cast<std::uint32_t>(day));
}

FeatureRow all_null_row(Day day) {
    FeatureRow row;
    row.date = day;
    for (auto member : kFeatureMembers) row.*member = null_value();
    return row;
}

LabelMap load_labels(const RunConfig& cfg) {
    if (cfg.labels_path.empty()) return {};
    auto in = open_input(cfg.labels_path);
    return parse_labels(in);
}

}  // namespace

std::map<Day, std::vector<TransferRecord>> load_transfer_days(const RunConfig& cfg) {
    auto in = open_input(cfg.transfers_path);
    if (in.peek() == std::istream::traits_type::eof())
        throw Error("no days: " + cfg.transfers_path + " is empty");
    const bool jsonl = cfg.transfers_path.size() > 6 &&
                       cfg.transfers_path.rfind(".jsonl") == cfg.transfers_path.size() - 6;
    const auto records =
        parse_transfers(in, jsonl ? TransferFormat::jsonl : TransferFormat::csv);
    auto buckets = bucket_by_day(records);
    if (buckets.empty()) throw Error("no days: " + cfg.transfers_path + " holds no records");
    return buckets;
}

DailyComputation compute_daily_features(
    const std::map<Day, std::vector<TransferRecord>>& buckets, const RunConfig& cfg,
    bool counterfactual) {
    if (buckets.empty()) throw Error("no days");
    if (cfg.n_rand < 19) throw InvalidParams("n_rand must be at least 19");
    if (cfg.restarts < 1) throw InvalidParams("restarts must be positive");

    std::vector<Day> days;
    std::vector<const std::vector<TransferRecord>*> batches;
    days.reserve(buckets.size());
    for (const auto& [day, batch] : buckets) {
        days.push_back(day);
        batches.push_back(&batch);
    }
    const std::size_t n_days = days.size();

    // stage 1: graphs (and core removal for the counterfactual variant)
    std::vector<DailyGraph> graphs(n_days);
    std::vector<char> day_empty(n_days, 0);
    std::vector<std::exception_ptr> errors(n_days);
#pragma omp parallel for schedule(dynamic)
    for (std::size_t i = 0; i < n_days; ++i) {
        try {
            DailyGraph g = build_daily_graph(*batches[i], days[i], cfg.keep_zero_edges);
            if (counterfactual) {
                // remove the cores the baseline run would have recorded, so the
                // detection seed must match the one used there
                const CPAssignment assignment = be_detect(
                    g, derive_seed(cfg.seed, day_stream(days[i])), cfg.restarts);
                try {
                    g = remove_cores(g, assignment);
                } catch (const EmptyCounterfactual&) {
                    day_empty[i] = 1;
                }
            }
            if (!day_empty[i]) graphs[i] = std::move(g);
        } catch (...) {
            errors[i] = std::current_exception();
        }
    }
    for (const auto& err : errors)
        if (err) std::rethrow_exception(err);

    // stage 2: optional global top-10 address set, ranked by summed daily degree
    std::vector<std::vector<int>> overrides(n_days);
    if (cfg.global_top10) {
        std::unordered_map<std::string, long long> total_degree;
        for (std::size_t i = 0; i < n_days; ++i) {
            if (day_empty[i]) continue;
            const DailyGraph& g = graphs[i];
            for (int v = 0; v < g.num_nodes(); ++v)
                total_degree[g.nodes[static_cast<std::size_t>(v)]] += g.degree(v);
        }
        std::vector<std::pair<long long, std::string>> ranked;
        ranked.reserve(total_degree.size());
        for (const auto& [addr, deg] : total_degree) ranked.emplace_back(-deg, addr);
        std::sort(ranked.begin(), ranked.end());
        if (ranked.size() > 10) ranked.resize(10);
        for (std::size_t i = 0; i < n_days; ++i) {
            if (day_empty[i]) continue;
            for (const auto& [neg_deg, addr] : ranked) {
                const int idx = graphs[i].node_index(addr);
                if (idx >= 0) overrides[i].push_back(idx);
            }
            std::sort(overrides[i].begin(), overrides[i].end());
        }
    }

    // stage 3: detection, significance, and the feature rows
    std::vector<FeatureRow> rows(n_days);
    std::vector<DayAssignment> assignments(n_days);
    std::vector<char> has_assignment(n_days, 0);
#pragma omp parallel for schedule(dynamic)
    for (std::size_t i = 0; i < n_days; ++i) {
        try {
            if (day_empty[i]) {
                rows[i] = all_null_row(days[i]);
                continue;
            }
            const DailyGraph& g = graphs[i];
            std::uint64_t seed = derive_seed(cfg.seed, day_stream(days[i]));
            if (counterfactual) seed = derive_seed(seed, 1);
            const std::vector<int>* top =
                cfg.global_top10 ? &overrides[i] : nullptr;
            if (g.num_nodes() < 3) {
                rows[i] = feature_row(g, nullptr, nullptr, seed,
                                      ModularityMethod::greedy, top);
                continue;
            }
            // the single-pair assignment drives significance, core_cnt, and the
            // core-day records alike, so reuse the one detected by the test
            CPTestResult qs;
            CPAssignment assignment;
            bool have_qs = true;
            try {
                qs = qs_significance(g, CPAlgorithm::borgatti_everett, cfg.n_rand, seed,
                                     cfg.restarts);
                assignment = qs.observed;
            } catch (const RewireFailure&) {
                have_qs = false;
                assignment = be_detect(g, seed, cfg.restarts);
            }
            rows[i] = feature_row(g, have_qs ? &qs : nullptr, &assignment, seed,
                                  ModularityMethod::greedy, top);
            assignments[i] = {g.nodes, assignment};
            has_assignment[i] = 1;
        } catch (...) {
            errors[i] = std::current_exception();
        }
    }
    for (const auto& err : errors)
        if (err) std::rethrow_exception(err);

    DailyComputation out;
    out.table.rows = std::move(rows);
    for (std::size_t i = 0; i < n_days; ++i)
        if (has_assignment[i]) out.assignments.emplace(days[i], std::move(assignments[i]));
    return out;
}

Eigen::MatrixXd feature_correlations(const FeatureTable& table,
                                     std::vector<std::string>& names_out) {
    names_out.assign(kFeatureNames.begin(), kFeatureNames.end());
    const auto p = static_cast<int>(kFeatureCount);
    Eigen::MatrixXd corr = Eigen::MatrixXd::Zero(p, p);
    for (int i = 0; i < p; ++i) {
        corr(i, i) = 1.0;
        for (int j = i + 1; j < p; ++j) {
            double sx = 0, sy = 0, sxx = 0, syy = 0, sxy = 0;
            long long n = 0;
            for (const FeatureRow& row : table.rows) {
                const double x = row.*kFeatureMembers[static_cast<std::size_t>(i)];
                const double y = row.*kFeatureMembers[static_cast<std::size_t>(j)];
                if (is_null(x) || is_null(y)) continue;
                sx += x;
                sy += y;
                sxx += x * x;
                syy += y * y;
                sxy += x * y;
                ++n;
            }
            double r = 0.0;
            if (n >= 2) {
                const double nd = static_cast<double>(n);
                const double cov = sxy - sx * sy / nd;
                const double vx = sxx - sx * sx / nd;
                const double vy = syy - sy * sy / nd;
                if (vx > 0.0 && vy > 0.0) r = cov / std::sqrt(vx * vy);
            }
            corr(i, j) = corr(j, i) = std::clamp(r, -1.0, 1.0);
        }
    }
    return corr;
}

void cmd_features(const RunConfig& cfg) {
    const auto buckets = load_transfer_days(cfg);
    const LabelMap labels = load_labels(cfg);
    const DailyComputation result = compute_daily_features(buckets, cfg, false);

    const fs::path out_dir(cfg.out_dir);
    auto features_out = open_output(out_dir / "features.csv");
    write_features_csv(features_out, result.table);
    finish_output(features_out, out_dir / "features.csv");

    const auto cores = core_day_counts(result.assignments, labels);
    auto cores_out = open_output(out_dir / "cores.csv");
    write_cores_csv(cores_out, cores);
    finish_output(cores_out, out_dir / "cores.csv");
}

void cmd_counterfactual(const RunConfig& cfg) {
    const auto buckets = load_transfer_days(cfg);
    const DailyComputation result = compute_daily_features(buckets, cfg, true);
    const fs::path path = fs::path(cfg.out_dir) / "counterfactual_features.csv";
    auto out = open_output(path);
    write_features_csv(out, result.table);
    finish_output(out, path);
}

void cmd_regress(const RunConfig& cfg) {
    auto features_in = open_input(cfg.features_path);
    const FeatureTable features = read_features_csv(features_in);
    auto econ_in = open_input(cfg.econ_path);
    const EconSeries econ = parse_econ_series(econ_in);

    HorizonSuiteConfig hcfg;
    hcfg.horizons = cfg.horizons;
    hcfg.hac_lag = cfg.hac_lag;
    const HorizonSuiteResult suite = run_horizon_suite(features, econ, hcfg);
    for (const auto& warning : suite.warnings) std::cerr << "warning: " << warning << '\n';

    const fs::path out_dir(cfg.out_dir);
    auto reg_out = open_output(out_dir / "regressions.csv");
    write_regressions_csv(reg_out, suite.rows);
    finish_output(reg_out, out_dir / "regressions.csv");

    if (suite.pca_valid) {
        auto pca_out = open_output(out_dir / "pca.csv");
        write_pca_csv(pca_out, suite.pca, suite.pca_feature_names);
        finish_output(pca_out, out_dir / "pca.csv");
    }

    std::vector<std::string> names;
    const Eigen::MatrixXd corr = feature_correlations(features, names);
    auto corr_out = open_output(out_dir / "correlations.csv");
    write_correlations_csv(corr_out, corr, names);
    finish_output(corr_out, out_dir / "correlations.csv");
}

void cmd_plot(const RunConfig& cfg) {
    auto features_in = open_input(cfg.features_path);
    const FeatureTable features = read_features_csv(features_in);
    const fs::path out_dir(cfg.out_dir);

    const std::vector<std::string> panels = {
        "num_nodes",       "num_edges",  "components_cnt", "giant_com_ratio",
        "modularity",      "dc_std",     "cluster_mean",   "cp_significance"};
    auto ts_out = open_output(out_dir / "features_timeseries.svg");
    svg::render_timeseries(ts_out, features, panels);
    finish_output(ts_out, out_dir / "features_timeseries.svg");
    {
        FeatureTable subset;
        subset.rows = features.rows;
        auto data_out = open_output(out_dir / "features_timeseries_data.csv");
        write_features_csv(data_out, subset);
        finish_output(data_out, out_dir / "features_timeseries_data.csv");
    }

    std::vector<std::string> names;
    const Eigen::MatrixXd corr = feature_correlations(features, names);
    auto heat_out = open_output(out_dir / "correlation_heatmap.svg");
    svg::render_heatmap(heat_out, corr, names);
    finish_output(heat_out, out_dir / "correlation_heatmap.svg");
    auto corr_out = open_output(out_dir / "correlations.csv");
    write_correlations_csv(corr_out, corr, names);
    finish_output(corr_out, out_dir / "correlations.csv");

    if (!cfg.cores_path.empty()) {
        auto cores_in = open_input(cfg.cores_path);
        const auto records = read_cores_csv(cores_in);
        // the box plot compares the two account types, like the outlier scan;
        // with no labeled records at all it degrades to a single pooled box
        std::map<std::string, std::vector<double>> groups;
        for (const auto& rec : records)
            if (rec.kind != AccountKind::unknown)
                groups[to_string(rec.kind)].push_back(rec.core_day_count);
        if (groups.empty())
            for (const auto& rec : records)
                groups["all"].push_back(rec.core_day_count);
        std::vector<svg::BoxStats> boxes;
        for (const auto& [label, values] : groups)
            boxes.push_back(svg::box_stats(label, values));
        if (!boxes.empty()) {
            auto box_out = open_output(out_dir / "core_days_boxplot.svg");
            svg::render_boxplot(box_out, boxes, "core days per address");
            finish_output(box_out, out_dir / "core_days_boxplot.svg");
            auto box_csv = open_output(out_dir / "core_days_boxplot.csv");
            svg::write_boxplot_csv(box_csv, boxes);
            finish_output(box_csv, out_dir / "core_days_boxplot.csv");
        }
    }
}

void cmd_gen(const GenConfig& cfg) {
    const fs::path out_dir(cfg.out_dir);
    const auto date = parse_day(cfg.date);
    if (!date) throw InvalidParams("unparseable date: " + cfg.date);

    if (cfg.kind == "trajectory") {
        TrajectorySchedule schedule;
        schedule.n_nodes = cfg.n_nodes;
        schedule.coupling = cfg.coupling;
        schedule.noise_sigma = cfg.noise_sigma;
        schedule.start_day = *date;
        schedule.peak_day = cfg.peak_day;
        schedule.with_tvl = cfg.with_tvl;
        const TrajectoryResult tr = gen_trajectory(cfg.days, schedule, cfg.seed);
        auto transfers_out = open_output(out_dir / "transfers.csv");
        write_transfers_csv(transfers_out, tr.transfers);
        finish_output(transfers_out, out_dir / "transfers.csv");
        auto econ_out = open_output(out_dir / "econ.csv");
        write_econ_csv(econ_out, tr.econ);
        finish_output(econ_out, out_dir / "econ.csv");
        auto labels_out = open_output(out_dir / "labels.csv");
        write_labels_csv(labels_out, tr.labels);
        finish_output(labels_out, out_dir / "labels.csv");
        return;
    }

    DailyGraph g;
    if (cfg.kind == "planted-cp") {
        g = gen_planted_cp(cfg.n_core, cfg.n_periph, cfg.p_cc, cfg.p_cp, cfg.p_pp,
                           cfg.seed, *date);
    } else {
        GeneratorSpec spec;
        spec.archetype = archetype_from_string(cfg.kind);
        spec.n_nodes = cfg.n_nodes;
        spec.n_hubs = cfg.n_hubs;
        spec.per_hub = cfg.per_hub;
        spec.regular_degree = cfg.regular_degree;
        spec.seed = cfg.seed;
        spec.date = *date;
        g = gen_archetype(spec);
    }
    auto transfers_out = open_output(out_dir / "transfers.csv");
    write_transfers_csv(transfers_out, transfers_from_graph(g));
    finish_output(transfers_out, out_dir / "transfers.csv");
}

}  // namespace tokennet
