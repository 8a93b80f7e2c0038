#include <exception>
#include <iostream>

#include <CLI11.hpp>

#include "tokennet/error.hpp"
#include "tokennet/pipeline.hpp"

namespace {

void add_common_compute_options(CLI::App* cmd, tokennet::RunConfig& cfg) {
    cmd->add_option("--transfers", cfg.transfers_path, "transfers csv or jsonl file")
        ->required();
    cmd->add_option("--labels", cfg.labels_path, "address label csv (optional)");
    cmd->add_option("--out", cfg.out_dir, "output directory");
    cmd->add_option("--seed", cfg.seed, "master random seed");
    cmd->add_option("--n-rand", cfg.n_rand, "randomizations per significance test (>= 19)");
    cmd->add_option("--restarts", cfg.restarts, "detection restarts per day");
    cmd->add_flag("--keep-zero-edges", cfg.keep_zero_edges,
                  "keep transfers with value 0 as edges");
    cmd->add_flag("--global-top10", cfg.global_top10,
                  "rank top-10 addresses over the whole run instead of per day");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"token-transfer network decentralization toolkit"};
    app.require_subcommand(1);
    app.set_config("--config", "", "TOML config file; explicit flags win");

    tokennet::RunConfig features_cfg;
    tokennet::RunConfig counter_cfg;
    tokennet::RunConfig regress_cfg;
    tokennet::RunConfig plot_cfg;
    tokennet::GenConfig gen_cfg;

    auto* c_gen = app.add_subcommand("gen", "write synthetic fixture files");
    c_gen->add_option("--archetype", gen_cfg.kind,
                      "centralized | decentralized | distributed | planted-cp | trajectory");
    c_gen->add_option("--n", gen_cfg.n_nodes, "node budget");
    c_gen->add_option("--hubs", gen_cfg.n_hubs, "hub count (decentralized)");
    c_gen->add_option("--per-hub", gen_cfg.per_hub, "leaves per hub (decentralized)");
    c_gen->add_option("--degree", gen_cfg.regular_degree, "degree (distributed)");
    c_gen->add_option("--n-core", gen_cfg.n_core, "core size (planted-cp)");
    c_gen->add_option("--n-periph", gen_cfg.n_periph, "periphery size (planted-cp)");
    c_gen->add_option("--p-cc", gen_cfg.p_cc, "core-core edge probability");
    c_gen->add_option("--p-cp", gen_cfg.p_cp, "core-periphery edge probability");
    c_gen->add_option("--p-pp", gen_cfg.p_pp, "periphery-periphery edge probability");
    c_gen->add_option("--days", gen_cfg.days, "trajectory length");
    c_gen->add_option("--coupling", gen_cfg.coupling, "price loading on the coupled series");
    c_gen->add_option("--noise-sigma", gen_cfg.noise_sigma, "log-return noise std");
    c_gen->add_option("--peak-day", gen_cfg.peak_day,
                      "most decentral day; -1 = midpoint, days-1 = monotone");
    c_gen->add_flag("--no-tvl{false}", gen_cfg.with_tvl, "omit the tvlUSD column");
    c_gen->add_option("--date", gen_cfg.date, "start date YYYY-MM-DD");
    c_gen->add_option("--out", gen_cfg.out_dir, "output directory");
    c_gen->add_option("--seed", gen_cfg.seed, "master random seed");

    auto* c_features = app.add_subcommand("features", "daily feature table and core days");
    add_common_compute_options(c_features, features_cfg);

    auto* c_counter = app.add_subcommand(
        "counterfactual", "daily features recomputed after removing detected cores");
    add_common_compute_options(c_counter, counter_cfg);

    auto* c_regress =
        app.add_subcommand("regress", "multi-horizon regressions, pca, correlations");
    c_regress->add_option("--features", regress_cfg.features_path, "features.csv input")
        ->required();
    c_regress->add_option("--econ", regress_cfg.econ_path, "econ csv input")->required();
    c_regress->add_option("--out", regress_cfg.out_dir, "output directory");
    c_regress->add_option("--hac-lag", regress_cfg.hac_lag,
                          "HAC lag; negative uses the sample-size rule");
    c_regress->add_option("--horizons", regress_cfg.horizons, "ascending day horizons")
        ->delimiter(',');

    auto* c_plot = app.add_subcommand("plot", "svg figures with data tables");
    c_plot->add_option("--features", plot_cfg.features_path, "features.csv input")->required();
    c_plot->add_option("--cores", plot_cfg.cores_path, "cores.csv input (box plot)");
    c_plot->add_option("--out", plot_cfg.out_dir, "output directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (c_gen->parsed()) tokennet::cmd_gen(gen_cfg);
        if (c_features->parsed()) tokennet::cmd_features(features_cfg);
        if (c_counter->parsed()) tokennet::cmd_counterfactual(counter_cfg);
        if (c_regress->parsed()) tokennet::cmd_regress(regress_cfg);
        if (c_plot->parsed()) tokennet::cmd_plot(plot_cfg);
    } catch (const tokennet::InvalidParams& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
