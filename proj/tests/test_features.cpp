#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "tokennet/cp.hpp"
#include "tokennet/error.hpp"
#include "tokennet/features.hpp"
#include "tokennet/graph.hpp"
#include "tokennet/ingest.hpp"
#include "tokennet/synth.hpp"

using namespace tokennet;

namespace {

const Day kDay = 18628;

DailyGraph two_triangles() {
    return graph_from_edges(kDay, {{"a", "b", 1}, {"b", "c", 1}, {"a", "c", 1},
                                   {"d", "e", 1}, {"e", "f", 1}, {"d", "f", 1}});
}

CoreDayRecord core_rec(std::string addr, AccountKind kind, int count) {
    return {std::move(addr), kind, count};
}

}  // namespace

TEST_CASE("the null sentinel is distinct from every real value") {
    CHECK(is_null(null_value()));
    CHECK_FALSE(is_null(0.0));
    CHECK_FALSE(is_null(-1.0));
    CHECK(kFeatureCount == 24);
    CHECK(std::string(kFeatureNames.front()) == "num_nodes");
    CHECK(std::string(kFeatureNames[20]) == "cp_test_pvalue");
    CHECK(std::string(kFeatureNames.back()) == "avg_core_neighbor");
}

TEST_CASE("a feature row for an ideal planted day carries the full profile") {
    const auto g = gen_planted_cp(3, 9, 1.0, 1.0, 0.0, 5, kDay);
    const auto qs = qs_significance(g, CPAlgorithm::borgatti_everett, 39, 7);
    const auto row = feature_row(g, &qs, &qs.observed, 7);
    CHECK(row.date == kDay);
    CHECK(row.num_nodes == 12.0);
    CHECK(row.num_edges == 30.0);  // 3 core dyads plus 27 spokes, all present
    CHECK(row.components_cnt == 1.0);
    CHECK(row.giant_com_ratio == 1.0);
    // the ideal day is the unique graph with its degree sequence, so every
    // degree-preserving null ties the observed quality and the p-value is 1;
    // the row must carry exactly what the test produced
    CHECK(row.cp_test_pvalue == 1.0);
    CHECK(row.cp_significance == 0.0);
    CHECK(row.cp_test_pvalue == qs.p_value);
    CHECK(row.cp_significance == (qs.significant ? 1.0 : 0.0));
    CHECK(row.core_cnt == 3.0);
    CHECK(row.avg_core_neighbor == doctest::Approx(11.0).epsilon(1e-12));
    // a dense hub-and-spoke day has no community split worth much
    CHECK(row.modularity >= -0.5);
    CHECK(row.modularity < 0.25);
    CHECK_FALSE(is_null(row.eig_mean));
    CHECK_FALSE(is_null(row.closeness_mean));
}

TEST_CASE("a feature row for two disjoint triangles is exact") {
    const auto row = feature_row(two_triangles(), nullptr, nullptr, 1);
    CHECK(row.num_nodes == 6.0);
    CHECK(row.num_edges == 6.0);
    CHECK(row.components_cnt == 2.0);
    CHECK(row.giant_com_ratio == 0.5);
    CHECK(row.modularity == 0.5);
    CHECK(row.transitivity == 1.0);
    CHECK(row.cluster_mean == 1.0);
    CHECK(row.cluster_std == 0.0);
    CHECK(row.degree_mean == 2.0);
    CHECK(row.degree_std == 0.0);
    CHECK(row.closeness_mean == doctest::Approx(0.4).epsilon(1e-12));
    CHECK(row.closeness_std == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(row.eig_mean == doctest::Approx(1.0 / std::sqrt(6.0)).epsilon(1e-9));
    // no detection inputs means the detection fields stay null
    CHECK(is_null(row.cp_test_pvalue));
    CHECK(is_null(row.cp_significance));
    CHECK(is_null(row.core_cnt));
    CHECK(is_null(row.avg_core_neighbor));
}

TEST_CASE("feature tables round-trip through csv including null cells") {
    FeatureTable table;
    const auto g1 = gen_planted_cp(3, 9, 1.0, 1.0, 0.0, 5, kDay);
    const auto qs = qs_significance(g1, CPAlgorithm::borgatti_everett, 39, 7);
    table.rows.push_back(feature_row(g1, &qs, &qs.observed, 7));
    auto g2 = two_triangles();
    g2.date = kDay + 1;
    table.rows.push_back(feature_row(g2, nullptr, nullptr, 1));

    std::ostringstream out;
    write_features_csv(out, table);
    std::istringstream in(out.str());
    const auto back = read_features_csv(in);
    REQUIRE(back.rows.size() == table.rows.size());
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        CHECK(back.rows[r].date == table.rows[r].date);
        for (auto member : kFeatureMembers) {
            const double a = table.rows[r].*member;
            const double b = back.rows[r].*member;
            if (is_null(a)) {
                CHECK(is_null(b));
            } else {
                CHECK(a == b);  // shortest-round-trip formatting is lossless
            }
        }
    }
}

TEST_CASE("feature csv readers reject structural corruption") {
    std::istringstream missing("date,num_nodes\n");
    CHECK_THROWS_AS(read_features_csv(missing), MissingColumn);

    FeatureTable table;
    auto g = two_triangles();
    table.rows.push_back(feature_row(g, nullptr, nullptr, 1));
    g.date = kDay - 1;  // backwards
    table.rows.push_back(feature_row(g, nullptr, nullptr, 1));
    std::ostringstream out;
    write_features_csv(out, table);
    std::istringstream in(out.str());
    CHECK_THROWS_AS(read_features_csv(in), MalformedRow);
}

TEST_CASE("assignment export lists one labeled row per node") {
    DayAssignment day;
    day.nodes = {"0xa", "0xb", "0xc"};
    day.assignment.labels = {CPLabel::core, CPLabel::periphery, CPLabel::periphery};
    day.assignment.pair_id = {0, 0, 1};
    std::ostringstream out;
    write_cp_assignment_csv(out, day);
    CHECK(out.str() ==
          "address,pair_id,label\n"
          "0xa,0,core\n"
          "0xb,0,periphery\n"
          "0xc,1,periphery\n");
}

TEST_CASE("core day counts accumulate over days and skip never-core nodes") {
    std::map<Day, DayAssignment> days;
    const auto add_day = [&](Day d, std::vector<std::string> nodes,
                             std::vector<CPLabel> labels) {
        DayAssignment da;
        da.nodes = std::move(nodes);
        da.assignment.labels = std::move(labels);
        da.assignment.pair_id.assign(da.nodes.size(), 0);
        days.emplace(d, std::move(da));
    };
    using L = CPLabel;
    add_day(kDay + 0, {"0xa", "0xb", "0xc"}, {L::core, L::core, L::periphery});
    add_day(kDay + 1, {"0xa", "0xb", "0xc"}, {L::core, L::periphery, L::periphery});
    add_day(kDay + 2, {"0xa", "0xc"}, {L::core, L::periphery});
    add_day(kDay + 3, {"0xb", "0xc"}, {L::periphery, L::periphery});
    add_day(kDay + 4, {"0xa", "0xb"}, {L::periphery, L::core});

    std::istringstream label_csv(
        "address,kind\n"
        "0xa,EOA\n"
        "0xb,CA\n");
    const auto labels = parse_labels(label_csv);
    const auto records = core_day_counts(days, labels);
    REQUIRE(records.size() == 2);  // 0xc was never core, so it has no record
    CHECK(records[0].address == "0xa");
    CHECK(records[0].core_day_count == 3);
    CHECK(records[0].kind == AccountKind::eoa);
    CHECK(records[1].address == "0xb");
    CHECK(records[1].core_day_count == 2);
    CHECK(records[1].kind == AccountKind::ca);
}

TEST_CASE("core day records round-trip through csv") {
    const std::vector<CoreDayRecord> records = {
        core_rec("0xa", AccountKind::eoa, 120),
        core_rec("0xb", AccountKind::ca, 45),
        core_rec("0xc", AccountKind::unknown, 3),
    };
    std::ostringstream out;
    write_cores_csv(out, records);
    std::istringstream in(out.str());
    const auto back = read_cores_csv(in);
    REQUIRE(back.size() == records.size());
    for (std::size_t i = 0; i < records.size(); ++i) {
        CHECK(back[i].address == records[i].address);
        CHECK(back[i].kind == records[i].kind);
        CHECK(back[i].core_day_count == records[i].core_day_count);
    }
    std::istringstream bad(
        "address,kind,core_day_count\n"
        "0xa,EOA,-4\n");
    CHECK_THROWS_AS(read_cores_csv(bad), MalformedRow);
}

TEST_CASE("interpolated quartiles match hand values and the oracle") {
    const std::vector<double> sorted = {1.0, 2.0, 3.0, 4.0};
    CHECK(quantile_type7(sorted, 0.25) == doctest::Approx(1.75).epsilon(1e-12));
    CHECK(quantile_type7(sorted, 0.5) == doctest::Approx(2.5).epsilon(1e-12));
    CHECK(quantile_type7(sorted, 0.75) == doctest::Approx(3.25).epsilon(1e-12));
    CHECK(quantile_type7(sorted, 0.0) == 1.0);
    CHECK(quantile_type7(sorted, 1.0) == 4.0);
    CHECK(quantile_type7({7.5}, 0.75) == 7.5);
    CHECK_THROWS_AS(quantile_type7({}, 0.5), InvalidParams);

    Rng rng(31);
    for (int trial = 0; trial < 10; ++trial) {
        std::vector<double> xs;
        const int n = 2 + static_cast<int>(rng.uniform(30));
        for (int i = 0; i < n; ++i) xs.push_back(rng.next_double() * 100.0);
        std::sort(xs.begin(), xs.end());
        for (double p : {0.1, 0.25, 0.5, 0.75, 0.9})
            CHECK(quantile_type7(xs, p) ==
                  doctest::Approx(oracle::quantile(xs, p)).epsilon(1e-12));
    }
}

TEST_CASE("box plot outliers obey the upper Tukey fence") {
    const std::vector<CoreDayRecord> pooled = {
        core_rec("0xa", AccountKind::unknown, 1), core_rec("0xb", AccountKind::unknown, 1),
        core_rec("0xc", AccountKind::unknown, 2), core_rec("0xd", AccountKind::unknown, 2),
        core_rec("0xe", AccountKind::unknown, 100),
    };
    const auto flagged = boxplot_outliers(pooled, false);
    REQUIRE(flagged.size() == 1);
    CHECK(flagged[0].address == "0xe");

    const std::vector<CoreDayRecord> flat = {
        core_rec("0xa", AccountKind::unknown, 5), core_rec("0xb", AccountKind::unknown, 5),
        core_rec("0xc", AccountKind::unknown, 5),
    };
    CHECK(boxplot_outliers(flat, false).empty());
    CHECK_THROWS_AS(boxplot_outliers({}, false), InvalidParams);
}

TEST_CASE("the kind-wise scan compares account types and ignores unlabeled rows") {
    std::vector<CoreDayRecord> records = {
        core_rec("0xa", AccountKind::eoa, 1),  core_rec("0xb", AccountKind::eoa, 1),
        core_rec("0xc", AccountKind::eoa, 2),  core_rec("0xd", AccountKind::eoa, 2),
        core_rec("0xe", AccountKind::eoa, 100),
        core_rec("0xf", AccountKind::ca, 3),   core_rec("0xg", AccountKind::ca, 3),
        core_rec("0xh", AccountKind::ca, 4),   core_rec("0xi", AccountKind::ca, 4),
        // far above the EOA fence, but unlabeled rows are outside the scan
        core_rec("0xz", AccountKind::unknown, 50),
    };
    const auto flagged = boxplot_outliers(records, true);
    REQUIRE(flagged.size() == 1);
    CHECK(flagged[0].address == "0xe");
    CHECK(flagged[0].kind == AccountKind::eoa);
}
