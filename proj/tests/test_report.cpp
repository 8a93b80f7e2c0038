#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "oracles.hpp"
#include "svg_check.hpp"
#include "tokennet/error.hpp"
#include "tokennet/features.hpp"
#include "tokennet/rng.hpp"
#include "tokennet/svg.hpp"

using namespace tokennet;

namespace {

const Day kDay = 18628;

FeatureRow sparse_row(Day date, double nodes) {
    FeatureRow row;
    row.date = date;
    for (auto member : kFeatureMembers) row.*member = null_value();
    row.num_nodes = nodes;
    return row;
}

std::size_t count_of(const std::string& hay, const std::string& needle) {
    std::size_t n = 0, pos = 0;
    while ((pos = hay.find(needle, pos)) != std::string::npos) {
        ++n;
        pos += needle.size();
    }
    return n;
}

}  // namespace

TEST_CASE("box summaries follow the five-number recipe") {
    const auto s = svg::box_stats("grp", {100.0, 2.0, 1.0, 4.0, 3.0});
    CHECK(s.label == "grp");
    CHECK(s.n == 5);
    CHECK(s.q1 == 2.0);
    CHECK(s.median == 3.0);
    CHECK(s.q3 == 4.0);
    // the fences sit at [-1, 7], so 100 falls out and the whiskers clip to
    // the remaining data range
    CHECK(s.whisker_lo == 1.0);
    CHECK(s.whisker_hi == 4.0);
    REQUIRE(s.outliers.size() == 1);
    CHECK(s.outliers[0] == 100.0);
}

TEST_CASE("clean samples have no outliers and full whiskers") {
    const auto s = svg::box_stats("grp", {5.0, 1.0, 2.0, 3.0, 4.0});
    CHECK(s.q1 == 2.0);
    CHECK(s.q3 == 4.0);
    CHECK(s.whisker_lo == 1.0);
    CHECK(s.whisker_hi == 5.0);
    CHECK(s.outliers.empty());
}

TEST_CASE("outliers can fall below the box and stay sorted") {
    const auto s = svg::box_stats("grp", {-50.0, 10.0, 11.0, 12.0, 13.0});
    CHECK(s.q1 == 10.0);
    CHECK(s.whisker_lo == 10.0);
    CHECK(s.whisker_hi == 13.0);
    REQUIRE(s.outliers.size() == 1);
    CHECK(s.outliers[0] == -50.0);

    const auto both = svg::box_stats("grp", {200.0, 1.0, 2.0, 3.0, 4.0, 5.0, -100.0});
    REQUIRE(both.outliers.size() == 2);
    CHECK(both.outliers[0] == -100.0);
    CHECK(both.outliers[1] == 200.0);
}

TEST_CASE("a single observation is its own box") {
    const auto s = svg::box_stats("one", {5.0});
    CHECK(s.n == 1);
    CHECK(s.q1 == 5.0);
    CHECK(s.median == 5.0);
    CHECK(s.q3 == 5.0);
    CHECK(s.whisker_lo == 5.0);
    CHECK(s.whisker_hi == 5.0);
    CHECK(s.outliers.empty());
    CHECK_THROWS_AS(svg::box_stats("none", {}), InvalidParams);
}

TEST_CASE("box quartiles agree with the interpolation oracle") {
    Rng rng(31);
    std::vector<double> values(41);
    for (double& v : values) v = rng.normal() * 10.0;
    const auto s = svg::box_stats("rand", values);
    std::vector<double> sorted = values;
    std::sort(sorted.begin(), sorted.end());
    CHECK(s.q1 == doctest::Approx(oracle::quantile(sorted, 0.25)).epsilon(1e-12));
    CHECK(s.median == doctest::Approx(oracle::quantile(sorted, 0.5)).epsilon(1e-12));
    CHECK(s.q3 == doctest::Approx(oracle::quantile(sorted, 0.75)).epsilon(1e-12));
}

TEST_CASE("timeseries panels break their lines at null stretches") {
    FeatureTable table;
    for (int t = 0; t < 10; ++t) {
        const bool hole = t == 4 || t == 5;
        table.rows.push_back(sparse_row(kDay + t, hole ? null_value() : 1.0 + t));
    }
    std::ostringstream out;
    svg::render_timeseries(out, table, {"num_nodes"});
    const std::string s = out.str();
    CHECK(svg_check::well_formed(s));
    CHECK(s.find("num_nodes") != std::string::npos);
    CHECK(count_of(s, "<polyline") == 2);
    CHECK(s.find(format_day(kDay)) != std::string::npos);
    CHECK(s.find(format_day(kDay + 9)) != std::string::npos);
}

TEST_CASE("unknown panel names are refused by name") {
    FeatureTable table;
    table.rows.push_back(sparse_row(kDay, 3.0));
    std::ostringstream out;
    try {
        svg::render_timeseries(out, table, {"num_nodes", "betweenness"});
        FAIL("expected MissingColumn");
    } catch (const MissingColumn& e) {
        CHECK(e.column == "betweenness");
    }
    CHECK_THROWS_AS(svg::render_timeseries(out, table, {}), InvalidParams);
}

TEST_CASE("heatmap cells carry their values and endpoint colors") {
    Eigen::MatrixXd corr(2, 2);
    corr << 1.0, -0.5, -0.5, 1.0;
    std::ostringstream out;
    svg::render_heatmap(out, corr, {"alpha", "beta"});
    const std::string s = out.str();
    CHECK(svg_check::well_formed(s));
    CHECK(s.find(">1.00</text>") != std::string::npos);
    CHECK(s.find(">-0.50</text>") != std::string::npos);
    CHECK(s.find("rgb(255,0,0)") != std::string::npos);      // +1 is pure red
    CHECK(s.find("rgb(128,128,255)") != std::string::npos);  // -0.5 leans blue
    CHECK(s.find("alpha") != std::string::npos);

    CHECK_THROWS_AS(svg::render_heatmap(out, corr, {"only-one"}), InvalidParams);
}

TEST_CASE("markup in labels is escaped, not emitted") {
    Eigen::MatrixXd corr = Eigen::MatrixXd::Identity(1, 1);
    std::ostringstream out;
    svg::render_heatmap(out, corr, {"<b>&\"x\""});
    const std::string s = out.str();
    CHECK(svg_check::well_formed(s));
    CHECK(s.find("&lt;b&gt;&amp;&quot;x&quot;") != std::string::npos);
}

TEST_CASE("box plots draw one circle per outlier") {
    const std::vector<svg::BoxStats> boxes = {
        svg::box_stats("eoa", {100.0, 2.0, 1.0, 4.0, 3.0}),
        svg::box_stats("ca", {1.0, 2.0, 3.0}),
    };
    std::ostringstream out;
    svg::render_boxplot(out, boxes, "core days per address");
    const std::string s = out.str();
    CHECK(svg_check::well_formed(s));
    CHECK(s.find("core days per address") != std::string::npos);
    CHECK(s.find("eoa (n=5)") != std::string::npos);
    CHECK(s.find("ca (n=3)") != std::string::npos);
    CHECK(count_of(s, "<circle") == 1);

    std::ostringstream empty;
    CHECK_THROWS_AS(svg::render_boxplot(empty, {}, "t"), InvalidParams);
}

TEST_CASE("the boxplot data table prints one line per group") {
    svg::BoxStats a;
    a.label = "eoa";
    a.n = 3;
    a.q1 = 1.0;
    a.median = 2.0;
    a.q3 = 3.0;
    a.whisker_lo = 0.5;
    a.whisker_hi = 3.5;
    a.outliers = {10.0, 20.0};
    svg::BoxStats b;
    b.label = "ca";
    b.n = 2;
    b.q1 = 1.25;
    b.median = 1.5;
    b.q3 = 1.75;
    b.whisker_lo = 1.0;
    b.whisker_hi = 2.0;
    std::ostringstream out;
    svg::write_boxplot_csv(out, {a, b});
    CHECK(out.str() ==
          "group,n,q1,median,q3,whisker_lo,whisker_hi,outliers\n"
          "eoa,3,1,2,3,0.5,3.5,10;20\n"
          "ca,2,1.25,1.5,1.75,1,2,\n");
}

TEST_CASE("identical inputs render identical bytes") {
    FeatureTable table;
    Rng rng(77);
    for (int t = 0; t < 30; ++t)
        table.rows.push_back(sparse_row(kDay + t, 10.0 + 5.0 * rng.next_double()));
    std::ostringstream first, second;
    svg::render_timeseries(first, table, {"num_nodes"});
    svg::render_timeseries(second, table, {"num_nodes"});
    CHECK(first.str() == second.str());
}
