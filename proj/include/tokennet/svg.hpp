#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "tokennet/features.hpp"

// Small hand-rolled SVG renderers for the three figure families. Everything
// is emitted with fixed two-decimal coordinates so identical inputs produce
// identical bytes.
namespace tokennet::svg {

/// Grid of line panels, one per named feature column, x = row index.
/// Null stretches break the line. Throws MissingColumn for unknown names.
void render_timeseries(std::ostream& out, const FeatureTable& table,
                       const std::vector<std::string>& columns);

/// Symmetric correlation heatmap with a blue-white-red scale over [-1, 1]
/// and the numeric value printed in each cell.
void render_heatmap(std::ostream& out, const Eigen::MatrixXd& corr,
                    const std::vector<std::string>& names);

struct BoxStats {
    std::string label;
    int n = 0;
    double q1 = 0, median = 0, q3 = 0;
    double whisker_lo = 0, whisker_hi = 0;  // Tukey fences clipped to the data
    std::vector<double> outliers;           // points beyond the whiskers
};

/// Five-number summary with 1.5*IQR whiskers, quartiles by linear
/// interpolation. Throws InvalidParams on an empty sample.
BoxStats box_stats(const std::string& label, std::vector<double> values);

void render_boxplot(std::ostream& out, const std::vector<BoxStats>& boxes,
                    const std::string& title);

void write_boxplot_csv(std::ostream& out, const std::vector<BoxStats>& boxes);

}  // namespace tokennet::svg
