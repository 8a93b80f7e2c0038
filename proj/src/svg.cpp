#include "tokennet/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

#include "tokennet/csv.hpp"
#include "tokennet/date.hpp"
#include "tokennet/error.hpp"

namespace tokennet::svg {

namespace {

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f", v);
    return buf;
}

std::string escape(const std::string& s) {
    std::string out;
    out.reserve(s.size());
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    }
    return out;
}

void open_doc(std::ostream& out, double w, double h) {
    out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
        << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << num(w)
        << "\" height=\"" << num(h) << "\" viewBox=\"0 0 " << num(w) << ' ' << num(h)
        << "\">\n"
        << "<rect x=\"0\" y=\"0\" width=\"" << num(w) << "\" height=\"" << num(h)
        << "\" fill=\"white\"/>\n";
}

void text(std::ostream& out, double x, double y, const std::string& s, int size,
          const char* anchor = "start", const char* extra = "") {
    out << "<text x=\"" << num(x) << "\" y=\"" << num(y) << "\" font-size=\"" << size
        << "\" font-family=\"sans-serif\" text-anchor=\"" << anchor << "\"" << extra << ">"
        << escape(s) << "</text>\n";
}

void line(std::ostream& out, double x1, double y1, double x2, double y2,
          const char* stroke = "#444444", double width = 1.0) {
    out << "<line x1=\"" << num(x1) << "\" y1=\"" << num(y1) << "\" x2=\"" << num(x2)
        << "\" y2=\"" << num(y2) << "\" stroke=\"" << stroke << "\" stroke-width=\""
        << num(width) << "\"/>\n";
}

}  // namespace

void render_timeseries(std::ostream& out, const FeatureTable& table,
                       const std::vector<std::string>& columns) {
    if (columns.empty()) throw InvalidParams("no columns to plot");
    std::vector<double FeatureRow::*> members;
    for (const auto& name : columns) {
        const auto it = std::find_if(kFeatureNames.begin(), kFeatureNames.end(),
                                     [&](const char* n) { return name == n; });
        if (it == kFeatureNames.end()) throw MissingColumn(name);
        members.push_back(
            kFeatureMembers[static_cast<std::size_t>(it - kFeatureNames.begin())]);
    }

    const int cols = 2;
    const int rows = static_cast<int>((columns.size() + 1) / 2);
    const double pw = 360, ph = 130, margin = 40, gap = 26;
    const double width = margin * 2 + cols * pw + (cols - 1) * gap;
    const double height = margin * 2 + rows * ph + (rows - 1) * gap;
    open_doc(out, width, height);

    const std::size_t t_len = table.rows.size();
    for (std::size_t p = 0; p < columns.size(); ++p) {
        const double px = margin + static_cast<double>(p % 2) * (pw + gap);
        const double py = margin + static_cast<double>(p / 2) * (ph + gap);
        double lo = 0.0, hi = 1.0;
        bool seen = false;
        for (const auto& row : table.rows) {
            const double v = row.*members[p];
            if (is_null(v)) continue;
            lo = seen ? std::min(lo, v) : v;
            hi = seen ? std::max(hi, v) : v;
            seen = true;
        }
        if (!seen) lo = 0.0, hi = 1.0;
        if (hi == lo) hi = lo + 1.0;

        out << "<rect x=\"" << num(px) << "\" y=\"" << num(py) << "\" width=\"" << num(pw)
            << "\" height=\"" << num(ph) << "\" fill=\"none\" stroke=\"#888888\"/>\n";
        text(out, px + 4, py + 12, columns[p], 11);
        text(out, px + 4, py + ph - 4, num(lo), 8);
        text(out, px + 4, py + 24, num(hi), 8);
        if (!table.rows.empty()) {
            text(out, px + pw - 4, py + ph + 12, format_day(table.rows.back().date), 8, "end");
            text(out, px + 40, py + ph + 12, format_day(table.rows.front().date), 8);
        }

        std::string points;
        const auto flush = [&]() {
            if (points.empty()) return;
            out << "<polyline fill=\"none\" stroke=\"#1f5fa8\" stroke-width=\"1\" points=\""
                << points << "\"/>\n";
            points.clear();
        };
        for (std::size_t i = 0; i < t_len; ++i) {
            const double v = table.rows[i].*members[p];
            if (is_null(v)) {
                flush();
                continue;
            }
            const double x =
                px + (t_len > 1 ? static_cast<double>(i) / static_cast<double>(t_len - 1) : 0.5) *
                         (pw - 8) +
                4;
            const double y = py + ph - 8 - (v - lo) / (hi - lo) * (ph - 30);
            if (!points.empty()) points += ' ';
            points += num(x) + "," + num(y);
        }
        flush();
    }
    out << "</svg>\n";
}

void render_heatmap(std::ostream& out, const Eigen::MatrixXd& corr,
                    const std::vector<std::string>& names) {
    const auto n = static_cast<int>(corr.rows());
    if (corr.cols() != n || static_cast<int>(names.size()) != n)
        throw InvalidParams("correlation matrix and name list disagree");
    const double cell = 26, left = 150, top = 150, legend = 30;
    const double width = left + n * cell + 40;
    const double height = top + n * cell + legend + 20;
    open_doc(out, width, height);

    for (int i = 0; i < n; ++i) {
        text(out, left - 6, top + i * cell + cell * 0.65, names[static_cast<std::size_t>(i)],
             9, "end");
        const double cx = left + i * cell + cell * 0.5;
        out << "<g transform=\"rotate(-60 " << num(cx) << ' ' << num(top - 6) << ")\">\n";
        text(out, cx, top - 6, names[static_cast<std::size_t>(i)], 9);
        out << "</g>\n";
    }
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            const double v = std::clamp(corr(i, j), -1.0, 1.0);
            // blue for -1, white for 0, red for +1
            const int r = v >= 0 ? 255 : static_cast<int>(std::lround(255 * (1.0 + v)));
            const int g = static_cast<int>(std::lround(255 * (1.0 - std::abs(v))));
            const int b = v <= 0 ? 255 : static_cast<int>(std::lround(255 * (1.0 - v)));
            const double x = left + j * cell, y = top + i * cell;
            out << "<rect x=\"" << num(x) << "\" y=\"" << num(y) << "\" width=\"" << num(cell)
                << "\" height=\"" << num(cell) << "\" fill=\"rgb(" << r << ',' << g << ','
                << b << ")\" stroke=\"#cccccc\" stroke-width=\"0.5\"/>\n";
            text(out, x + cell * 0.5, y + cell * 0.62, num(v), 6, "middle");
        }
    }
    text(out, left, top + n * cell + legend * 0.6, "-1 blue, 0 white, +1 red", 9);
    out << "</svg>\n";
}

BoxStats box_stats(const std::string& label, std::vector<double> values) {
    if (values.empty()) throw InvalidParams("box plot of empty sample");
    std::sort(values.begin(), values.end());
    BoxStats s;
    s.label = label;
    s.n = static_cast<int>(values.size());
    s.q1 = quantile_type7(values, 0.25);
    s.median = quantile_type7(values, 0.5);
    s.q3 = quantile_type7(values, 0.75);
    const double iqr = s.q3 - s.q1;
    const double lo_fence = s.q1 - 1.5 * iqr;
    const double hi_fence = s.q3 + 1.5 * iqr;
    s.whisker_lo = s.q1;
    s.whisker_hi = s.q3;
    for (double v : values) {
        if (v < lo_fence || v > hi_fence) {
            s.outliers.push_back(v);
        } else {
            s.whisker_lo = std::min(s.whisker_lo, v);
            s.whisker_hi = std::max(s.whisker_hi, v);
        }
    }
    return s;
}

void render_boxplot(std::ostream& out, const std::vector<BoxStats>& boxes,
                    const std::string& title) {
    if (boxes.empty()) throw InvalidParams("no box groups");
    const double bw = 110, margin = 60, height = 360, plot_h = 240;
    const double width = margin * 2 + bw * static_cast<double>(boxes.size());
    open_doc(out, width, height);
    text(out, width / 2, 24, title, 12, "middle");

    double lo = boxes[0].whisker_lo, hi = boxes[0].whisker_hi;
    for (const auto& b : boxes) {
        lo = std::min({lo, b.whisker_lo, b.outliers.empty() ? b.whisker_lo : b.outliers.front()});
        hi = std::max({hi, b.whisker_hi, b.outliers.empty() ? b.whisker_hi : b.outliers.back()});
        for (double o : b.outliers) {
            lo = std::min(lo, o);
            hi = std::max(hi, o);
        }
    }
    if (hi == lo) hi = lo + 1.0;
    const auto ypix = [&](double v) {
        return 40 + plot_h - (v - lo) / (hi - lo) * plot_h;
    };

    for (std::size_t i = 0; i < boxes.size(); ++i) {
        const BoxStats& b = boxes[i];
        const double cx = margin + bw * (static_cast<double>(i) + 0.5);
        const double half = 28;
        line(out, cx, ypix(b.whisker_lo), cx, ypix(b.q1));
        line(out, cx, ypix(b.q3), cx, ypix(b.whisker_hi));
        line(out, cx - half * 0.6, ypix(b.whisker_lo), cx + half * 0.6, ypix(b.whisker_lo));
        line(out, cx - half * 0.6, ypix(b.whisker_hi), cx + half * 0.6, ypix(b.whisker_hi));
        out << "<rect x=\"" << num(cx - half) << "\" y=\"" << num(ypix(b.q3)) << "\" width=\""
            << num(half * 2) << "\" height=\"" << num(ypix(b.q1) - ypix(b.q3))
            << "\" fill=\"#dce9f6\" stroke=\"#1f5fa8\"/>\n";
        line(out, cx - half, ypix(b.median), cx + half, ypix(b.median), "#1f5fa8", 1.5);
        for (double o : b.outliers) {
            out << "<circle cx=\"" << num(cx) << "\" cy=\"" << num(ypix(o))
                << "\" r=\"2.5\" fill=\"none\" stroke=\"#c0392b\"/>\n";
        }
        text(out, cx, 40 + plot_h + 18, b.label + " (n=" + std::to_string(b.n) + ")", 10,
             "middle");
    }
    text(out, margin - 6, ypix(lo) + 3, csv::format_double(lo), 8, "end");
    text(out, margin - 6, ypix(hi) + 3, csv::format_double(hi), 8, "end");
    out << "</svg>\n";
}

void write_boxplot_csv(std::ostream& out, const std::vector<BoxStats>& boxes) {
    out << "group,n,q1,median,q3,whisker_lo,whisker_hi,outliers\n";
    for (const auto& b : boxes) {
        out << b.label << ',' << b.n << ',' << csv::format_double(b.q1) << ','
            << csv::format_double(b.median) << ',' << csv::format_double(b.q3) << ','
            << csv::format_double(b.whisker_lo) << ',' << csv::format_double(b.whisker_hi)
            << ',';
        for (std::size_t i = 0; i < b.outliers.size(); ++i) {
            if (i) out << ';';
            out << csv::format_double(b.outliers[i]);
        }
        out << '\n';
    }
}

}  // namespace tokennet::svg
