#include "tokennet/econ.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <ostream>
#include <stdexcept>

#include "tokennet/csv.hpp"
#include "tokennet/date.hpp"
#include "tokennet/error.hpp"

namespace tokennet {

std::string to_string(Transform t) {
    switch (t) {
        case Transform::none: return "none";
        case Transform::diff: return "diff";
        case Transform::log_diff: return "log_diff";
        default: return "pct_change";
    }
}

namespace {

std::vector<double> drop_nulls(const std::vector<double>& xs) {
    std::vector<double> out;
    out.reserve(xs.size());
    for (double x : xs)
        if (!is_null(x)) out.push_back(x);
    return out;
}

// Plain OLS via rank-revealing QR. Returns false when the design is rank
// deficient, in which case only ssr/beta from the minimum-norm fit are set.
struct PlainFit {
    Eigen::VectorXd beta;
    double ssr = 0.0;
    bool full_rank = false;
};

PlainFit plain_ols(const Eigen::VectorXd& y, const Eigen::MatrixXd& X) {
    PlainFit fit;
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(X);
    qr.setThreshold(1e-10);
    fit.full_rank = qr.rank() == X.cols();
    fit.beta = qr.solve(y);
    const Eigen::VectorXd resid = y - X * fit.beta;
    fit.ssr = resid.squaredNorm();
    return fit;
}

}  // namespace

double adf_critical_value(double significance, int nobs) {
    // MacKinnon response-surface coefficients, constant-only regression
    struct Surface {
        double level, tau, b1, b2, b3;
    };
    static constexpr Surface surfaces[] = {
        {0.01, -3.43035, -6.5393, -16.786, -79.433},
        {0.05, -2.86154, -2.8903, -4.234, -40.040},
        {0.10, -2.56677, -1.5384, -2.809, 0.0},
    };
    const double t = static_cast<double>(nobs);
    for (const auto& s : surfaces) {
        if (std::abs(significance - s.level) < 1e-9)
            return s.tau + s.b1 / t + s.b2 / (t * t) + s.b3 / (t * t * t);
    }
    throw InvalidParams("critical values available at 0.01, 0.05, 0.10 only");
}

ADFResult adf_test(const std::vector<double>& series, int max_lag) {
    const std::vector<double> y = drop_nulls(series);
    const auto t0 = static_cast<int>(y.size());
    if (t0 < 20) throw SeriesTooShort(y.size(), 20);

    ADFResult res;
    const auto [mn_it, mx_it] = std::minmax_element(y.begin(), y.end());
    // a series that is constant to within float dust carries no information
    // for the regression; running it through the lag machinery only produces
    // a near-singular design, so settle it here
    const double span_tol =
        1e-12 * std::max({1.0, std::abs(*mn_it), std::abs(*mx_it)});
    if (*mx_it - *mn_it <= span_tol) {
        res.stat = 0.0;
        res.decision = ADFDecision::stationary;
        res.trivial = true;
        res.critical_5pct = adf_critical_value(0.05, t0);
        return res;
    }

    const int nd = t0 - 1;
    std::vector<double> dy(static_cast<std::size_t>(nd));
    for (int t = 0; t < nd; ++t)
        dy[static_cast<std::size_t>(t)] = y[static_cast<std::size_t>(t + 1)] -
                                          y[static_cast<std::size_t>(t)];

    int maxlag = max_lag;
    if (maxlag < 0)
        maxlag = static_cast<int>(
            std::ceil(12.0 * std::pow(static_cast<double>(t0) / 100.0, 0.25)));
    maxlag = std::min(maxlag, t0 / 2 - 2);
    if (maxlag < 0) maxlag = 0;

    // Design rows for lag p at diff index t: [1, y[t], dy[t-1..t-p]] -> dy[t].
    const auto build = [&](int p, int first_t) {
        const int rows = nd - first_t;
        Eigen::MatrixXd X(rows, 2 + p);
        Eigen::VectorXd target(rows);
        for (int i = 0; i < rows; ++i) {
            const int t = first_t + i;
            target(i) = dy[static_cast<std::size_t>(t)];
            X(i, 0) = 1.0;
            X(i, 1) = y[static_cast<std::size_t>(t)];
            for (int l = 1; l <= p; ++l) X(i, 1 + l) = dy[static_cast<std::size_t>(t - l)];
        }
        return std::pair{target, X};
    };

    // lag order by AIC over the common sample shared by all candidates
    int best_lag = 0;
    double best_aic = std::numeric_limits<double>::infinity();
    for (int p = 0; p <= maxlag; ++p) {
        const auto [target, X] = build(p, maxlag);
        const auto n = static_cast<double>(target.size());
        if (n <= static_cast<double>(X.cols())) break;
        const PlainFit fit = plain_ols(target, X);
        const double aic = fit.ssr <= 0.0
                               ? -std::numeric_limits<double>::infinity()
                               : n * std::log(fit.ssr / n) + 2.0 * static_cast<double>(X.cols());
        if (aic < best_aic) {
            best_aic = aic;
            best_lag = p;
        }
    }
    res.used_lag = best_lag;

    // refit the chosen lag on its full sample
    const auto [target, X] = build(best_lag, best_lag);
    const auto n = static_cast<int>(target.size());
    const int k = static_cast<int>(X.cols());
    res.critical_5pct = adf_critical_value(0.05, n);
    const PlainFit fit = plain_ols(target, X);
    double stat = 0.0;
    if (fit.full_rank && n > k && fit.ssr > 0.0) {
        const double s2 = fit.ssr / static_cast<double>(n - k);
        const Eigen::MatrixXd xtx_inv =
            (X.transpose() * X).ldlt().solve(Eigen::MatrixXd::Identity(k, k));
        const double se = std::sqrt(s2 * xtx_inv(1, 1));
        if (se > 0.0) stat = fit.beta(1) / se;
    }
    res.stat = stat;
    res.decision = stat < res.critical_5pct ? ADFDecision::stationary
                                            : ADFDecision::non_stationary;
    return res;
}

bool transform_applicable(const std::vector<double>& xs, Transform t) {
    if (t == Transform::log_diff) {
        for (double x : xs)
            if (!is_null(x) && x <= 0.0) return false;
    } else if (t == Transform::pct_change) {
        for (double x : xs)
            if (!is_null(x) && x == 0.0) return false;
    }
    return true;
}

std::vector<double> apply_transform(const std::vector<double>& xs, Transform t) {
    if (t == Transform::none) return xs;
    std::vector<double> out(xs.size(), null_value());
    for (std::size_t i = 1; i < xs.size(); ++i) {
        const double cur = xs[i];
        const double prev = xs[i - 1];
        if (is_null(cur) || is_null(prev)) continue;
        switch (t) {
            case Transform::diff: out[i] = cur - prev; break;
            case Transform::log_diff: out[i] = std::log(cur) - std::log(prev); break;
            case Transform::pct_change: out[i] = (cur - prev) / prev; break;
            default: break;
        }
    }
    return out;
}

std::vector<double> min_max_scale(const std::vector<double>& xs) {
    double mn = std::numeric_limits<double>::infinity();
    double mx = -std::numeric_limits<double>::infinity();
    for (double x : xs) {
        if (is_null(x)) continue;
        mn = std::min(mn, x);
        mx = std::max(mx, x);
    }
    std::vector<double> out(xs.size(), null_value());
    if (mn > mx) return out;  // all null
    const double range = mx - mn;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (is_null(xs[i])) continue;
        out[i] = range == 0.0 ? 0.5 : (xs[i] - mn) / range;
    }
    return out;
}

PreparedSeries prepare(const std::string& name, const std::vector<double>& series,
                       bool throw_on_failure) {
    const std::size_t valid = drop_nulls(series).size();
    if (valid < 30) throw SeriesTooShort(valid, 30);

    PreparedSeries out;
    out.name = name;
    for (Transform t : {Transform::none, Transform::diff, Transform::log_diff,
                        Transform::pct_change}) {
        if (!transform_applicable(series, t)) continue;
        const std::vector<double> cand = apply_transform(series, t);
        ADFResult adf;
        try {
            adf = adf_test(cand);
        } catch (const SeriesTooShort&) {
            continue;
        }
        if (t == Transform::none) {
            out.adf_stat = adf.stat;
            out.adf_decision = adf.decision;
        }
        if (adf.decision == ADFDecision::stationary) {
            out.transform = t;
            out.values = min_max_scale(cand);
            out.adf_stat = adf.stat;
            out.adf_decision = adf.decision;
            out.stationary_found = true;
            out.trivial = adf.trivial;
            return out;
        }
    }
    if (throw_on_failure) throw NoStationaryTransform(name);
    out.transform = Transform::none;
    out.values = min_max_scale(series);
    out.stationary_found = false;
    return out;
}

std::vector<double> moving_average(const std::vector<double>& xs, int window) {
    if (window < 1) throw InvalidParams("moving average window must be positive");
    std::vector<double> out(xs.size(), null_value());
    for (std::size_t i = static_cast<std::size_t>(window) - 1; i < xs.size(); ++i) {
        double sum = 0.0;
        bool ok = true;
        for (std::size_t j = i + 1 - static_cast<std::size_t>(window); j <= i; ++j) {
            if (is_null(xs[j])) {
                ok = false;
                break;
            }
            sum += xs[j];
        }
        if (ok) out[i] = sum / static_cast<double>(window);
    }
    return out;
}

std::vector<double> horizon_target(const std::vector<double>& levels, TargetKind kind, int h) {
    if (h < 1) throw InvalidParams("horizon must be positive");
    std::vector<double> out(levels.size(), null_value());
    for (std::size_t t = 0; t + static_cast<std::size_t>(h) < levels.size(); ++t) {
        const double now = levels[t];
        const double fut = levels[t + static_cast<std::size_t>(h)];
        if (is_null(now) || is_null(fut)) continue;
        if (kind == TargetKind::log_growth) {
            if (now <= 0.0 || fut <= 0.0) continue;
            out[t] = std::log(fut) - std::log(now);
        } else {
            if (now == 0.0) continue;  // growth from a zero base is undefined
            out[t] = (fut - now) / now;
        }
    }
    return out;
}

int default_hac_lag(int n) {
    return static_cast<int>(
        std::floor(4.0 * std::pow(static_cast<double>(n) / 100.0, 2.0 / 9.0)));
}

OLSFit ols_newey_west(const Eigen::VectorXd& y, const Eigen::MatrixXd& X, int lag) {
    const auto n = static_cast<int>(y.size());
    const auto k = static_cast<int>(X.cols());
    if (X.rows() != n) throw InvalidParams("y and X row counts differ");
    if (lag < 0) lag = default_hac_lag(n);
    if (n <= k + lag) throw InsufficientObservations(static_cast<std::size_t>(n),
                                                    static_cast<std::size_t>(k + lag));

    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(X);
    qr.setThreshold(1e-10);
    if (qr.rank() < k) throw SingularDesign();

    OLSFit fit;
    fit.n_obs = n;
    fit.n_coef = k;
    fit.lag = lag;
    fit.beta = qr.solve(y);

    const Eigen::VectorXd e = y - X * fit.beta;
    const double ssr = e.squaredNorm();
    const double mean_y = y.mean();
    const double sst = (y.array() - mean_y).square().sum();
    fit.r_squared = sst > 0.0 ? std::clamp(1.0 - ssr / sst, 0.0, 1.0) : 0.0;
    fit.resid_se = n > k ? std::sqrt(ssr / static_cast<double>(n - k)) : 0.0;

    // Bartlett-kernel HAC sandwich, no small-sample correction
    Eigen::MatrixXd s = Eigen::MatrixXd::Zero(k, k);
    for (int t = 0; t < n; ++t) {
        const Eigen::VectorXd xt = X.row(t).transpose();
        s.noalias() += e(t) * e(t) * xt * xt.transpose();
    }
    for (int l = 1; l <= lag; ++l) {
        const double w = 1.0 - static_cast<double>(l) / static_cast<double>(lag + 1);
        Eigen::MatrixXd gamma = Eigen::MatrixXd::Zero(k, k);
        for (int t = l; t < n; ++t) {
            const Eigen::VectorXd xt = X.row(t).transpose();
            const Eigen::VectorXd xs = X.row(t - l).transpose();
            gamma.noalias() += e(t) * e(t - l) * xt * xs.transpose();
        }
        s.noalias() += w * (gamma + gamma.transpose());
    }
    const Eigen::MatrixXd xtx_inv =
        (X.transpose() * X).ldlt().solve(Eigen::MatrixXd::Identity(k, k));
    fit.hac_cov = xtx_inv * s * xtx_inv;
    return fit;
}

std::string significance_stars(double t_stat) {
    const double a = std::abs(t_stat);
    if (!(a >= 0.0)) return "";  // NaN guard
    if (a >= 2.576) return "***";
    if (a >= 1.96) return "**";
    if (a >= 1.645) return "*";
    return "";
}

Eigen::MatrixXd correlation_matrix(const Eigen::MatrixXd& data) {
    const auto n = static_cast<int>(data.rows());
    const auto p = static_cast<int>(data.cols());
    if (n < 2) throw InsufficientObservations(static_cast<std::size_t>(n), 2);
    Eigen::MatrixXd z = data;
    std::vector<bool> degenerate(static_cast<std::size_t>(p), false);
    for (int j = 0; j < p; ++j) {
        const double mean = z.col(j).mean();
        z.col(j).array() -= mean;
        const double sd = std::sqrt(z.col(j).squaredNorm() / static_cast<double>(n));
        if (sd == 0.0) {
            degenerate[static_cast<std::size_t>(j)] = true;
        } else {
            z.col(j) /= sd;
        }
    }
    Eigen::MatrixXd corr = (z.transpose() * z) / static_cast<double>(n);
    for (int i = 0; i < p; ++i) {
        for (int j = 0; j < p; ++j) {
            if (i == j) {
                corr(i, j) = 1.0;
            } else if (degenerate[static_cast<std::size_t>(i)] ||
                       degenerate[static_cast<std::size_t>(j)]) {
                corr(i, j) = 0.0;
            }
        }
    }
    return corr;
}

PCAResult pca(const Eigen::MatrixXd& data, int k) {
    const auto n = static_cast<int>(data.rows());
    const auto p = static_cast<int>(data.cols());
    if (k < 1 || k > p) throw InvalidParams("component count out of range");
    if (n <= k) throw InsufficientObservations(static_cast<std::size_t>(n),
                                               static_cast<std::size_t>(k));

    PCAResult res;
    res.n_components = k;
    res.column_mean.resize(p);
    res.column_std.resize(p);
    Eigen::MatrixXd z = data;
    for (int j = 0; j < p; ++j) {
        res.column_mean(j) = z.col(j).mean();
        z.col(j).array() -= res.column_mean(j);
        const double sd = std::sqrt(z.col(j).squaredNorm() / static_cast<double>(n));
        if (sd == 0.0) throw DegenerateColumn(static_cast<std::size_t>(j));
        res.column_std(j) = sd;
        z.col(j) /= sd;
    }
    const Eigen::MatrixXd corr = (z.transpose() * z) / static_cast<double>(n);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(corr);
    if (eig.info() != Eigen::Success) throw Error("eigen-decomposition failed");

    res.loadings.resize(k, p);
    res.explained_variance_ratio.resize(static_cast<std::size_t>(k));
    for (int c = 0; c < k; ++c) {
        const int src = p - 1 - c;  // solver orders eigenvalues ascending
        const double lambda = std::max(eig.eigenvalues()(src), 0.0);
        res.explained_variance_ratio[static_cast<std::size_t>(c)] =
            lambda / static_cast<double>(p);
        Eigen::VectorXd v = eig.eigenvectors().col(src);
        int arg = 0;
        for (int j = 1; j < p; ++j)
            if (std::abs(v(j)) > std::abs(v(arg))) arg = j;
        if (v(arg) < 0.0) v = -v;
        res.loadings.row(c) = v.transpose();
    }
    res.scores = z * res.loadings.transpose();
    return res;
}

namespace {

struct SeriesWithName {
    std::string name;
    std::vector<double> values;
};

}  // namespace

HorizonSuiteResult run_horizon_suite(const FeatureTable& features, const EconSeries& econ,
                                     const HorizonSuiteConfig& cfg) {
    if (cfg.horizons.empty()) throw InvalidParams("horizon list is empty");
    if (!std::is_sorted(cfg.horizons.begin(), cfg.horizons.end()))
        throw InvalidParams("horizons must be ascending");

    HorizonSuiteResult out;

    // align on the date intersection of the two inputs
    std::map<Day, std::size_t> econ_by_day;
    for (std::size_t i = 0; i < econ.points.size(); ++i)
        econ_by_day.emplace(econ.points[i].date, i);
    std::vector<const FeatureRow*> frows;
    std::vector<const EconPoint*> epoints;
    for (const FeatureRow& row : features.rows) {
        const auto it = econ_by_day.find(row.date);
        if (it == econ_by_day.end()) continue;
        frows.push_back(&row);
        epoints.push_back(&econ.points[it->second]);
    }
    const std::size_t t_len = frows.size();
    if (t_len < 2) throw InsufficientObservations(t_len, 2);

    const auto feature_series = [&](double FeatureRow::* member) {
        std::vector<double> v(t_len);
        for (std::size_t i = 0; i < t_len; ++i) v[i] = frows[i]->*member;
        return v;
    };
    const auto log_or_null = [](std::vector<double> v) {
        for (double& x : v) x = (!is_null(x) && x > 0.0) ? std::log(x) : null_value();
        return v;
    };
    const auto pipeline = [&](std::vector<double> base) {
        return moving_average(min_max_scale(apply_transform(std::move(base), Transform::diff)),
                              cfg.ma_window);
    };

    // the five regressor families, transforms fixed by their names
    std::vector<SeriesWithName> regressors;
    regressors.push_back(
        {"delta_components_cnt", pipeline(feature_series(&FeatureRow::components_cnt))});
    regressors.push_back(
        {"delta_giant_com_ratio", pipeline(feature_series(&FeatureRow::giant_com_ratio))});
    regressors.push_back(
        {"delta_log_modularity",
         pipeline(log_or_null(feature_series(&FeatureRow::modularity)))});
    regressors.push_back(
        {"delta_log_dc_std", pipeline(log_or_null(feature_series(&FeatureRow::dc_std)))});
    regressors.push_back(
        {"cp_significance", feature_series(&FeatureRow::cp_significance)});

    // PCA factors over rows where all five are observed
    out.pca_feature_names.clear();
    for (const auto& r : regressors) out.pca_feature_names.push_back(r.name);
    std::vector<std::size_t> complete_rows;
    for (std::size_t i = 0; i < t_len; ++i) {
        const bool ok = std::none_of(regressors.begin(), regressors.end(),
                                     [&](const SeriesWithName& r) { return is_null(r.values[i]); });
        if (ok) complete_rows.push_back(i);
    }
    std::vector<SeriesWithName> pca_scores;
    if (complete_rows.size() > 3) {
        Eigen::MatrixXd mat(static_cast<int>(complete_rows.size()), 5);
        for (std::size_t r = 0; r < complete_rows.size(); ++r)
            for (int c = 0; c < 5; ++c)
                mat(static_cast<int>(r), c) = regressors[static_cast<std::size_t>(c)]
                                                  .values[complete_rows[r]];
        try {
            out.pca = pca(mat, 3);
            out.pca_valid = true;
            for (int c = 0; c < 3; ++c) {
                SeriesWithName s;
                s.name = "pca" + std::to_string(c + 1);
                s.values.assign(t_len, null_value());
                for (std::size_t r = 0; r < complete_rows.size(); ++r)
                    s.values[complete_rows[r]] = out.pca.scores(static_cast<int>(r), c);
                pca_scores.push_back(std::move(s));
            }
        } catch (const Error& e) {
            out.warnings.push_back(std::string("pca factors skipped: ") + e.what());
        }
    } else {
        out.warnings.push_back("pca factors skipped: fewer than 4 complete rows");
    }

    // dependents: unscaled cumulative growths of the raw levels
    struct Dependent {
        std::string name;
        TargetKind kind;
        std::vector<double> levels;
    };
    std::vector<Dependent> dependents;
    {
        std::vector<double> price(t_len), vty(t_len);
        for (std::size_t i = 0; i < t_len; ++i) {
            price[i] = epoints[i]->price_usd;
            vty[i] = epoints[i]->vty_day_ret_30d;
        }
        dependents.push_back({"return", TargetKind::log_growth, std::move(price)});
        dependents.push_back({"volatility", TargetKind::pct_change, std::move(vty)});
        if (econ.has_tvl) {
            std::vector<double> tvl(t_len);
            for (std::size_t i = 0; i < t_len; ++i)
                tvl[i] = epoints[i]->tvl_usd ? *epoints[i]->tvl_usd : null_value();
            dependents.push_back({"tvl", TargetKind::pct_change, std::move(tvl)});
        } else {
            out.warnings.push_back("tvl block skipped: econ series has no tvlUSD column");
        }
    }

    // enumerate cells in deterministic order, then fit them in parallel
    struct Cell {
        std::size_t dep;
        int horizon;
        int reg;  // index into regressors, or -1 for the pca trivariate cell
    };
    std::vector<Cell> cells;
    for (std::size_t d = 0; d < dependents.size(); ++d) {
        for (int h : cfg.horizons) {
            for (std::size_t r = 0; r < regressors.size(); ++r)
                cells.push_back({d, h, static_cast<int>(r)});
            if (!pca_scores.empty()) cells.push_back({d, h, -1});
        }
    }

    std::vector<std::vector<RegressionRow>> cell_rows(cells.size());
    std::vector<std::string> cell_warnings(cells.size());
    std::vector<std::exception_ptr> cell_errors(cells.size());

#pragma omp parallel for schedule(dynamic)
    for (std::size_t ci = 0; ci < cells.size(); ++ci) {
        const Cell& cell = cells[ci];
        const Dependent& dep = dependents[cell.dep];
        try {
            const std::vector<double> y_full =
                horizon_target(dep.levels, dep.kind, cell.horizon);
            const std::vector<const SeriesWithName*> xs =
                cell.reg >= 0
                    ? std::vector<const SeriesWithName*>{&regressors[static_cast<std::size_t>(
                          cell.reg)]}
                    : std::vector<const SeriesWithName*>{&pca_scores[0], &pca_scores[1],
                                                         &pca_scores[2]};
            std::vector<std::size_t> rows;
            for (std::size_t i = 0; i < t_len; ++i) {
                if (is_null(y_full[i])) continue;
                const bool ok = std::all_of(xs.begin(), xs.end(), [&](const SeriesWithName* s) {
                    return !is_null(s->values[i]);
                });
                if (ok) rows.push_back(i);
            }
            const std::string cell_name = dep.name + "/" +
                                          (cell.reg >= 0 ? xs[0]->name : std::string("pca")) +
                                          "/h=" + std::to_string(cell.horizon);
            if (rows.empty()) {
                cell_warnings[ci] = "cell " + cell_name + " skipped: no aligned observations";
                continue;
            }
            const auto n = static_cast<int>(rows.size());
            const auto k = static_cast<int>(xs.size()) + 1;
            Eigen::VectorXd y(n);
            Eigen::MatrixXd X(n, k);
            for (int i = 0; i < n; ++i) {
                y(i) = y_full[rows[static_cast<std::size_t>(i)]];
                X(i, 0) = 1.0;
                for (std::size_t j = 0; j < xs.size(); ++j)
                    X(i, 1 + static_cast<int>(j)) = xs[j]->values[rows[static_cast<std::size_t>(i)]];
            }
            OLSFit fit;
            try {
                fit = ols_newey_west(y, X, cfg.hac_lag);
            } catch (const SingularDesign&) {
                // a constant regressor (for example a fully significant year)
                // leaves nothing to estimate in this cell
                cell_warnings[ci] = "cell " + cell_name + " skipped: design not full rank";
                continue;
            } catch (const InsufficientObservations& e) {
                cell_warnings[ci] = "cell " + cell_name + " skipped: " + e.what();
                continue;
            } catch (const Error& e) {
                throw Error("cell " + cell_name + ": " + e.what());
            }
            for (std::size_t j = 0; j < xs.size(); ++j) {
                RegressionRow row;
                row.dependent = dep.name;
                row.regressor = xs[j]->name;
                row.horizon = cell.horizon;
                row.coef = fit.beta(1 + static_cast<int>(j));
                row.hac_se = std::sqrt(
                    std::max(fit.hac_cov(1 + static_cast<int>(j), 1 + static_cast<int>(j)), 0.0));
                row.t_stat = row.hac_se > 0.0 ? row.coef / row.hac_se : 0.0;
                row.stars = significance_stars(row.t_stat);
                row.r_squared = fit.r_squared;
                row.resid_se = fit.resid_se;
                row.n_obs = fit.n_obs;
                cell_rows[ci].push_back(std::move(row));
            }
        } catch (...) {
            cell_errors[ci] = std::current_exception();
        }
    }

    for (std::size_t ci = 0; ci < cells.size(); ++ci) {
        if (cell_errors[ci]) std::rethrow_exception(cell_errors[ci]);
        if (!cell_warnings[ci].empty()) out.warnings.push_back(cell_warnings[ci]);
        for (auto& row : cell_rows[ci]) out.rows.push_back(std::move(row));
    }
    return out;
}

void write_regressions_csv(std::ostream& out, const std::vector<RegressionRow>& rows) {
    out << "dependent,regressor,horizon,coef,hac_se,t,stars,r2,resid_se,n\n";
    for (const auto& r : rows) {
        out << r.dependent << ',' << r.regressor << ',' << r.horizon << ','
            << csv::format_double(r.coef) << ',' << csv::format_double(r.hac_se) << ','
            << csv::format_double(r.t_stat) << ',' << r.stars << ','
            << csv::format_double(r.r_squared) << ',' << csv::format_double(r.resid_se) << ','
            << r.n_obs << '\n';
    }
}

void write_pca_csv(std::ostream& out, const PCAResult& pca,
                   const std::vector<std::string>& feature_names) {
    out << "component,explained_variance_ratio";
    for (const auto& name : feature_names) out << ",loading_" << name;
    out << '\n';
    for (int c = 0; c < pca.n_components; ++c) {
        out << "pca" << (c + 1) << ','
            << csv::format_double(pca.explained_variance_ratio[static_cast<std::size_t>(c)]);
        for (int j = 0; j < pca.loadings.cols(); ++j)
            out << ',' << csv::format_double(pca.loadings(c, j));
        out << '\n';
    }
}

void write_correlations_csv(std::ostream& out, const Eigen::MatrixXd& corr,
                            const std::vector<std::string>& names) {
    out << "feature";
    for (const auto& name : names) out << ',' << name;
    out << '\n';
    for (int i = 0; i < corr.rows(); ++i) {
        out << names[static_cast<std::size_t>(i)];
        for (int j = 0; j < corr.cols(); ++j) out << ',' << csv::format_double(corr(i, j));
        out << '\n';
    }
}

}  // namespace tokennet
