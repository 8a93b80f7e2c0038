#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "tokennet/features.hpp"
#include "tokennet/ingest.hpp"

namespace tokennet {

// Series code throughout this header represents missing observations as NaN
// (see null_value()/is_null() in features.hpp). Transforms shorten a series
// conceptually; the output stays aligned to the input with leading nulls.

enum class Transform { none, diff, log_diff, pct_change };
std::string to_string(Transform t);

enum class ADFDecision { stationary, non_stationary };

struct ADFResult {
    double stat = 0.0;
    ADFDecision decision = ADFDecision::non_stationary;
    int used_lag = 0;
    double critical_5pct = 0.0;
    bool trivial = false;  // constant input, declared stationary by convention
};

// Augmented Dickey-Fuller test with a constant term. Lag order selected by
// AIC over a common sample up to max_lag (negative means the ceil(12*(T/100)^0.25)
// default), then refit on the full sample for the chosen lag. Decision
// compares the statistic to the finite-sample 5% MacKinnon critical value.
// Requires at least 20 observations.
ADFResult adf_test(const std::vector<double>& series, int max_lag = -1);

// MacKinnon response-surface critical value for the constant-only case.
double adf_critical_value(double significance, int nobs);

struct PreparedSeries {
    std::string name;
    Transform transform = Transform::none;
    std::vector<double> values;  // aligned to input dates, min-max scaled
    double adf_stat = 0.0;
    ADFDecision adf_decision = ADFDecision::non_stationary;
    bool stationary_found = false;
    bool trivial = false;
};

// Whether a transform can be applied (log_diff needs strictly positive
// inputs, pct_change nonzero ones); nulls are ignored.
bool transform_applicable(const std::vector<double>& xs, Transform t);

// Applies a transform, keeping alignment by writing a null where the
// transform consumes the previous observation. Nulls propagate.
std::vector<double> apply_transform(const std::vector<double>& xs, Transform t);

// Min-max scaling over non-null entries; a constant series maps to 0.5.
std::vector<double> min_max_scale(const std::vector<double>& xs);

// First transform in {none, diff, log_diff, pct_change} whose ADF decision
// is stationary, then min-max scale. When none works the input is returned
// scaled with stationary_found = false, or NoStationaryTransform is thrown
// when throw_on_failure is set. Requires at least 30 observations.
PreparedSeries prepare(const std::string& name, const std::vector<double>& series,
                       bool throw_on_failure = false);

// Trailing moving average; the first window-1 entries are null, as is any
// window containing a null.
std::vector<double> moving_average(const std::vector<double>& xs, int window = 7);

enum class TargetKind {
    log_growth,  // log(x[t+h]) - log(x[t]), for prices
    pct_change,  // (x[t+h] - x[t]) / x[t], for volatility and TVL
};

// Cumulative forward growth over horizon h, aligned at t; the last h entries
// are null.
std::vector<double> horizon_target(const std::vector<double>& levels, TargetKind kind, int h);

// Plug-in Newey-West lag: floor(4*(n/100)^(2/9)).
int default_hac_lag(int n);

struct OLSFit {
    Eigen::VectorXd beta;
    Eigen::MatrixXd hac_cov;  // Bartlett-kernel HAC covariance of beta
    double r_squared = 0.0;
    double resid_se = 0.0;
    int n_obs = 0;
    int n_coef = 0;
    int lag = 0;
};

// OLS with Newey-West standard errors. X must already contain the intercept
// column. lag < 0 selects the plug-in default; lag 0 reduces to the White
// heteroskedasticity-robust estimator. Throws SingularDesign and
// InsufficientObservations (requires n > k + lag).
OLSFit ols_newey_west(const Eigen::VectorXd& y, const Eigen::MatrixXd& X, int lag = -1);

// "***" at 1%, "**" at 5%, "*" at 10%, two-sided normal critical values.
std::string significance_stars(double t_stat);

struct PCAResult {
    Eigen::MatrixXd loadings;  // n_components x n_features, rows unit norm
    std::vector<double> explained_variance_ratio;
    int n_components = 0;
    Eigen::MatrixXd scores;    // n_rows x n_components, from standardized data
    Eigen::VectorXd column_mean;
    Eigen::VectorXd column_std;  // population standard deviation
};

// PCA of the column-standardized data via eigen-decomposition of the
// correlation matrix. Sign convention: each component's largest-magnitude
// loading is positive (lowest index on ties). Throws DegenerateColumn for a
// zero-variance column and InsufficientObservations when rows <= k.
PCAResult pca(const Eigen::MatrixXd& data, int k = 3);

// Pearson correlations between columns; unit diagonal.
Eigen::MatrixXd correlation_matrix(const Eigen::MatrixXd& data);

struct RegressionRow {
    std::string dependent;
    std::string regressor;
    int horizon = 0;
    double coef = 0.0;
    double hac_se = 0.0;
    double t_stat = 0.0;
    std::string stars;
    double r_squared = 0.0;
    double resid_se = 0.0;
    int n_obs = 0;
};

struct HorizonSuiteConfig {
    std::vector<int> horizons = {1, 7, 14, 21, 28, 35, 42, 49, 56, 90};
    int hac_lag = -1;   // negative: per-regression plug-in default
    int ma_window = 7;  // applied to every regressor except cp_significance
};

struct HorizonSuiteResult {
    std::vector<RegressionRow> rows;
    std::vector<std::string> warnings;  // skipped cells with reasons
    PCAResult pca;                      // over the five regressor series
    bool pca_valid = false;
    std::vector<std::string> pca_feature_names;
};

// The paper-shaped regression grid. Regressors are built from the feature
// table with fixed transforms matching their names (differences, log
// differences), min-max scaled, and smoothed with a trailing moving average;
// cp_significance enters raw. Dependents are unscaled cumulative growths of
// price (log), volatility and TVL (percent). PCA factors 1-3 of the five
// regressor series enter one trivariate regression per dependent/horizon.
HorizonSuiteResult run_horizon_suite(const FeatureTable& features, const EconSeries& econ,
                                     const HorizonSuiteConfig& cfg = {});

void write_regressions_csv(std::ostream& out, const std::vector<RegressionRow>& rows);
void write_pca_csv(std::ostream& out, const PCAResult& pca,
                   const std::vector<std::string>& feature_names);
void write_correlations_csv(std::ostream& out, const Eigen::MatrixXd& corr,
                            const std::vector<std::string>& names);

}  // namespace tokennet
