#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "lexdecline/pairs.hpp"

namespace lexdecline {

// ---------------------------------------------------------------------------
// Wilcoxon signed-rank
// ---------------------------------------------------------------------------

enum class WilcoxonMethod { Auto, Exact, Normal };

struct WilcoxonResult {
  std::size_t n_effective = 0;  // after dropping zero differences
  double w_plus = 0.0;          // sum of ranks of positive differences
  double p_two_sided = 1.0;
  WilcoxonMethod method = WilcoxonMethod::Exact;
  bool degenerate = false;  // every difference was zero
};

// Largest sample for which Auto enumerates the exact null distribution.
inline constexpr std::size_t kWilcoxonExactMax = 25;

// Zero differences are dropped, tied |d| share the average rank. The exact
// p-value is P(|W+ - E W+| >= |w - E W+|) under random signs given the ranks;
// the normal approximation is tie-corrected with a 0.5 continuity correction.
WilcoxonResult signed_rank_test(std::span<const double> diffs, WilcoxonMethod method = WilcoxonMethod::Auto);
WilcoxonResult wilcoxon_signed_rank(std::span<const double> x, std::span<const double> y,
                                    WilcoxonMethod method = WilcoxonMethod::Auto);
WilcoxonResult one_sample_wilcoxon(std::span<const double> x, double mu0 = 0.0,
                                   WilcoxonMethod method = WilcoxonMethod::Auto);

// ---------------------------------------------------------------------------
// Descriptive statistics, correlation, scaling
// ---------------------------------------------------------------------------

struct Summary {
  std::size_t n = 0;
  double mean = 0.0;
  double sd = 0.0;  // sample (n - 1) standard deviation
  double min = 0.0, q1 = 0.0, median = 0.0, q3 = 0.0, max = 0.0;
};

// Quartiles by linear interpolation between order statistics.
Summary summarize(std::span<const double> values);

// Throws DataError when either input is constant.
double pearson(std::span<const double> x, std::span<const double> y);

struct CorrelationReport {
  std::vector<std::string> names;
  Eigen::MatrixXd r;  // NaN where undefined (constant column)
  Eigen::MatrixXd p;
  std::vector<std::vector<bool>> significant;  // p < alpha / tests
  std::vector<bool> constant;
  double alpha = 0.05;
  std::size_t tests = 0;
};

// Pairwise Pearson correlation of the columns with t-test p-values and a
// Bonferroni significance mask over the k(k-1)/2 off-diagonal tests.
CorrelationReport pearson_matrix(const Eigen::MatrixXd& data, std::vector<std::string> names,
                                 double alpha = 0.05);

// (v - min) / (max - min); throws DataError for a constant input.
std::vector<double> minmax_scale(std::span<const double> values);

// ---------------------------------------------------------------------------
// Regression
// ---------------------------------------------------------------------------

struct RegressionResult {
  std::vector<std::string> names;  // "const" first for the logistic fit
  std::vector<double> coef, se, stat, p;
  double ll_model = 0.0, ll_null = 0.0;
  double pseudo_r2 = 0.0;  // McFadden for logistic, R^2 for OLS
  std::size_t iterations = 0;
  std::vector<double> ll_trace;  // objective after each iteration (logistic)
  std::vector<std::string> warnings;
};

struct LogisticOptions {
  std::size_t max_iterations = 100;
  double tolerance = 1e-10;         // on the change in log-likelihood
  double separation_limit = 50.0;   // |coef| beyond this means a divergent MLE
  double ridge = 0.0;               // L2 penalty on non-intercept coefficients
};

// Logistic regression with an intercept, fit by IRLS with step halving.
// X holds the predictors only; labels are 0/1.
RegressionResult fit_logistic(const Eigen::MatrixXd& X, std::span<const int> labels,
                              std::vector<std::string> names, const LogisticOptions& options = {});

// Probability of label 1 under fitted coefficients (intercept first).
double logistic_predict(std::span<const double> coef, std::span<const double> x);

// Columns of X that are linear combinations of the others, judged by a
// pivoted QR of the unit-norm columns (empty when X has full column rank).
std::vector<std::size_t> dependent_columns(const Eigen::MatrixXd& X);

// Least squares on the full design (include a constant column yourself).
// stat holds t statistics, pseudo_r2 holds the centered R^2.
RegressionResult ols(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, std::vector<std::string> names);

// ---------------------------------------------------------------------------
// Pair items and classification
// ---------------------------------------------------------------------------

struct PairItem {
  int label = 1;  // 1 = dec:stb order, 0 = stb:dec
  std::vector<double> diffs;
};

using FactorLookup = std::unordered_map<std::string, std::vector<double>>;

// Exactly ceil(n/2) ones, placed by a seeded shuffle.
std::vector<int> assign_pair_labels(std::size_t n, std::uint64_t seed);

// diffs = first word minus second word, per the label's order.
std::vector<PairItem> build_pair_items(std::span<const MatchedPair> pairs, const FactorLookup& factors,
                                       std::uint64_t seed);

RegressionResult fit_logistic(std::span<const PairItem> items, std::vector<std::string> names,
                              const LogisticOptions& options = {});

// Leave-one-out accuracy of ridge logistic regression. Features are
// standardized with the training rows of each fold.
double loo_accuracy(const Eigen::MatrixXd& X, std::span<const int> labels, double ridge = 1.0,
                    unsigned threads = 1);

// Pair classification over the 2n concatenated features of (first, second).
double loo_classify(std::span<const MatchedPair> pairs, const FactorLookup& factors, std::uint64_t seed,
                    double ridge = 1.0, unsigned threads = 1);

}  // namespace lexdecline
