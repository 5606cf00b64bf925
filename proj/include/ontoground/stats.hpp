#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

namespace ontoground {

/// n subjects (rows) by k conditions (columns), no missing cells.
struct ScoreMatrix {
  std::vector<std::string> row_labels;
  std::vector<std::string> col_labels;
  std::vector<std::vector<double>> data;

  int rows() const { return static_cast<int>(data.size()); }
  int cols() const { return data.empty() ? 0 : static_cast<int>(data.front().size()); }
};

struct TestResult {
  double statistic = 0.0;
  int df = 0;
  double p_value = 1.0;
  double effect_size_w = -1.0;  // Kendall's W where applicable, else -1
  double p_corrected = -1.0;    // Bonferroni-corrected where applicable, else -1
  std::string method;
};

/// Upper regularized incomplete gamma Q(s, x), relative error <= 1e-10.
double regularized_gamma_q(double s, double x);

/// Upper tail of the chi-squared distribution with `df` degrees of freedom.
double chi_squared_sf(double x, int df);

/// Standard normal upper tail.
double normal_sf(double z);

/// Friedman rank test over rows, mean ranks for ties, standard tie
/// correction. A fully tied matrix (correction denominator zero) yields
/// statistic 0 and p = 1. Throws DegenerateInputError when the matrix
/// violates n >= 2 or k >= 2 or has ragged rows.
TestResult friedman(const ScoreMatrix& m);

/// Kendall's coefficient of concordance W = chi2 / (n (k - 1)), clipped to
/// [0, 1].
double kendalls_w(double chi2, int n, int k);

/// Two-sided Wilcoxon signed-rank test on paired samples. Zero differences
/// dropped and mean ranks for tied magnitudes; exact distribution up to 25
/// nonzero pairs, normal approximation with continuity correction above.
/// Throws TooFewPairsError below 5 nonzero pairs.
TestResult wilcoxon_signed_rank(const std::vector<double>& x, const std::vector<double>& y);

/// Number of nonzero pairs at or below which the exact distribution is used.
inline constexpr int kWilcoxonExactLimit = 25;

/// Each corrected p = min(1, p * m). `m` must cover the declared family
/// size.
std::vector<double> bonferroni(const std::vector<double>& p_values, int m);

/// Shannon entropy (bits) of the histogram of `scores` over `bin_count`
/// equal-width bins on [0, 1]. Throws EmptyInputError on empty input.
double shannon_entropy(const std::vector<double>& scores, int bin_count);

/// Exact one-tailed sign test: P(X >= successes) for X ~ Binomial(trials, 1/2).
double binomial_sign_test(int successes, int trials);

/// Table-shaped analysis of one metric's score matrix: omnibus Friedman,
/// Kendall's W, per-condition entropy, and Bonferroni-corrected post-hoc
/// Wilcoxon tests for the selected column pairs.
struct MetricStats {
  std::string metric;
  int n = 0;
  int k = 0;
  TestResult omnibus;
  double w = 0.0;
  std::map<std::string, TestResult> posthoc;           // "C1-C3" -> result
  std::map<std::string, double> entropy_by_condition;  // condition -> bits
};

MetricStats analyze_matrix(const std::string& metric, const ScoreMatrix& m,
                           const std::vector<std::pair<int, int>>& posthoc_pairs,
                           int entropy_bins);

}  // namespace ontoground
