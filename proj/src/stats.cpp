#include "ontoground/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "ontoground/errors.hpp"

namespace ontoground {

namespace {

constexpr double kGammaEps = 1e-15;
constexpr int kGammaMaxIter = 1000;

// Lower regularized incomplete gamma by series expansion (x < s + 1).
double gamma_p_series(double s, double x) {
  double sum = 1.0 / s;
  double term = sum;
  for (int i = 1; i < kGammaMaxIter; ++i) {
    term *= x / (s + i);
    sum += term;
    if (std::abs(term) < std::abs(sum) * kGammaEps) break;
  }
  return sum * std::exp(-x + s * std::log(x) - std::lgamma(s));
}

// Upper regularized incomplete gamma by continued fraction (x >= s + 1),
// modified Lentz.
double gamma_q_cf(double s, double x) {
  constexpr double kTiny = 1e-300;
  double b = x + 1.0 - s;
  double c = 1.0 / kTiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < kGammaMaxIter; ++i) {
    double an = -static_cast<double>(i) * (static_cast<double>(i) - s);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < kTiny) d = kTiny;
    c = b + an / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < kGammaEps) break;
  }
  return std::exp(-x + s * std::log(x) - std::lgamma(s)) * h;
}

}  // namespace

double regularized_gamma_q(double s, double x) {
  if (x < 0.0 || s <= 0.0) throw std::invalid_argument("regularized_gamma_q domain error");
  if (x == 0.0) return 1.0;
  if (x < s + 1.0) return 1.0 - gamma_p_series(s, x);
  return gamma_q_cf(s, x);
}

double chi_squared_sf(double x, int df) {
  if (df < 1) throw std::invalid_argument("chi_squared_sf requires df >= 1");
  if (x <= 0.0) return 1.0;
  return regularized_gamma_q(df / 2.0, x / 2.0);
}

double normal_sf(double z) { return 0.5 * std::erfc(z / std::sqrt(2.0)); }

namespace {

/// Mean ranks of one row (ties get the average of the positions they span).
std::vector<double> mean_ranks(const std::vector<double>& row) {
  const std::size_t k = row.size();
  std::vector<std::size_t> order(k);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return row[a] < row[b]; });
  std::vector<double> ranks(k);
  std::size_t i = 0;
  while (i < k) {
    std::size_t j = i;
    while (j + 1 < k && row[order[j + 1]] == row[order[i]]) ++j;
    double avg = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
    for (std::size_t t = i; t <= j; ++t) ranks[order[t]] = avg;
    i = j + 1;
  }
  return ranks;
}

/// Sum over tie groups of (t^3 - t) for one row.
double tie_term(const std::vector<double>& row) {
  std::vector<double> sorted = row;
  std::sort(sorted.begin(), sorted.end());
  double total = 0.0;
  std::size_t i = 0;
  while (i < sorted.size()) {
    std::size_t j = i;
    while (j + 1 < sorted.size() && sorted[j + 1] == sorted[i]) ++j;
    double t = static_cast<double>(j - i + 1);
    total += t * t * t - t;
    i = j + 1;
  }
  return total;
}

}  // namespace

TestResult friedman(const ScoreMatrix& m) {
  const int n = m.rows();
  const int k = m.cols();
  if (n < 2 || k < 2) {
    throw DegenerateInputError("friedman requires n >= 2 subjects and k >= 2 conditions");
  }
  for (const auto& row : m.data) {
    if (static_cast<int>(row.size()) != k) {
      throw DegenerateInputError("friedman requires a complete matrix (no missing cells)");
    }
  }

  std::vector<double> column_rank_sums(k, 0.0);
  double ties = 0.0;
  for (const auto& row : m.data) {
    auto ranks = mean_ranks(row);
    for (int j = 0; j < k; ++j) column_rank_sums[j] += ranks[j];
    ties += tie_term(row);
  }

  double sum_sq = 0.0;
  for (double rj : column_rank_sums) sum_sq += rj * rj;
  double stat = 12.0 / (static_cast<double>(n) * k * (k + 1)) * sum_sq -
                3.0 * static_cast<double>(n) * (k + 1);
  double correction =
      1.0 - ties / (static_cast<double>(n) * k * (static_cast<double>(k) * k - 1.0));

  TestResult result;
  result.df = k - 1;
  result.method = "friedman-chi-squared";
  if (correction <= 0.0) {
    // Every row fully tied: no discrimination at all.
    result.statistic = 0.0;
    result.p_value = 1.0;
    return result;
  }
  result.statistic = stat / correction;
  result.p_value = chi_squared_sf(result.statistic, result.df);
  return result;
}

double kendalls_w(double chi2, int n, int k) {
  if (n < 1 || k < 2) throw std::invalid_argument("kendalls_w requires n >= 1, k >= 2");
  double w = chi2 / (static_cast<double>(n) * (k - 1));
  return std::clamp(w, 0.0, 1.0);
}

TestResult wilcoxon_signed_rank(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size()) {
    throw std::invalid_argument("wilcoxon_signed_rank requires equal-length samples");
  }
  std::vector<double> diffs;
  for (std::size_t i = 0; i < x.size(); ++i) {
    double d = y[i] - x[i];
    if (d != 0.0) diffs.push_back(d);
  }
  const int n = static_cast<int>(diffs.size());
  if (n < 5) {
    throw TooFewPairsError("wilcoxon_signed_rank needs >= 5 nonzero pairs, got " +
                           std::to_string(n));
  }

  std::vector<double> magnitudes(diffs.size());
  std::transform(diffs.begin(), diffs.end(), magnitudes.begin(),
                 [](double d) { return std::abs(d); });
  auto ranks = mean_ranks(magnitudes);

  double w_plus = 0.0;
  double w_minus = 0.0;
  for (std::size_t i = 0; i < diffs.size(); ++i) {
    (diffs[i] > 0.0 ? w_plus : w_minus) += ranks[i];
  }

  TestResult result;
  result.statistic = std::min(w_plus, w_minus);
  result.df = 0;

  if (n <= kWilcoxonExactLimit) {
    // Exact distribution of W+ over all 2^n equiprobable sign assignments.
    // Mean ranks are multiples of 1/2, so doubled ranks are integers.
    std::vector<int> doubled(ranks.size());
    int max_sum = 0;
    for (std::size_t i = 0; i < ranks.size(); ++i) {
      doubled[i] = static_cast<int>(std::llround(ranks[i] * 2.0));
      max_sum += doubled[i];
    }
    std::vector<double> counts(max_sum + 1, 0.0);
    counts[0] = 1.0;
    for (int r : doubled) {
      for (int s = max_sum; s >= r; --s) counts[s] += counts[s - r];
    }
    double total = std::ldexp(1.0, n);  // 2^n
    int observed = static_cast<int>(std::llround(w_plus * 2.0));
    double below = 0.0;
    double above = 0.0;
    for (int s = 0; s <= max_sum; ++s) {
      if (s <= observed) below += counts[s];
      if (s >= observed) above += counts[s];
    }
    result.p_value = std::min(1.0, 2.0 * std::min(below, above) / total);
    result.method = "exact";
  } else {
    double mean = static_cast<double>(n) * (n + 1) / 4.0;
    double tie_adjust = 0.0;
    {
      std::vector<double> sorted = magnitudes;
      std::sort(sorted.begin(), sorted.end());
      std::size_t i = 0;
      while (i < sorted.size()) {
        std::size_t j = i;
        while (j + 1 < sorted.size() && sorted[j + 1] == sorted[i]) ++j;
        double t = static_cast<double>(j - i + 1);
        tie_adjust += t * t * t - t;
        i = j + 1;
      }
    }
    double variance =
        static_cast<double>(n) * (n + 1) * (2.0 * n + 1) / 24.0 - tie_adjust / 48.0;
    double dev = w_plus - mean;
    double cc = dev > 0.0 ? -0.5 : dev < 0.0 ? 0.5 : 0.0;  // continuity correction
    double z = (dev + cc) / std::sqrt(variance);
    result.p_value = std::min(1.0, 2.0 * normal_sf(std::abs(z)));
    result.method = "normal-approximation";
  }
  return result;
}

std::vector<double> bonferroni(const std::vector<double>& p_values, int m) {
  if (m < static_cast<int>(p_values.size())) {
    throw std::invalid_argument("bonferroni family size m smaller than the p-value count");
  }
  std::vector<double> corrected;
  corrected.reserve(p_values.size());
  for (double p : p_values) corrected.push_back(std::min(1.0, p * m));
  return corrected;
}

double shannon_entropy(const std::vector<double>& scores, int bin_count) {
  if (scores.empty()) throw EmptyInputError("shannon_entropy requires at least one score");
  if (bin_count < 2) throw std::invalid_argument("shannon_entropy requires bin_count >= 2");
  std::vector<int> histogram(bin_count, 0);
  for (double s : scores) {
    if (s < 0.0 || s > 1.0) {
      throw std::invalid_argument("shannon_entropy scores must lie in [0, 1]");
    }
    int idx = std::min(bin_count - 1, static_cast<int>(s * bin_count));
    ++histogram[idx];
  }
  double h = 0.0;
  double total = static_cast<double>(scores.size());
  for (int count : histogram) {
    if (count == 0) continue;
    double p = count / total;
    h -= p * std::log2(p);
  }
  return h;
}

double binomial_sign_test(int successes, int trials) {
  if (trials < 0 || successes < 0 || successes > trials) {
    throw std::invalid_argument("binomial_sign_test requires 0 <= successes <= trials");
  }
  if (trials == 0) return 1.0;
  if (trials <= 62) {
    // Exact: binomial coefficients fit in 64 bits up to C(62, 31).
    unsigned long long tail = 0;
    unsigned long long coeff = 1;  // C(n, 0)
    for (int i = 0; i <= trials; ++i) {
      if (i >= successes) tail += coeff;
      coeff = coeff * (trials - i) / (i + 1);
    }
    return static_cast<double>(tail) / std::ldexp(1.0, trials);
  }
  double log_half_n = trials * std::log(0.5);
  double p = 0.0;
  for (int i = successes; i <= trials; ++i) {
    double log_coeff =
        std::lgamma(trials + 1.0) - std::lgamma(i + 1.0) - std::lgamma(trials - i + 1.0);
    p += std::exp(log_coeff + log_half_n);
  }
  return std::min(1.0, p);
}

MetricStats analyze_matrix(const std::string& metric, const ScoreMatrix& m,
                           const std::vector<std::pair<int, int>>& posthoc_pairs,
                           int entropy_bins) {
  MetricStats stats;
  stats.metric = metric;
  stats.n = m.rows();
  stats.k = m.cols();
  stats.omnibus = friedman(m);
  stats.w = kendalls_w(stats.omnibus.statistic, stats.n, stats.k);
  stats.omnibus.effect_size_w = stats.w;

  std::vector<double> raw_p;
  std::vector<std::string> pair_names;
  std::vector<TestResult> pair_results;
  for (const auto& [a, b] : posthoc_pairs) {
    std::vector<double> xs, ys;
    for (const auto& row : m.data) {
      xs.push_back(row[a]);
      ys.push_back(row[b]);
    }
    std::string name = m.col_labels[a] + "-" + m.col_labels[b];
    TestResult r;
    try {
      r = wilcoxon_signed_rank(xs, ys);
    } catch (const TooFewPairsError&) {
      r.statistic = 0.0;
      r.p_value = 1.0;
      r.method = "degenerate (all differences zero)";
    }
    pair_names.push_back(name);
    pair_results.push_back(r);
    raw_p.push_back(r.p_value);
  }
  auto corrected = bonferroni(raw_p, static_cast<int>(posthoc_pairs.size()));
  for (std::size_t i = 0; i < pair_names.size(); ++i) {
    pair_results[i].p_corrected = corrected[i];
    stats.posthoc[pair_names[i]] = pair_results[i];
  }

  for (int j = 0; j < m.cols(); ++j) {
    std::vector<double> column;
    for (const auto& row : m.data) column.push_back(row[j]);
    stats.entropy_by_condition[m.col_labels[j]] = shannon_entropy(column, entropy_bins);
  }
  return stats;
}

}  // namespace ontoground
