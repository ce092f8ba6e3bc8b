#include "forestlab/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <boost/math/distributions/chi_squared.hpp>

#include "forestlab/error.hpp"

namespace forestlab::stats {

MeanSe mean_se(std::span<const double> values) {
  MeanSe out;
  out.n = values.size();
  if (values.empty()) return out;
  out.mean = std::accumulate(values.begin(), values.end(), 0.0) /
             static_cast<double>(values.size());
  if (values.size() < 2) return out;
  double ss = 0.0;
  for (double v : values) ss += (v - out.mean) * (v - out.mean);
  const double variance = ss / static_cast<double>(values.size() - 1);
  out.se = std::sqrt(variance / static_cast<double>(values.size()));
  return out;
}

namespace {

double chi_square_upper_tail(double statistic, double df) {
  if (df <= 0.0) return 1.0;
  const boost::math::chi_squared dist(df);
  return boost::math::cdf(boost::math::complement(dist, statistic));
}

}  // namespace

ChiSquare chi_square_gof(std::span<const std::size_t> observed,
                         std::span<const double> probabilities) {
  require(observed.size() == probabilities.size(), ErrorCode::invalid_argument,
          "category count mismatch");
  const double total = std::accumulate(observed.begin(), observed.end(), 0.0);
  ChiSquare out;
  std::size_t used = 0;
  for (std::size_t i = 0; i < observed.size(); ++i) {
    const double expected = total * probabilities[i];
    if (expected <= 0.0) {
      require(observed[i] == 0, ErrorCode::invalid_argument,
              "observation in a zero-probability category");
      continue;
    }
    const double diff = static_cast<double>(observed[i]) - expected;
    out.statistic += diff * diff / expected;
    ++used;
  }
  out.degrees_of_freedom = used > 0 ? static_cast<double>(used - 1) : 0.0;
  out.p_value = chi_square_upper_tail(out.statistic, out.degrees_of_freedom);
  return out;
}

ChiSquare chi_square_two_sample(std::span<const std::size_t> a,
                                std::span<const std::size_t> b) {
  require(a.size() == b.size(), ErrorCode::invalid_argument, "category count mismatch");
  const double na = std::accumulate(a.begin(), a.end(), 0.0);
  const double nb = std::accumulate(b.begin(), b.end(), 0.0);
  const double n = na + nb;
  ChiSquare out;
  std::size_t used = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double column = static_cast<double>(a[i] + b[i]);
    if (column == 0.0) continue;
    ++used;
    const double ea = na * column / n;
    const double eb = nb * column / n;
    out.statistic += (a[i] - ea) * (a[i] - ea) / ea + (b[i] - eb) * (b[i] - eb) / eb;
  }
  out.degrees_of_freedom = used > 0 ? static_cast<double>(used - 1) : 0.0;
  out.p_value = chi_square_upper_tail(out.statistic, out.degrees_of_freedom);
  return out;
}

double permutation_p_value(std::span<const double> a, std::span<const double> b,
                           std::size_t permutations, Rng& rng) {
  if (a.empty() || b.empty()) return 1.0;
  std::vector<double> pooled(a.begin(), a.end());
  pooled.insert(pooled.end(), b.begin(), b.end());
  const double total = std::accumulate(pooled.begin(), pooled.end(), 0.0);
  auto mean_difference = [&](const std::vector<double>& values) {
    const double sum_a = std::accumulate(values.begin(), values.begin() + a.size(), 0.0);
    const double mean_a = sum_a / static_cast<double>(a.size());
    const double mean_b = (total - sum_a) / static_cast<double>(b.size());
    return std::abs(mean_a - mean_b);
  };
  const double observed = mean_difference(pooled);
  // Relative slack so floating-point reordering cannot flip ties.
  const double threshold = observed * (1.0 - 1e-12);
  std::size_t extreme = 0;
  for (std::size_t p = 0; p < permutations; ++p) {
    // Fisher-Yates on our own stream keeps the shuffle reproducible.
    for (std::size_t i = pooled.size() - 1; i > 0; --i)
      std::swap(pooled[i], pooled[rng.index(i + 1)]);
    if (mean_difference(pooled) >= threshold) ++extreme;
  }
  return static_cast<double>(1 + extreme) / static_cast<double>(1 + permutations);
}

double auc(std::span<const double> positives, std::span<const double> negatives) {
  if (positives.empty() || negatives.empty()) return 0.5;
  double wins = 0.0;
  for (double p : positives)
    for (double q : negatives) wins += p > q ? 1.0 : (p == q ? 0.5 : 0.0);
  return wins / (static_cast<double>(positives.size()) * static_cast<double>(negatives.size()));
}

double ks_distance(std::vector<double> a, std::vector<double> b) {
  if (a.empty() || b.empty()) return 0.0;
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  std::size_t i = 0;
  std::size_t j = 0;
  double best = 0.0;
  while (i < a.size() && j < b.size()) {
    const double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] <= x) ++i;
    while (j < b.size() && b[j] <= x) ++j;
    const double fa = static_cast<double>(i) / static_cast<double>(a.size());
    const double fb = static_cast<double>(j) / static_cast<double>(b.size());
    best = std::max(best, std::abs(fa - fb));
  }
  return best;
}

double quantile(std::vector<double> values, double q) {
  if (values.empty()) return 0.0;
  std::sort(values.begin(), values.end());
  const double position = q * static_cast<double>(values.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(position));
  const auto hi = std::min(lo + 1, values.size() - 1);
  const double frac = position - static_cast<double>(lo);
  return values[lo] + frac * (values[hi] - values[lo]);
}

}  // namespace forestlab::stats
