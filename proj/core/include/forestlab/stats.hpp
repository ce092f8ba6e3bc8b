#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "forestlab/rng.hpp"

namespace forestlab::stats {

struct MeanSe {
  double mean = 0.0;
  double se = 0.0;  // standard error of the mean (sample sd / sqrt(n))
  std::size_t n = 0;
};

MeanSe mean_se(std::span<const double> values);

struct ChiSquare {
  double statistic = 0.0;
  double degrees_of_freedom = 0.0;
  double p_value = 1.0;
};

/// Goodness of fit of observed counts against category probabilities.
ChiSquare chi_square_gof(std::span<const std::size_t> observed,
                         std::span<const double> probabilities);

/// Homogeneity of two count vectors over the same categories (2 x k
/// contingency table). Categories empty in both samples are dropped.
ChiSquare chi_square_two_sample(std::span<const std::size_t> a,
                                std::span<const std::size_t> b);

/// Two-sided permutation test for a difference in means. The p-value counts
/// the observed labelling: (1 + #{|perm diff| >= |obs diff|}) / (1 + permutations).
double permutation_p_value(std::span<const double> a, std::span<const double> b,
                           std::size_t permutations, Rng& rng);

/// Area under the ROC curve for scores of positives against negatives
/// (Mann-Whitney; ties count one half).
double auc(std::span<const double> positives, std::span<const double> negatives);

/// Kolmogorov-Smirnov distance between two empirical distributions.
double ks_distance(std::vector<double> a, std::vector<double> b);

/// Linear-interpolated quantile of the values (q in [0,1]).
double quantile(std::vector<double> values, double q);

}  // namespace forestlab::stats
