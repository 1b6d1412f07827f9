#pragma once

#include <vector>

namespace subred {

double normal_cdf(double x);
/// Upper tail of the standard normal, accurate far into the tail.
double normal_sf(double x);

/// P[X >= x] for X ~ chi^2 with dof degrees of freedom.
double chi_square_sf(double x, double dof);

struct TestResult {
  double statistic = 0.0;
  double p_value = 1.0;
  double dof = 0.0;
};

/// Two-sample Kolmogorov-Smirnov test with the asymptotic Kolmogorov
/// distribution at effective size n m / (n + m).
TestResult ks_two_sample(std::vector<double> a, std::vector<double> b);

/// Pearson goodness of fit of observed counts against expected probabilities.
TestResult chi_square_gof(const std::vector<double>& observed,
                          const std::vector<double>& probabilities);

/// Pearson homogeneity test of two samples on equal-probability bins cut
/// from the pooled sample.
TestResult chi_square_two_sample(const std::vector<double>& a, const std::vector<double>& b,
                                 int bins);

}  // namespace subred
