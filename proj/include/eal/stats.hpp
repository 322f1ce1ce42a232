#pragma once

#include <span>
#include <vector>

#include "eal/error.hpp"
#include "eal/matrix.hpp"

namespace eal {

// Regularized incomplete beta I_x(a, b), |error| < 1e-10 over the arguments
// used here (continued-fraction evaluation).
double regularized_incomplete_beta(double a, double b, double x);
// Regularized upper incomplete gamma Q(a, x).
double regularized_gamma_q(double a, double x);

double students_t_two_sided_p(double t, int df);
double chi_squared_sf(double x, int df);
double normal_sf(double z);

struct TTestResult {
  double t = 0.0;
  double p = 1.0;
};

// Standard paired t on the differences a - b.  Identical samples give
// t=0, p=1; constant non-zero differences have no defined statistic and
// throw zero_variance.
TTestResult paired_t_test(std::span<const double> a, std::span<const double> b);

// Ranks within one row, 1 = largest value, ties averaged.
std::vector<double> average_ranks_desc(std::span<const double> row);

struct FriedmanResult {
  double statistic = 0.0;
  double p = 1.0;
};

// Rank-based Friedman chi-square over a datasets x strategies score matrix
// (average ranks for ties, no tie-correction factor: all-tie rows simply
// contribute nothing).
FriedmanResult friedman_test(const Matrix& scores);

struct WilcoxonResult {
  double w = 0.0;  // min of the positive and negative rank sums
  double p = 1.0;
  bool exact = false;
};

// Two-sided Wilcoxon signed-rank test; zero differences are dropped.  The
// exact null distribution is used for n <= 25 when no zeros were dropped and
// no |difference| ties exist, the normal approximation otherwise.
WilcoxonResult wilcoxon_signed_rank(std::span<const double> a,
                                    std::span<const double> b);

// Holm step-down adjustment; output is monotone in the ordered raw p-values
// and everywhere >= the raw values, capped at 1.
std::vector<double> holm_adjust(std::span<const double> p_raw);

struct PairwiseTest {
  int i = 0, j = 0;  // strategy column indices, i < j
  double w = 0.0;
  double p_raw = 1.0;
  double p_adjusted = 1.0;
  bool rejected = false;
};

struct CDResult {
  std::vector<double> average_rank;        // per strategy, 1 = best
  std::vector<PairwiseTest> pairwise;
  std::vector<std::vector<int>> cliques;   // maximal sets with no rejected pair
  double alpha = 0.05;
};

// Critical-difference data: pairwise Wilcoxon signed-rank tests with Holm
// correction over a datasets x strategies matrix of scores (higher = better).
CDResult wilcoxon_holm_cd(const Matrix& scores, double alpha = 0.05);

}  // namespace eal
