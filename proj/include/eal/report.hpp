#pragma once

#include <string>
#include <vector>

#include "eal/stats.hpp"

namespace eal {

// AUAC values of every repetition for one dataset/strategy pair.
struct SeriesResult {
  std::string dataset;
  std::string strategy;
  std::vector<double> auacs;
};

struct ComparisonTable {
  std::vector<std::string> datasets;
  std::vector<std::string> strategies;
  Matrix mean_auac;  // datasets x strategies
  std::vector<std::vector<std::vector<double>>> repetition_auacs;  // same shape
  std::vector<int> winner;             // best strategy per dataset row
  std::vector<TTestResult> best_vs_second;  // paired t per dataset row
  std::vector<bool> has_test;          // false when < 2 repetitions back a row
};

// Groups series into a rectangular table; every dataset must carry a value
// for every strategy.  Rows and columns keep first-appearance order.
ComparisonTable build_comparison(const std::vector<SeriesResult>& series);

// Markdown table in the layout of the usual AUAC comparison: one dataset per
// row, the winner bold, t statistic and p-value of best vs second last.
void render_report_markdown(const ComparisonTable& table, const std::string& path);

// Flat CSV of critical-difference data: average rank per strategy, adjusted
// p per pair, one row per clique member.  Fails on empty cliques rather than
// writing a file.
void write_cd_csv(const CDResult& cd, const std::vector<std::string>& strategies,
                  const std::string& path);

}  // namespace eal
