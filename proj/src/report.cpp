#include "eal/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>

namespace eal {

namespace {

int index_of(std::vector<std::string>& names, const std::string& name) {
  for (size_t i = 0; i < names.size(); ++i)
    if (names[i] == name) return static_cast<int>(i);
  names.push_back(name);
  return static_cast<int>(names.size()) - 1;
}

std::string fixed2(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

std::string fixed4(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.4f", v);
  return buf;
}

}  // namespace

ComparisonTable build_comparison(const std::vector<SeriesResult>& series) {
  if (series.empty()) fail(errc::degenerate_input, "no result series");
  ComparisonTable table;
  for (const SeriesResult& s : series) {
    index_of(table.datasets, s.dataset);
    index_of(table.strategies, s.strategy);
  }
  const size_t n = table.datasets.size(), k = table.strategies.size();
  table.mean_auac = Matrix(n, k);
  table.repetition_auacs.assign(n, std::vector<std::vector<double>>(k));
  for (const SeriesResult& s : series) {
    const size_t i = static_cast<size_t>(index_of(table.datasets, s.dataset));
    const size_t j = static_cast<size_t>(index_of(table.strategies, s.strategy));
    if (s.auacs.empty())
      fail(errc::degenerate_input, "series " + s.dataset + "/" + s.strategy + " is empty");
    if (!table.repetition_auacs[i][j].empty())
      fail(errc::bad_argument, "duplicate series " + s.dataset + "/" + s.strategy);
    table.repetition_auacs[i][j] = s.auacs;
    double mean = 0.0;
    for (double v : s.auacs) mean += v;
    table.mean_auac.at(i, j) = mean / static_cast<double>(s.auacs.size());
  }
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < k; ++j)
      if (table.repetition_auacs[i][j].empty())
        fail(errc::degenerate_input, "missing series " + table.datasets[i] + "/" +
                                         table.strategies[j]);

  for (size_t i = 0; i < n; ++i) {
    size_t best = 0;
    for (size_t j = 1; j < k; ++j)
      if (table.mean_auac.at(i, j) > table.mean_auac.at(i, best)) best = j;
    table.winner.push_back(static_cast<int>(best));
    if (k < 2) {  // nothing to compare the single strategy against
      table.has_test.push_back(false);
      table.best_vs_second.push_back({});
      continue;
    }
    size_t second = best == 0 ? 1 : 0;
    for (size_t j = 0; j < k; ++j) {
      if (j == best) continue;
      if (table.mean_auac.at(i, j) > table.mean_auac.at(i, second)) second = j;
    }
    const auto& a = table.repetition_auacs[i][best];
    const auto& b = table.repetition_auacs[i][second];
    if (a.size() == b.size() && a.size() >= 2) {
      table.has_test.push_back(true);
      try {
        table.best_vs_second.push_back(paired_t_test(a, b));
      } catch (const Error&) {
        // constant non-zero differences: no finite statistic to show
        table.has_test.back() = false;
        table.best_vs_second.push_back({});
      }
    } else {
      table.has_test.push_back(false);
      table.best_vs_second.push_back({});
    }
  }
  return table;
}

void render_report_markdown(const ComparisonTable& table, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(errc::io_error, "cannot write " + path);
  out << "| Dataset |";
  for (const std::string& s : table.strategies) out << " " << s << " |";
  out << " t | p |\n";
  out << "|---|";
  for (size_t j = 0; j < table.strategies.size(); ++j) out << "---|";
  out << "---|---|\n";
  for (size_t i = 0; i < table.datasets.size(); ++i) {
    out << "| " << table.datasets[i] << " |";
    for (size_t j = 0; j < table.strategies.size(); ++j) {
      const std::string cell = fixed2(table.mean_auac.at(i, j));
      if (static_cast<int>(j) == table.winner[i])
        out << " **" << cell << "** |";
      else
        out << " " << cell << " |";
    }
    if (table.has_test[i])
      out << " " << fixed2(std::fabs(table.best_vs_second[i].t)) << " | "
          << fixed4(table.best_vs_second[i].p) << " |\n";
    else
      out << " - | - |\n";
  }
  if (!out) fail(errc::io_error, "write failed for " + path);
}

void write_cd_csv(const CDResult& cd, const std::vector<std::string>& strategies,
                  const std::string& path) {
  if (cd.cliques.empty()) fail(errc::degenerate_input, "no cliques to report");
  if (cd.average_rank.size() != strategies.size())
    fail(errc::bad_argument, "strategy names do not match the CD data");
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(errc::io_error, "cannot write " + path);
  out << "record,a,b,value,flag\n";
  for (size_t j = 0; j < strategies.size(); ++j)
    out << "rank," << strategies[j] << ",," << fixed4(cd.average_rank[j]) << ",\n";
  for (const PairwiseTest& pt : cd.pairwise)
    out << "pair," << strategies[static_cast<size_t>(pt.i)] << ","
        << strategies[static_cast<size_t>(pt.j)] << "," << fixed4(pt.p_adjusted)
        << (pt.rejected ? ",rejected" : ",kept") << "\n";
  for (size_t c = 0; c < cd.cliques.size(); ++c)
    for (int member : cd.cliques[c])
      out << "clique," << c << "," << strategies[static_cast<size_t>(member)] << ",,\n";
  if (!out) fail(errc::io_error, "write failed for " + path);
}

}  // namespace eal
