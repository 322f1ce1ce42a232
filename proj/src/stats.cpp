#include "eal/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace eal {

namespace {

// Lentz continued fraction for the incomplete beta (Numerical Recipes form).
double beta_continued_fraction(double a, double b, double x) {
  constexpr double eps = 1e-15, tiny = 1e-300;
  const double qab = a + b, qap = a + 1.0, qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::fabs(d) < tiny) d = tiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= 500; ++m) {
    const double m2 = 2.0 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < tiny) d = tiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < tiny) c = tiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < tiny) d = tiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < eps) break;
  }
  return h;
}

}  // namespace

double regularized_incomplete_beta(double a, double b, double x) {
  if (!(a > 0.0 && b > 0.0)) fail(errc::bad_argument, "beta parameters must be positive");
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  const double front = std::exp(std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                                a * std::log(x) + b * std::log(1.0 - x));
  if (x < (a + 1.0) / (a + b + 2.0)) return front * beta_continued_fraction(a, b, x) / a;
  return 1.0 - front * beta_continued_fraction(b, a, 1.0 - x) / b;
}

namespace {

// Lower incomplete gamma P(a, x) by series, upper Q(a, x) by continued
// fraction; split at x = a + 1 per the usual convergence regions.
double gamma_p_series(double a, double x) {
  double ap = a, sum = 1.0 / a, del = sum;
  for (int i = 0; i < 500; ++i) {
    ap += 1.0;
    del *= x / ap;
    sum += del;
    if (std::fabs(del) < std::fabs(sum) * 1e-15) break;
  }
  return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

double gamma_q_cf(double a, double x) {
  constexpr double tiny = 1e-300;
  double b = x + 1.0 - a, c = 1.0 / tiny, d = 1.0 / b, h = d;
  for (int i = 1; i <= 500; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::fabs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::fabs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < 1e-15) break;
  }
  return h * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

}  // namespace

double regularized_gamma_q(double a, double x) {
  if (!(a > 0.0)) fail(errc::bad_argument, "gamma parameter must be positive");
  if (x <= 0.0) return 1.0;
  if (x < a + 1.0) return 1.0 - gamma_p_series(a, x);
  return gamma_q_cf(a, x);
}

double students_t_two_sided_p(double t, int df) {
  if (df < 1) fail(errc::degenerate_input, "t distribution needs df >= 1");
  const double v = static_cast<double>(df);
  // 2 P(T > |t|) = I_{v/(v+t^2)}(v/2, 1/2)
  return regularized_incomplete_beta(v / 2.0, 0.5, v / (v + t * t));
}

double chi_squared_sf(double x, int df) {
  if (df < 1) fail(errc::degenerate_input, "chi-square needs df >= 1");
  if (x <= 0.0) return 1.0;
  return regularized_gamma_q(static_cast<double>(df) / 2.0, x / 2.0);
}

double normal_sf(double z) { return 0.5 * std::erfc(z / std::sqrt(2.0)); }

TTestResult paired_t_test(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) fail(errc::degenerate_input, "sample lengths differ");
  const size_t n = a.size();
  if (n < 2) fail(errc::degenerate_input, "need at least 2 pairs");
  std::vector<double> d(n);
  for (size_t i = 0; i < n; ++i) d[i] = a[i] - b[i];
  const bool constant = std::all_of(d.begin(), d.end(),
                                    [&](double v) { return v == d[0]; });
  if (constant) {
    if (d[0] == 0.0) return {0.0, 1.0};  // identical samples: no evidence
    fail(errc::zero_variance, "constant non-zero differences");
  }
  double mean = 0.0;
  for (double v : d) mean += v;
  mean /= static_cast<double>(n);
  double ss = 0.0;
  for (double v : d) ss += (v - mean) * (v - mean);
  const double sd = std::sqrt(ss / static_cast<double>(n - 1));
  const double t = mean / (sd / std::sqrt(static_cast<double>(n)));
  return {t, students_t_two_sided_p(t, static_cast<int>(n) - 1)};
}

std::vector<double> average_ranks_desc(std::span<const double> row) {
  const size_t k = row.size();
  std::vector<size_t> order(k);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](size_t x, size_t y) { return row[x] > row[y]; });
  std::vector<double> ranks(k, 0.0);
  size_t pos = 0;
  while (pos < k) {
    size_t run = pos + 1;
    while (run < k && row[order[run]] == row[order[pos]]) ++run;
    // Positions pos..run-1 (0-based) share the average 1-based rank.
    const double avg = (static_cast<double>(pos + 1) + static_cast<double>(run)) / 2.0;
    for (size_t q = pos; q < run; ++q) ranks[order[q]] = avg;
    pos = run;
  }
  return ranks;
}

FriedmanResult friedman_test(const Matrix& scores) {
  const size_t n = scores.rows, k = scores.cols;
  if (n < 2 || k < 2) fail(errc::degenerate_input, "need >= 2 datasets and strategies");
  std::vector<double> totals(k, 0.0);
  for (size_t i = 0; i < n; ++i) {
    const std::vector<double> ranks = average_ranks_desc(scores.row(i));
    for (size_t j = 0; j < k; ++j) totals[j] += ranks[j];
  }
  double sumsq = 0.0;
  for (double r : totals) sumsq += r * r;
  const double kn = static_cast<double>(k), nn = static_cast<double>(n);
  const double stat = 12.0 / (nn * kn * (kn + 1.0)) * sumsq - 3.0 * nn * (kn + 1.0);
  return {stat, chi_squared_sf(stat, static_cast<int>(k) - 1)};
}

WilcoxonResult wilcoxon_signed_rank(std::span<const double> a,
                                    std::span<const double> b) {
  if (a.size() != b.size()) fail(errc::degenerate_input, "sample lengths differ");
  if (a.empty()) fail(errc::degenerate_input, "empty samples");
  std::vector<double> d;
  bool dropped_zero = false;
  for (size_t i = 0; i < a.size(); ++i) {
    const double v = a[i] - b[i];
    if (v == 0.0)
      dropped_zero = true;
    else
      d.push_back(v);
  }
  const size_t n = d.size();
  if (n == 0) return {0.0, 1.0, true};  // indistinguishable samples

  std::vector<size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](size_t x, size_t y) {
    return std::fabs(d[x]) < std::fabs(d[y]);
  });
  std::vector<double> rank(n, 0.0);
  bool has_ties = false;
  std::vector<size_t> tie_sizes;
  size_t pos = 0;
  while (pos < n) {
    size_t run = pos + 1;
    while (run < n && std::fabs(d[order[run]]) == std::fabs(d[order[pos]])) ++run;
    if (run - pos > 1) has_ties = true;
    tie_sizes.push_back(run - pos);
    const double avg = (static_cast<double>(pos + 1) + static_cast<double>(run)) / 2.0;
    for (size_t q = pos; q < run; ++q) rank[order[q]] = avg;
    pos = run;
  }
  double w_plus = 0.0;
  for (size_t i = 0; i < n; ++i)
    if (d[i] > 0.0) w_plus += rank[i];
  const double total = static_cast<double>(n) * static_cast<double>(n + 1) / 2.0;
  const double w = std::min(w_plus, total - w_plus);

  if (!dropped_zero && !has_ties && n <= 25) {
    // Exact null: counts of rank subsets by sum, 2^n equally likely signs.
    const size_t max_sum = n * (n + 1) / 2;
    std::vector<double> count(max_sum + 1, 0.0);
    count[0] = 1.0;
    for (size_t r = 1; r <= n; ++r)
      for (size_t s = max_sum; s >= r; --s) count[s] += count[s - r];
    double below = 0.0;
    const size_t limit = static_cast<size_t>(w);  // integer when no ties
    for (size_t s = 0; s <= limit && s <= max_sum; ++s) below += count[s];
    const double p = std::min(1.0, 2.0 * below / std::pow(2.0, static_cast<double>(n)));
    return {w, p, true};
  }

  double tie_term = 0.0;
  for (size_t t : tie_sizes) {
    const double tt = static_cast<double>(t);
    tie_term += tt * tt * tt - tt;
  }
  const double nn = static_cast<double>(n);
  const double mean = nn * (nn + 1.0) / 4.0;
  const double var = nn * (nn + 1.0) * (2.0 * nn + 1.0) / 24.0 - tie_term / 48.0;
  if (var <= 0.0) return {w, 1.0, false};  // all differences tie away
  const double z = (w - mean) / std::sqrt(var);
  return {w, std::min(1.0, 2.0 * normal_sf(std::fabs(z))), false};
}

std::vector<double> holm_adjust(std::span<const double> p_raw) {
  const size_t m = p_raw.size();
  std::vector<size_t> order(m);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](size_t x, size_t y) { return p_raw[x] < p_raw[y]; });
  std::vector<double> adjusted(m, 0.0);
  double running = 0.0;
  for (size_t r = 0; r < m; ++r) {
    const double scaled = static_cast<double>(m - r) * p_raw[order[r]];
    running = std::max(running, std::min(1.0, scaled));
    adjusted[order[r]] = running;
  }
  return adjusted;
}

namespace {

// Bron-Kerbosch without pivoting: k is tiny (a handful of strategies).
void bron_kerbosch(std::vector<int> r, std::vector<int> p, std::vector<int> x,
                   const std::vector<std::vector<bool>>& adj,
                   std::vector<std::vector<int>>& out) {
  if (p.empty() && x.empty()) {
    out.push_back(std::move(r));
    return;
  }
  while (!p.empty()) {
    const int v = p.front();
    std::vector<int> r2 = r, p2, x2;
    r2.push_back(v);
    for (int u : p)
      if (u != v && adj[static_cast<size_t>(v)][static_cast<size_t>(u)]) p2.push_back(u);
    for (int u : x)
      if (adj[static_cast<size_t>(v)][static_cast<size_t>(u)]) x2.push_back(u);
    bron_kerbosch(std::move(r2), std::move(p2), std::move(x2), adj, out);
    p.erase(p.begin());
    x.push_back(v);
  }
}

}  // namespace

CDResult wilcoxon_holm_cd(const Matrix& scores, double alpha) {
  const size_t n = scores.rows, k = scores.cols;
  if (n < 2 || k < 2) fail(errc::degenerate_input, "need >= 2 datasets and strategies");
  if (!(alpha > 0.0 && alpha < 1.0)) fail(errc::bad_argument, "alpha must be in (0, 1)");

  CDResult out;
  out.alpha = alpha;
  out.average_rank.assign(k, 0.0);
  for (size_t i = 0; i < n; ++i) {
    const std::vector<double> ranks = average_ranks_desc(scores.row(i));
    for (size_t j = 0; j < k; ++j) out.average_rank[j] += ranks[j];
  }
  for (double& r : out.average_rank) r /= static_cast<double>(n);

  std::vector<double> col_i(n), col_j(n), p_raw;
  for (size_t i = 0; i < k; ++i) {
    for (size_t j = i + 1; j < k; ++j) {
      for (size_t row = 0; row < n; ++row) {
        col_i[row] = scores.at(row, i);
        col_j[row] = scores.at(row, j);
      }
      const WilcoxonResult wr = wilcoxon_signed_rank(col_i, col_j);
      out.pairwise.push_back(
          {static_cast<int>(i), static_cast<int>(j), wr.w, wr.p, 1.0, false});
      p_raw.push_back(wr.p);
    }
  }
  const std::vector<double> adj = holm_adjust(p_raw);
  for (size_t t = 0; t < adj.size(); ++t) {
    out.pairwise[t].p_adjusted = adj[t];
    out.pairwise[t].rejected = adj[t] <= alpha;
  }

  std::vector<std::vector<bool>> linked(k, std::vector<bool>(k, false));
  for (size_t j = 0; j < k; ++j) linked[j][j] = true;
  for (const PairwiseTest& pt : out.pairwise)
    if (!pt.rejected) {
      linked[static_cast<size_t>(pt.i)][static_cast<size_t>(pt.j)] = true;
      linked[static_cast<size_t>(pt.j)][static_cast<size_t>(pt.i)] = true;
    }
  std::vector<int> all(k);
  std::iota(all.begin(), all.end(), 0);
  bron_kerbosch({}, std::move(all), {}, linked, out.cliques);
  for (auto& clique : out.cliques) std::sort(clique.begin(), clique.end());
  std::sort(out.cliques.begin(), out.cliques.end());
  return out;
}

}  // namespace eal
