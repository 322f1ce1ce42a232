#include "eal/uncertainty.hpp"

#include <cmath>

namespace eal {

double shannon_entropy(const ProbabilityVector& pv) {
  double sum = 0.0, h = 0.0;
  for (double p : pv.p) {
    if (p < 0.0) fail(errc::bad_argument, "negative probability");
    sum += p;
    if (p > 0.0) h -= p * std::log2(p);
  }
  if (std::fabs(sum - 1.0) > 1e-6)
    fail(errc::bad_argument, "probabilities sum to " + std::to_string(sum));
  return h;
}

double least_confidence(const ProbabilityVector& pv) {
  if (pv.p.empty()) fail(errc::bad_argument, "empty probability vector");
  double best = 0.0;
  for (double p : pv.p) best = std::max(best, p);
  return 1.0 - best;
}

double discord(const MassFunction& m) {
  double d = 0.0;
  for (const FocalMass& fm : m.focal()) {
    // BetP(A) >= m(A) / |A| > 0 for focal A, so the log is always defined.
    d -= fm.mass * std::log2(betp_subset(m, fm.set));
  }
  return d;
}

double nonspecificity(const MassFunction& m) {
  double n = 0.0;
  for (const FocalMass& fm : m.focal()) n += fm.mass * std::log2(fm.set.count());
  return n;
}

double klir(const MassFunction& m, double lambda) {
  if (!(lambda >= 0.0 && lambda <= 1.0))
    fail(errc::bad_argument, "lambda must be in [0, 1]");
  return lambda * nonspecificity(m) + (1.0 - lambda) * discord(m);
}

EpistemicAleatoric evidential_epistemic_aleatoric(const MassFunction& m) {
  EpistemicAleatoric out;
  for (int w = 0; w < m.frame()->size(); ++w) {
    const FocalSet s = FocalSet::singleton(w);
    const double lo = bel(m, s);
    const double hi = pl(m, s);
    out.epistemic += std::min(hi, 1.0 - lo);
    out.aleatoric += std::min(lo, 1.0 - hi);
  }
  return out;
}

namespace {

// sup over the theta grid of min(L(theta)/L(theta_hat), 2*theta - 1), the
// plausibility that the positive class is the more probable one.  Log-space
// likelihoods keep large weights from underflowing.
double plausibility_positive(double pos, double neg, int resolution) {
  const double theta_hat = (pos + neg == 0.0) ? 0.5 : pos / (pos + neg);
  // 0 * log 0 == 0 convention at the boundary estimates.
  auto log_lik = [&](double theta) {
    double v = 0.0;
    if (pos > 0.0) v += pos * std::log(theta);
    if (neg > 0.0) v += neg * std::log(1.0 - theta);
    return v;
  };
  const double log_hat = log_lik(theta_hat);
  // theta = i / resolution keeps grids with nested resolutions bit-identical
  // on their shared points (i / r == k*i / (k*r) under IEEE division).
  double best = 0.0;
  for (int i = resolution; i >= 0; --i) {
    const double theta = static_cast<double>(i) / resolution;
    const double bound = 2.0 * theta - 1.0;
    if (bound <= best) break;  // bound only shrinks from here on
    const double ratio = std::exp(log_lik(theta) - log_hat);
    best = std::max(best, std::min(ratio, bound));
    // Left of the likelihood mode both the ratio and the bound shrink as
    // theta decreases, so no lower grid point can beat the current best.
    if (theta <= theta_hat) break;
  }
  return best;
}

}  // namespace

EpistemicAleatoric relative_likelihood_binary(double pos_weight, double neg_weight,
                                              int resolution) {
  if (pos_weight < 0.0 || neg_weight < 0.0)
    fail(errc::bad_argument, "class weights must be nonnegative");
  if (resolution < 1000)
    fail(errc::bad_argument, "grid resolution must be at least 1000");
  const double pi1 = plausibility_positive(pos_weight, neg_weight, resolution);
  // Swapping the classes mirrors the likelihood around theta = 1/2, so the
  // negative-class plausibility reuses the same search exactly.
  const double pi0 = plausibility_positive(neg_weight, pos_weight, resolution);
  return {std::min(pi1, pi0), 1.0 - std::max(pi1, pi0)};
}

const char* measure_name(Measure m) {
  switch (m) {
    case Measure::entropy: return "entropy";
    case Measure::least_confidence: return "least_confidence";
    case Measure::discord: return "discord";
    case Measure::nonspecificity: return "nonspecificity";
    case Measure::klir: return "klir";
    case Measure::evidential_epistemic: return "evidential_epistemic";
    case Measure::evidential_aleatoric: return "evidential_aleatoric";
    case Measure::rl_epistemic: return "rl_epistemic";
    case Measure::rl_aleatoric: return "rl_aleatoric";
  }
  return "unknown";
}

Measure parse_measure(const std::string& name) {
  for (Measure m : {Measure::entropy, Measure::least_confidence, Measure::discord,
                    Measure::nonspecificity, Measure::klir,
                    Measure::evidential_epistemic, Measure::evidential_aleatoric,
                    Measure::rl_epistemic, Measure::rl_aleatoric}) {
    if (name == measure_name(m)) return m;
  }
  fail(errc::schema_error, "unknown measure '" + name + "'");
}

}  // namespace eal
