#pragma once

#include <string>

#include "eal/belief.hpp"

namespace eal {

// All information measures use log base 2 (bits).

double shannon_entropy(const ProbabilityVector& pv);
double least_confidence(const ProbabilityVector& pv);

// Discord: expected pignistic surprise of the focal elements,
//   D(m) = -sum_A m(A) log2 BetP(A).
double discord(const MassFunction& m);

// Non-specificity: expected set size in bits, N(m) = sum_A m(A) log2 |A|.
double nonspecificity(const MassFunction& m);

// Klir's blended measure: lambda * N(m) + (1 - lambda) * D(m), lambda in [0, 1].
double klir(const MassFunction& m, double lambda);

struct EpistemicAleatoric {
  double epistemic = 0.0;
  double aleatoric = 0.0;
};

// Interval-width decomposition for any number of classes:
//   epistemic = sum_w min(Pl({w}), 1 - Bel({w}))
//   aleatoric = sum_w min(Bel({w}), 1 - Pl({w}))
EpistemicAleatoric evidential_epistemic_aleatoric(const MassFunction& m);

// Two-class decomposition from the relative likelihood of a Bernoulli
// parameter given pos_weight successes and neg_weight failures (weights may
// be fractional).  The supremum is taken over a uniform grid of
// `resolution` + 1 points; the grid error is at most 2 / resolution.
EpistemicAleatoric relative_likelihood_binary(double pos_weight, double neg_weight,
                                              int resolution = 100000);

// Named scoring functions shared by query strategies and landscape rendering.
enum class Measure {
  entropy,
  least_confidence,
  discord,
  nonspecificity,
  klir,
  evidential_epistemic,
  evidential_aleatoric,
  rl_epistemic,
  rl_aleatoric,
};

const char* measure_name(Measure m);
Measure parse_measure(const std::string& name);  // throws schema_error

}  // namespace eal
