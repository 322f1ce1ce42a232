#include "eal/selfcheck.hpp"

#include <cmath>
#include <ostream>
#include <vector>

#include "eal/active_loop.hpp"
#include "eal/belief.hpp"
#include "eal/datasets.hpp"
#include "eal/rng.hpp"
#include "eal/stats.hpp"
#include "eal/uncertainty.hpp"

namespace eal {
namespace {

// Random mass function with up to `max_focal` focal elements.
MassFunction random_mass(const FramePtr& frame, Rng& rng, int max_focal = 4) {
  const uint32_t full = FocalSet::universe(frame->size()).bits();
  const int count = 1 + static_cast<int>(rng.index(static_cast<size_t>(max_focal)));
  std::vector<FocalMass> focal;
  double total = 0.0;
  for (int i = 0; i < count; ++i) {
    uint32_t bits = 0;
    while (bits == 0) bits = static_cast<uint32_t>(rng.next_u64()) & full;
    const double w = rng.uniform01() + 1e-3;
    focal.push_back({FocalSet(bits), w});
    total += w;
  }
  for (FocalMass& fm : focal) fm.mass /= total;
  return make_mass(frame, std::move(focal), Renormalize::on);
}

struct Checker {
  std::ostream& log;
  int failures = 0;

  void check(bool ok, const char* what) {
    log << (ok ? "ok   " : "FAIL ") << what << '\n';
    failures += ok ? 0 : 1;
  }
};

}  // namespace

int run_selfcheck(std::ostream& log) {
  Checker c{log};
  Rng rng(20260825);

  {  // Belief algebra on random masses.
    bool duality = true, sandwich = true, betp_sums = true;
    for (int trial = 0; trial < 400 && duality && sandwich && betp_sums; ++trial) {
      const FramePtr frame = make_frame(2 + static_cast<int>(rng.index(5)));
      const MassFunction m = random_mass(frame, rng);
      const ProbabilityVector pv = betp(m);
      double psum = 0.0;
      for (double p : pv.p) psum += p;
      betp_sums = std::fabs(psum - 1.0) < 1e-9;
      for (int w = 0; w < frame->size(); ++w) {
        const FocalSet s = FocalSet::singleton(w);
        const double b = bel(m, s), q = pl(m, s);
        duality = duality &&
                  std::fabs(q - (1.0 - bel(m, s.complement(frame->size())))) < 1e-12;
        sandwich = sandwich && b <= pv.p[static_cast<size_t>(w)] + 1e-12 &&
                   pv.p[static_cast<size_t>(w)] <= q + 1e-12;
      }
    }
    c.check(duality, "plausibility is one minus belief of the complement");
    c.check(sandwich, "BetP lies between belief and plausibility");
    c.check(betp_sums, "pignistic probabilities sum to one");
  }

  {  // Dempster's rule basics.
    bool neutral = true, commutes = true;
    for (int trial = 0; trial < 200; ++trial) {
      const FramePtr frame = make_frame(2 + static_cast<int>(rng.index(4)));
      const MassFunction a = random_mass(frame, rng);
      const MassFunction b = random_mass(frame, rng);
      const MassFunction av = dempster_combine(a, vacuous_mass(frame));
      neutral = neutral && av.num_focal() == a.num_focal();
      for (const FocalMass& fm : a.focal())
        neutral = neutral && std::fabs(av.mass_of(fm.set) - fm.mass) < 1e-12;
      try {
        const MassFunction ab = dempster_combine(a, b);
        const MassFunction ba = dempster_combine(b, a);
        for (const FocalMass& fm : ab.focal())
          commutes = commutes && std::fabs(ba.mass_of(fm.set) - fm.mass) < 1e-12;
      } catch (const Error&) {
        // Totally conflicting draws prove nothing about commutativity; skip.
      }
    }
    c.check(neutral, "vacuous mass is neutral for Dempster's rule");
    c.check(commutes, "Dempster's rule commutes");
  }

  {  // Uncertainty measures.
    bool affine = true, bayes = true, rl_sym = true;
    for (int trial = 0; trial < 200; ++trial) {
      const FramePtr frame = make_frame(2 + static_cast<int>(rng.index(4)));
      const MassFunction m = random_mass(frame, rng);
      const double u0 = klir(m, 0.0), u1 = klir(m, 1.0);
      const double lam = rng.uniform01();
      affine = affine &&
               std::fabs(klir(m, lam) - (lam * u1 + (1.0 - lam) * u0)) < 1e-12;
      std::vector<double> p(static_cast<size_t>(frame->size()));
      double total = 0.0;
      for (double& x : p) total += (x = rng.uniform01() + 1e-3);
      for (double& x : p) x /= total;
      const MassFunction bm = bayesian_mass(frame, p);
      bayes = bayes &&
              std::fabs(discord(bm) - shannon_entropy(betp(bm))) < 1e-9 &&
              std::fabs(nonspecificity(bm)) < 1e-15;
      const double pos = rng.uniform(0.0, 8.0), neg = rng.uniform(0.0, 8.0);
      const EpistemicAleatoric fwd = relative_likelihood_binary(pos, neg, 2000);
      const EpistemicAleatoric rev = relative_likelihood_binary(neg, pos, 2000);
      rl_sym = rl_sym && fwd.epistemic == rev.epistemic &&
               fwd.aleatoric == rev.aleatoric;
    }
    c.check(affine, "Klir measure is affine in lambda");
    c.check(bayes, "Bayesian discord equals Shannon entropy, nonspecificity zero");
    c.check(rl_sym, "relative likelihood is symmetric under class swap");
    const EpistemicAleatoric nothing = relative_likelihood_binary(0.0, 0.0);
    c.check(nothing.epistemic == 1.0 && nothing.aleatoric == 0.0,
            "no evidence at all is pure epistemic uncertainty");
  }

  {  // Classifier + loop determinism on a small synthetic problem.
    Rng gen_a(7), gen_b(7);
    const RichDataset a = generate_synthetic(SyntheticKind::three_class_imprecise,
                                             60, 0.45, gen_a);
    const RichDataset b = generate_synthetic(SyntheticKind::three_class_imprecise,
                                             60, 0.45, gen_b);
    c.check(a.features.data == b.features.data && a.true_labels == b.true_labels,
            "synthetic generation is a pure function of the seed");

    ALConfig cfg;
    cfg.strategy = QueryStrategy::klir(0.2);
    cfg.repetitions = 2;
    cfg.budget_fraction = 0.3;
    cfg.seed = 11;
    cfg.model.k = 3;
    const ALRunResult r1 = run_active_learning(a, cfg, 1);
    const ALRunResult r2 = run_active_learning(a, cfg, 2);
    bool same = r1.repetitions.size() == r2.repetitions.size();
    for (size_t i = 0; same && i < r1.repetitions.size(); ++i)
      same = r1.repetitions[i].queries == r2.repetitions[i].queries &&
             r1.repetitions[i].accuracy_curve == r2.repetitions[i].accuracy_curve;
    c.check(same, "active-learning runs are identical across parallelism levels");
  }

  {  // Statistics sanity.
    bool holm_ok = true;
    for (int trial = 0; trial < 50 && holm_ok; ++trial) {
      std::vector<double> p(static_cast<size_t>(2 + rng.index(8)));
      for (double& x : p) x = rng.uniform01();
      const std::vector<double> adj = holm_adjust(p);
      for (size_t i = 0; i < p.size(); ++i)
        holm_ok = holm_ok && adj[i] >= p[i] - 1e-15 && adj[i] <= 1.0 + 1e-15;
    }
    c.check(holm_ok, "Holm adjustment dominates raw p-values and stays within [0, 1]");

    Matrix unanimous(6, 4);
    for (size_t i = 0; i < 6; ++i)
      for (size_t j = 0; j < 4; ++j) unanimous.at(i, j) = 10.0 - static_cast<double>(j);
    const FriedmanResult fr = friedman_test(unanimous);
    c.check(std::fabs(fr.statistic - 6.0 * 3.0) < 1e-12,
            "unanimous rankings reach the maximal Friedman statistic");

    const std::vector<double> x{1.0, 2.0, 3.0, 4.0, 5.0};
    const std::vector<double> y{1.1, 2.1, 3.1, 4.1, 5.1};
    const WilcoxonResult w = wilcoxon_signed_rank(x, y);
    c.check(w.w == 0.0 && w.p <= 1.0, "one-sided dominance gives zero rank sum");
  }

  log << (c.failures == 0 ? "selfcheck passed" : "selfcheck FAILED") << '\n';
  return c.failures;
}

}  // namespace eal
