#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "eal/uncertainty.hpp"
#include "test_support.hpp"

using namespace eal;
using test::random_mass;

namespace {

MassFunction example_mass() {
  return make_mass(make_frame({"cat", "dog"}),
                   {{FocalSet::singleton(0), 0.5}, {FocalSet::universe(2), 0.5}});
}

// Relabels the classes of a mass function by `perm` (new index = perm[old]).
MassFunction permute_mass(const MassFunction& m, const std::vector<int>& perm) {
  std::vector<FocalMass> focal;
  for (const FocalMass& fm : m.focal()) {
    uint32_t bits = 0;
    for (int i : fm.set.indices()) bits |= 1u << perm[static_cast<size_t>(i)];
    focal.push_back({FocalSet(bits), fm.mass});
  }
  return make_mass(m.frame(), std::move(focal));
}

}  // namespace

TEST_CASE("shannon entropy") {
  const FramePtr f = make_frame(2);
  CHECK(shannon_entropy({f, {0.75, 0.25}}) ==
        doctest::Approx(0.8112781244591328).epsilon(1e-12));
  CHECK(shannon_entropy({f, {0.5, 0.5}}) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(shannon_entropy({f, {1.0, 0.0}}) == 0.0);  // 0 log 0 = 0
  CHECK(shannon_entropy({make_frame(4), {0.25, 0.25, 0.25, 0.25}}) ==
        doctest::Approx(2.0).epsilon(1e-15));
  CHECK_THROWS_AS(shannon_entropy({f, {0.9, 0.2}}), Error);   // sum != 1
  CHECK_THROWS_AS(shannon_entropy({f, {1.1, -0.1}}), Error);  // negative entry
}

TEST_CASE("least confidence") {
  const FramePtr f = make_frame(2);
  CHECK(least_confidence({f, {0.75, 0.25}}) == 0.25);
  CHECK(least_confidence({make_frame(4), {0.25, 0.25, 0.25, 0.25}}) == 0.75);
}

TEST_CASE("discord and nonspecificity of the two-class example") {
  const MassFunction m = example_mass();
  CHECK(std::fabs(discord(m) - (-0.5 * std::log2(0.75))) < 1e-12);
  CHECK(nonspecificity(m) == 0.5);  // 0.5 * log2(2) exactly
  CHECK(nonspecificity(vacuous_mass(make_frame(4))) == 2.0);
  CHECK(nonspecificity(categorical_mass(m.frame(), FocalSet::singleton(0))) == 0.0);
}

TEST_CASE("klir blends nonspecificity and discord") {
  const MassFunction m = example_mass();
  CHECK(klir(m, 0.0) == discord(m));
  CHECK(klir(m, 1.0) == nonspecificity(m));
  CHECK(std::fabs(klir(m, 0.5) - 0.35375937481971095) < 1e-12);
  CHECK_THROWS_AS(klir(m, -0.01), Error);
  CHECK_THROWS_AS(klir(m, 1.01), Error);
}

TEST_CASE("klir is affine in lambda on random masses") {
  Rng rng(201);
  for (int trial = 0; trial < 200; ++trial) {
    const FramePtr f = make_frame(2 + static_cast<int>(rng.index(5)));
    const MassFunction m = random_mass(f, rng);
    const double d = klir(m, 0.0), n = klir(m, 1.0);
    for (int i = 0; i <= 10; ++i) {
      const double lam = i / 10.0;
      CHECK(std::fabs(klir(m, lam) - (lam * n + (1.0 - lam) * d)) < 1e-12);
    }
  }
}

TEST_CASE("discord equals Shannon entropy on Bayesian masses") {
  Rng rng(202);
  for (int trial = 0; trial < 200; ++trial) {
    const int classes = 2 + static_cast<int>(rng.index(5));
    const FramePtr f = make_frame(classes);
    std::vector<double> p(static_cast<size_t>(classes));
    double total = 0.0;
    for (double& x : p) total += (x = rng.uniform01() + 1e-3);
    for (double& x : p) x /= total;
    const MassFunction m = bayesian_mass(f, p);
    CHECK(std::fabs(discord(m) - shannon_entropy(betp(m))) < 1e-9);
    CHECK(nonspecificity(m) == 0.0);
  }
}

TEST_CASE("evidential decomposition of reference masses") {
  const MassFunction m = example_mass();
  const EpistemicAleatoric ex = evidential_epistemic_aleatoric(m);
  CHECK(std::fabs(ex.epistemic - 1.0) < 1e-12);
  CHECK(std::fabs(ex.aleatoric - 0.0) < 1e-12);

  // A categorical mass is fully decided: no uncertainty of either kind.
  const EpistemicAleatoric cat =
      evidential_epistemic_aleatoric(categorical_mass(m.frame(), FocalSet::singleton(0)));
  CHECK(cat.epistemic == 0.0);
  CHECK(cat.aleatoric == 0.0);

  // Total ignorance is purely epistemic, one unit per class.
  const EpistemicAleatoric vac =
      evidential_epistemic_aleatoric(vacuous_mass(make_frame(3)));
  CHECK(vac.epistemic == 3.0);
  CHECK(vac.aleatoric == 0.0);

  // A uniform Bayesian mass sits at the crossover point: per class,
  // min(Pl, 1-Bel) and min(Bel, 1-Pl) are both 0.5.
  const EpistemicAleatoric coin =
      evidential_epistemic_aleatoric(bayesian_mass(make_frame(2), std::vector<double>{0.5, 0.5}));
  CHECK(coin.epistemic == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(coin.aleatoric == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("two-class evidential epistemic uncertainty is twice the smaller plausibility") {
  Rng rng(203);
  for (int trial = 0; trial < 300; ++trial) {
    const FramePtr f = make_frame(2);
    const MassFunction m = random_mass(f, rng, 3);
    const double pl0 = pl(m, FocalSet::singleton(0));
    const double pl1 = pl(m, FocalSet::singleton(1));
    const EpistemicAleatoric ea = evidential_epistemic_aleatoric(m);
    CHECK(std::fabs(ea.epistemic - 2.0 * std::min(pl0, pl1)) < 1e-12);
  }
}

TEST_CASE("all measures are invariant under class relabeling") {
  Rng rng(204);
  for (int trial = 0; trial < 100; ++trial) {
    const int classes = 2 + static_cast<int>(rng.index(5));
    const FramePtr f = make_frame(classes);
    const MassFunction m = random_mass(f, rng, 5);
    std::vector<int> perm(static_cast<size_t>(classes));
    std::iota(perm.begin(), perm.end(), 0);
    rng.shuffle(perm);
    const MassFunction pm = permute_mass(m, perm);

    CHECK(std::fabs(discord(pm) - discord(m)) < 1e-12);
    CHECK(nonspecificity(pm) == doctest::Approx(nonspecificity(m)).epsilon(1e-15));
    CHECK(std::fabs(klir(pm, 0.3) - klir(m, 0.3)) < 1e-12);
    const EpistemicAleatoric a = evidential_epistemic_aleatoric(m);
    const EpistemicAleatoric b = evidential_epistemic_aleatoric(pm);
    CHECK(std::fabs(a.epistemic - b.epistemic) < 1e-12);
    CHECK(std::fabs(a.aleatoric - b.aleatoric) < 1e-12);
    std::vector<double> sorted_p = betp(m).p, sorted_q = betp(pm).p;
    std::sort(sorted_p.begin(), sorted_p.end());
    std::sort(sorted_q.begin(), sorted_q.end());
    for (size_t i = 0; i < sorted_p.size(); ++i)
      CHECK(std::fabs(sorted_p[i] - sorted_q[i]) < 1e-15);
  }
}

TEST_CASE("relative likelihood decomposition") {
  SUBCASE("no evidence is pure epistemic uncertainty, exactly") {
    const EpistemicAleatoric ea = relative_likelihood_binary(0.0, 0.0);
    CHECK(ea.epistemic == 1.0);
    CHECK(ea.aleatoric == 0.0);
  }
  SUBCASE("frozen grid values at the default resolution") {
    struct Row {
      double pos, neg, ue, ua;
    };
    // Computed independently on the same 10^5-interval grid (NumPy).
    const Row rows[] = {
        {1.0, 0.0, 0.33332999999999996, 0.0},
        {3.0, 0.0, 0.09319999999999995, 0.0},
        {1.0, 1.0, 0.6180265584000001, 0.3819734415999999},
        {2.0, 2.0, 0.52488, 0.47512},
        {4.0, 4.0, 0.43398000000000003, 0.56602},
        {8.0, 8.0, 0.3504656693553612, 0.6495343306446388},
        {2.0, 1.0, 0.41195513173854587, 0.28791999999999995},
        {0.5, 0.5, 0.7071000000000001, 0.29289999999999994},
    };
    for (const Row& r : rows) {
      const EpistemicAleatoric ea = relative_likelihood_binary(r.pos, r.neg);
      CHECK(std::fabs(ea.epistemic - r.ue) < 1e-12);
      CHECK(std::fabs(ea.aleatoric - r.ua) < 1e-12);
    }
  }
  SUBCASE("swapping the classes changes nothing") {
    Rng rng(205);
    for (int trial = 0; trial < 50; ++trial) {
      const double pos = rng.uniform(0.0, 10.0), neg = rng.uniform(0.0, 10.0);
      const EpistemicAleatoric fwd = relative_likelihood_binary(pos, neg, 5000);
      const EpistemicAleatoric rev = relative_likelihood_binary(neg, pos, 5000);
      CHECK(fwd.epistemic == rev.epistemic);
      CHECK(fwd.aleatoric == rev.aleatoric);
    }
  }
  SUBCASE("balanced evidence gets less epistemic with more observations") {
    double prev = 1.1;
    for (double w : {1.0, 2.0, 4.0, 8.0, 16.0}) {
      const double ue = relative_likelihood_binary(w, w, 20000).epistemic;
      CHECK(ue < prev);
      prev = ue;
    }
  }
  SUBCASE("argument validation") {
    CHECK_THROWS_AS(relative_likelihood_binary(-1.0, 0.0), Error);
    CHECK_THROWS_AS(relative_likelihood_binary(1.0, 1.0, 100), Error);  // < 1000
  }
}

TEST_CASE("measure names round-trip") {
  for (Measure m : {Measure::entropy, Measure::least_confidence, Measure::discord,
                    Measure::nonspecificity, Measure::klir,
                    Measure::evidential_epistemic, Measure::evidential_aleatoric,
                    Measure::rl_epistemic, Measure::rl_aleatoric})
    CHECK(parse_measure(measure_name(m)) == m);
  CHECK_THROWS_AS(parse_measure("bogus"), Error);
}
