#include "doctest.h"

#include <cmath>
#include <numeric>
#include <vector>

#include "eal/classifiers.hpp"
#include "eal/rng.hpp"
#include "test_support.hpp"

using namespace eal;

namespace {

Matrix matrix_from(std::initializer_list<std::initializer_list<double>> rows) {
  Matrix m(rows.size(), rows.begin()->size());
  size_t r = 0;
  for (const auto& row : rows) {
    size_t c = 0;
    for (double v : row) m.at(r, c++) = v;
    ++r;
  }
  return m;
}

std::vector<MassFunction> categorical_labels(const FramePtr& frame,
                                             const std::vector<int>& classes) {
  std::vector<MassFunction> out;
  for (int c : classes) out.push_back(categorical_mass(frame, FocalSet::singleton(c)));
  return out;
}

}  // namespace

TEST_CASE("standardizer") {
  const Matrix m = matrix_from({{0.0, 5.0}, {2.0, 5.0}, {4.0, 5.0}});
  const Standardizer s = Standardizer::fit(m);
  CHECK(s.mean[0] == 2.0);
  CHECK(s.mean[1] == 5.0);
  CHECK(s.stdev[1] == 1.0);  // constant column keeps stdev 1

  const std::vector<double> z = s.apply(std::vector<double>{4.0, 5.0});
  CHECK(z[0] == doctest::Approx(std::sqrt(1.5)).epsilon(1e-12));
  CHECK(z[1] == 0.0);  // constant features standardize to zero exactly

  const Matrix all = s.apply(m);
  CHECK(all.at(0, 0) == -all.at(2, 0));
  CHECK(all.at(1, 0) == 0.0);
}

TEST_CASE("k_nearest orders by distance then index") {
  const Matrix train = matrix_from({{0.0}, {2.0}, {1.0}, {2.0}});
  const std::vector<double> query{0.9};
  const auto nn = k_nearest(train, query, 3);
  REQUIRE(nn.size() == 3);
  CHECK(nn[0].second == 2);  // d^2 = 0.01
  CHECK(nn[1].second == 0);  // d^2 = 0.81
  CHECK(nn[2].second == 1);  // d^2 = 1.21, index 1 beats the tied index 3
}

TEST_CASE("evidential knn on a hand-checked two-point problem") {
  // Training points 0 and 1 standardize to -1 and +1; a query at the left
  // point sits at squared distances 0 and 4.  The only pairwise squared
  // distance is 4, so the automatic gamma is 1/4.
  const FramePtr frame = make_frame(2);
  const Matrix train = matrix_from({{0.0}, {1.0}});
  const EknnModel model =
      EknnModel::fit(train, categorical_labels(frame, {0, 1}), 2, 0.95);
  CHECK(model.gamma() == doctest::Approx(0.25).epsilon(1e-12));

  // Source 1: {0} with alpha 0.95.  Source 2: {1} with alpha 0.95 e^{-1}.
  const double a1 = 0.95;
  const double a2 = 0.95 * std::exp(-1.0);
  const double conflict = a1 * a2;
  const double kept = 1.0 - conflict;
  const MassFunction pred = model.predict(std::vector<double>{0.0});
  CHECK(pred.mass_of(FocalSet::singleton(0)) ==
        doctest::Approx(a1 * (1.0 - a2) / kept).epsilon(1e-12));
  CHECK(pred.mass_of(FocalSet::singleton(1)) ==
        doctest::Approx((1.0 - a1) * a2 / kept).epsilon(1e-12));
  CHECK(pred.mass_of(FocalSet::universe(2)) ==
        doctest::Approx((1.0 - a1) * (1.0 - a2) / kept).epsilon(1e-12));
  CHECK(model.predict_class(std::vector<double>{0.0}) == 0);
  CHECK(model.predict_class(std::vector<double>{1.0}) == 1);
}

TEST_CASE("evidential knn with a single neighbour is a discounted label") {
  const FramePtr frame = make_frame(2);
  const Matrix train = matrix_from({{0.0}, {1.0}});
  const EknnModel model = EknnModel::fit(train, categorical_labels(frame, {0, 1}),
                                         1, 0.95, GammaMode::fixed(1.0));
  // Exactly on a training point: distance 0, so the mass is the label
  // discounted by plain alpha0.
  const MassFunction pred = model.predict(std::vector<double>{0.0});
  CHECK(pred.mass_of(FocalSet::singleton(0)) == doctest::Approx(0.95).epsilon(1e-12));
  CHECK(pred.mass_of(FocalSet::universe(2)) == doctest::Approx(0.05).epsilon(1e-12));
}

TEST_CASE("equidistant conflicting neighbours leave a symmetric prediction") {
  const FramePtr frame = make_frame(2);
  const Matrix train = matrix_from({{-1.0}, {1.0}});
  const EknnModel model =
      EknnModel::fit(train, categorical_labels(frame, {0, 1}), 2, 0.9);
  const ProbabilityVector pv = betp(model.predict(std::vector<double>{0.0}));
  CHECK(pv.p[0] == doctest::Approx(pv.p[1]).epsilon(1e-12));
}

TEST_CASE("evidential knn accepts rich labels") {
  const FramePtr frame = make_frame(2);
  const MassFunction soft = make_mass(
      frame, {{FocalSet::singleton(0), 0.5}, {FocalSet::universe(2), 0.5}});
  const Matrix train = matrix_from({{0.0}, {10.0}});
  const std::vector<MassFunction> labels{
      soft, categorical_mass(frame, FocalSet::singleton(1))};
  const EknnModel model = EknnModel::fit(train, labels, 1, 1.0, GammaMode::fixed(1.0));
  // alpha = 1 at distance zero: prediction is the stored rich label itself.
  const MassFunction pred = model.predict(std::vector<double>{0.0});
  CHECK(pred.mass_of(FocalSet::singleton(0)) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(pred.mass_of(FocalSet::universe(2)) == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("huge gamma pushes predictions toward ignorance away from the data") {
  const FramePtr frame = make_frame(3);
  const Matrix train = matrix_from({{0.0, 0.0}, {1.0, 0.0}, {0.0, 1.0}});
  const EknnModel model = EknnModel::fit(train, categorical_labels(frame, {0, 1, 2}),
                                         3, 0.95, GammaMode::fixed(1e6));
  const MassFunction pred = model.predict(std::vector<double>{5.0, 5.0});
  CHECK(pred.mass_of(FocalSet::universe(3)) == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("training row order does not change predictions") {
  Rng rng(301);
  const FramePtr frame = make_frame(3);
  Matrix train(30, 2);
  std::vector<int> classes;
  for (size_t i = 0; i < 30; ++i) {
    train.at(i, 0) = rng.normal(0.0, 1.0);
    train.at(i, 1) = rng.normal(0.0, 1.0);
    classes.push_back(static_cast<int>(i % 3));
  }
  std::vector<int> order(30);
  std::iota(order.begin(), order.end(), 0);
  rng.shuffle(order);
  Matrix shuffled = train.take_rows(order);
  std::vector<int> shuffled_classes;
  for (int i : order) shuffled_classes.push_back(classes[static_cast<size_t>(i)]);

  const EknnModel a = EknnModel::fit(train, categorical_labels(frame, classes), 5);
  const EknnModel b =
      EknnModel::fit(shuffled, categorical_labels(frame, shuffled_classes), 5);
  for (int trial = 0; trial < 20; ++trial) {
    const std::vector<double> q{rng.uniform(-2.0, 2.0), rng.uniform(-2.0, 2.0)};
    const ProbabilityVector pa = betp(a.predict(q));
    const ProbabilityVector pb = betp(b.predict(q));
    for (size_t i = 0; i < pa.p.size(); ++i)
      CHECK(pa.p[i] == doctest::Approx(pb.p[i]).epsilon(1e-9));
  }
}

TEST_CASE("evidential knn fit preconditions") {
  const FramePtr frame = make_frame(2);
  const Matrix ten = Matrix(10, 1);
  std::vector<int> classes(10);
  for (size_t i = 0; i < 10; ++i) classes[i] = static_cast<int>(i % 2);

  CHECK_THROWS_AS(EknnModel::fit(Matrix(), {}, 1), Error);  // no rows
  CHECK_THROWS_AS(EknnModel::fit(ten, categorical_labels(frame, classes), 11),
                  Error);  // k exceeds the training size
  CHECK_THROWS_AS(EknnModel::fit(ten, categorical_labels(frame, classes), 0), Error);
  std::vector<MassFunction> short_labels = categorical_labels(frame, classes);
  short_labels.pop_back();
  CHECK_THROWS_AS(EknnModel::fit(ten, short_labels, 3), Error);
}

TEST_CASE("probabilistic knn weights votes by inverse distance") {
  const FramePtr frame = make_frame(2);
  // Query at 0: neighbours at 1, 2 (class 0) and 3 (class 1).
  const Matrix train = matrix_from({{1.0}, {2.0}, {3.0}});
  // Standardization maps 1,2,3 to -s,0,s; distances from the standardized
  // query are uneven, so check against hand-computed weights instead.
  const PknnModel model = PknnModel::fit(train, {0, 0, 1}, frame, 3);
  const std::vector<double> counts = model.weighted_counts(std::vector<double>{2.0});
  // The query coincides with training row 1 -> indicator weights.
  CHECK(counts[0] == 1.0);
  CHECK(counts[1] == 0.0);

  const ProbabilityVector pv = model.predict(std::vector<double>{1.9});
  CHECK(pv.p[0] > pv.p[1]);  // two nearby class-0 rows dominate
  CHECK(pv.p[0] + pv.p[1] == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("probabilistic knn zero-distance collapse covers all touching classes") {
  const FramePtr frame = make_frame(3);
  const Matrix train = matrix_from({{0.0}, {0.0}, {5.0}});
  const PknnModel model = PknnModel::fit(train, {0, 1, 2}, frame, 3);
  const std::vector<double> counts = model.weighted_counts(std::vector<double>{0.0});
  CHECK(counts[0] == 1.0);
  CHECK(counts[1] == 1.0);
  CHECK(counts[2] == 0.0);
  const ProbabilityVector pv = model.predict(std::vector<double>{0.0});
  CHECK(pv.p[0] == 0.5);
  CHECK(pv.p[1] == 0.5);
}

TEST_CASE("probabilistic knn fit preconditions") {
  const FramePtr frame = make_frame(2);
  const Matrix train = matrix_from({{0.0}, {1.0}});
  CHECK_THROWS_AS(PknnModel::fit(train, {0, 2}, frame, 1), Error);  // class 2 unknown
  CHECK_THROWS_AS(PknnModel::fit(train, {0, 1}, frame, 3), Error);  // k > n
}

TEST_CASE("automatic gamma falls back to one on duplicate points") {
  const FramePtr frame = make_frame(2);
  const Matrix train = matrix_from({{1.0}, {1.0}});
  const EknnModel model = EknnModel::fit(train, categorical_labels(frame, {0, 1}), 1);
  CHECK(model.gamma() == 1.0);
}
