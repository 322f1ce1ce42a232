#include "doctest.h"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "eal/datasets.hpp"
#include "eal/format.hpp"
#include "eal/landscape.hpp"
#include "test_support.hpp"

using namespace eal;

namespace {

struct Fixture {
  RichDataset data;
  EknnModel eknn;
  PknnModel pknn;

  static Fixture make() {
    Rng rng(701);
    RichDataset data =
        generate_synthetic(SyntheticKind::three_class_imprecise, 30, 0.45, rng);
    EknnModel eknn = EknnModel::fit(data.features, data.rich_labels, 3);
    PknnModel pknn = PknnModel::fit(data.features, data.true_labels, data.frame, 3);
    return {std::move(data), std::move(eknn), std::move(pknn)};
  }
};

std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / name).string();
}

}  // namespace

TEST_CASE("bounds grow the data box by a margin") {
  Matrix m(2, 2);
  m.at(0, 0) = -1.0;
  m.at(0, 1) = 0.0;
  m.at(1, 0) = 3.0;
  m.at(1, 1) = 2.0;
  const Bounds b = bounds_of(m, 0.1);
  CHECK(b.xmin == doctest::Approx(-1.4).epsilon(1e-12));
  CHECK(b.xmax == doctest::Approx(3.4).epsilon(1e-12));
  CHECK(b.ymin == doctest::Approx(-0.2).epsilon(1e-12));
  CHECK(b.ymax == doctest::Approx(2.2).epsilon(1e-12));

  CHECK_THROWS_AS(bounds_of(Matrix(2, 3)), Error);
  CHECK_THROWS_AS(bounds_of(Matrix(0, 2)), Error);
}

TEST_CASE("raster cells score the documented grid points") {
  const Fixture fx = Fixture::make();
  const LandscapeModels models{&fx.eknn, &fx.pknn};
  const Bounds bounds{-1.5, 1.5, -1.0, 2.0};
  const int r = 5;
  const LandscapeRaster raster =
      landscape(models, bounds, r, Measure::discord);

  CHECK(raster.resolution == r);
  CHECK(raster.grid.size() == 25);
  for (int i = 0; i < r; ++i) {
    for (int j = 0; j < r; ++j) {
      const double x = bounds.xmin + j * (bounds.xmax - bounds.xmin) / (r - 1);
      const double y = bounds.ymin + i * (bounds.ymax - bounds.ymin) / (r - 1);
      const double point[2] = {x, y};
      CHECK(raster.at(i, j) == discord(fx.eknn.predict(point)));
    }
  }
}

TEST_CASE("klir with zero discount weighting reproduces the discord raster") {
  const Fixture fx = Fixture::make();
  const LandscapeModels models{&fx.eknn, nullptr};
  const Bounds bounds{-2.0, 2.0, -2.0, 2.0};
  const LandscapeRaster discord_raster =
      landscape(models, bounds, 9, Measure::discord);
  const LandscapeRaster klir_raster =
      landscape(models, bounds, 9, Measure::klir, 0.0);
  CHECK(klir_raster.grid == discord_raster.grid);
}

TEST_CASE("far from all training data the prediction is vacuous") {
  const Fixture fx = Fixture::make();
  // A huge bandwidth kills every neighbour contribution away from the data,
  // so total ignorance (nonspecificity log2 3) covers the whole raster.
  const EknnModel sharp = EknnModel::fit(fx.data.features, fx.data.rich_labels, 3,
                                         0.95, GammaMode::fixed(1e6));
  const LandscapeModels models{&sharp, nullptr};
  const Bounds far{50.0, 60.0, 50.0, 60.0};
  const LandscapeRaster raster = landscape(models, far, 4, Measure::nonspecificity);
  for (double v : raster.grid)
    CHECK(v == doctest::Approx(std::log2(3.0)).epsilon(1e-6));

  // A constant raster has no contrast left and renders black.
  const std::string path = temp_path("eal_flat.pgm");
  write_raster_pgm(raster, path);
  std::ifstream in(path, std::ios::binary);
  std::string header;
  std::getline(in, header);
  CHECK(header == "P5");
  std::getline(in, header);
  CHECK(header == "4 4");
  std::getline(in, header);
  CHECK(header == "65535");
  std::string pixels((std::istreambuf_iterator<char>(in)),
                     std::istreambuf_iterator<char>());
  REQUIRE(pixels.size() == 32);  // 16 samples, two bytes each
  for (char c : pixels) CHECK(c == '\0');
  std::remove(path.c_str());
}

TEST_CASE("mirrored training data gives a mirrored landscape") {
  // Two training points reflected through x = 0 with swapped classes: the
  // uncertainty field must be symmetric under the same reflection.
  Matrix train(2, 2);
  train.at(0, 0) = -0.75;
  train.at(0, 1) = 0.0;
  train.at(1, 0) = 0.75;
  train.at(1, 1) = 0.0;
  const FramePtr frame = make_frame(2);
  std::vector<MassFunction> labels{categorical_mass(frame, FocalSet::singleton(0)),
                                   categorical_mass(frame, FocalSet::singleton(1))};
  const EknnModel eknn = EknnModel::fit(train, labels, 2);
  const LandscapeModels models{&eknn, nullptr};

  const Bounds bounds{-2.0, 2.0, -2.0, 2.0};
  const int r = 33;  // odd, so the x grid is closed under negation
  for (Measure measure : {Measure::klir, Measure::discord, Measure::nonspecificity,
                          Measure::evidential_epistemic}) {
    const LandscapeRaster raster = landscape(models, bounds, r, measure);
    for (int i = 0; i < r; ++i)
      for (int j = 0; j < r; ++j)
        CHECK(raster.at(i, j) == doctest::Approx(raster.at(i, r - 1 - j)).epsilon(1e-9));
  }
}

TEST_CASE("parallel rasterization matches the serial result") {
  const Fixture fx = Fixture::make();
  const LandscapeModels models{&fx.eknn, &fx.pknn};
  const Bounds bounds{-2.0, 2.0, -2.0, 2.0};
  const LandscapeRaster serial =
      landscape(models, bounds, 17, Measure::entropy, 0.2, 1);
  const LandscapeRaster threaded =
      landscape(models, bounds, 17, Measure::entropy, 0.2, 3);
  CHECK(serial.grid == threaded.grid);
}

TEST_CASE("raster csv holds one row per grid line") {
  const Fixture fx = Fixture::make();
  const LandscapeModels models{&fx.eknn, nullptr};
  const LandscapeRaster raster =
      landscape(models, Bounds{-1.0, 1.0, -1.0, 1.0}, 3, Measure::klir);
  const std::string path = temp_path("eal_raster.csv");
  write_raster_csv(raster, path);

  std::ifstream in(path);
  std::string line;
  int rows = 0;
  while (std::getline(in, line)) {
    std::stringstream ss(line);
    std::string cell;
    int cols = 0;
    while (std::getline(ss, cell, ',')) {
      CHECK(parse_double(cell, "cell") == raster.at(rows, cols));
      ++cols;
    }
    CHECK(cols == 3);
    ++rows;
  }
  CHECK(rows == 3);
  std::remove(path.c_str());
}

TEST_CASE("pgm rescales onto the full 16-bit range") {
  LandscapeRaster raster;
  raster.resolution = 2;
  raster.grid = {0.25, 0.5, 0.75, 1.0};
  const std::string path = temp_path("eal_scale.pgm");
  write_raster_pgm(raster, path);
  std::ifstream in(path, std::ios::binary);
  std::string all((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  const std::string expected_header = "P5\n2 2\n65535\n";
  REQUIRE(all.size() == expected_header.size() + 8);
  CHECK(all.substr(0, expected_header.size()) == expected_header);
  const auto sample = [&](size_t idx) {
    const size_t base = expected_header.size() + 2 * idx;
    return (static_cast<unsigned>(static_cast<unsigned char>(all[base])) << 8) |
           static_cast<unsigned>(static_cast<unsigned char>(all[base + 1]));
  };
  CHECK(sample(0) == 0u);       // minimum maps to black
  CHECK(sample(1) == 21845u);   // lround(65535 / 3)
  CHECK(sample(2) == 43690u);   // lround(2 * 65535 / 3)
  CHECK(sample(3) == 65535u);   // maximum maps to white
  std::remove(path.c_str());
}

TEST_CASE("raster argument validation") {
  const Fixture fx = Fixture::make();
  const LandscapeModels models{&fx.eknn, &fx.pknn};
  CHECK_THROWS_AS(
      landscape(models, Bounds{-1, 1, -1, 1}, 1, Measure::klir), Error);
  CHECK_THROWS_AS(
      landscape(models, Bounds{1, -1, -1, 1}, 5, Measure::klir), Error);

  const LandscapeModels no_pknn{&fx.eknn, nullptr};
  CHECK_THROWS_AS(
      landscape(no_pknn, Bounds{-1, 1, -1, 1}, 5, Measure::entropy), Error);
  const LandscapeModels no_eknn{nullptr, &fx.pknn};
  CHECK_THROWS_AS(
      landscape(no_eknn, Bounds{-1, 1, -1, 1}, 5, Measure::klir), Error);

  // Relative-likelihood scores are defined for two classes; the fixture has 3.
  CHECK_THROWS_AS(
      landscape(models, Bounds{-1, 1, -1, 1}, 5, Measure::rl_epistemic), Error);
}
