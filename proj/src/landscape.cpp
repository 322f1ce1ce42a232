#include "eal/landscape.hpp"

#include <cmath>
#include <fstream>

#include "eal/format.hpp"
#include "eal/parallel.hpp"

namespace eal {

Bounds bounds_of(const Matrix& features, double margin) {
  if (features.cols != 2)
    fail(errc::bad_argument, "landscape bounds need 2D features");
  if (features.rows == 0) fail(errc::bad_argument, "no rows");
  Bounds b{features.at(0, 0), features.at(0, 0), features.at(0, 1), features.at(0, 1)};
  for (size_t i = 1; i < features.rows; ++i) {
    b.xmin = std::min(b.xmin, features.at(i, 0));
    b.xmax = std::max(b.xmax, features.at(i, 0));
    b.ymin = std::min(b.ymin, features.at(i, 1));
    b.ymax = std::max(b.ymax, features.at(i, 1));
  }
  const double dx = (b.xmax - b.xmin) * margin, dy = (b.ymax - b.ymin) * margin;
  b.xmin -= dx;
  b.xmax += dx;
  b.ymin -= dy;
  b.ymax += dy;
  return b;
}

LandscapeRaster landscape(const LandscapeModels& models, Bounds bounds,
                          int resolution, Measure measure, double klir_lambda,
                          int parallelism) {
  if (resolution < 2) fail(errc::bad_argument, "raster resolution must be >= 2");
  if (!(bounds.xmax > bounds.xmin) || !(bounds.ymax > bounds.ymin))
    fail(errc::bad_argument, "degenerate raster bounds");

  const bool needs_pknn = measure == Measure::entropy ||
                          measure == Measure::least_confidence ||
                          measure == Measure::rl_epistemic ||
                          measure == Measure::rl_aleatoric;
  if (needs_pknn && !models.pknn)
    fail(errc::bad_argument, std::string(measure_name(measure)) +
                                 " needs the probabilistic k-NN model");
  if (!needs_pknn && !models.eknn)
    fail(errc::bad_argument, std::string(measure_name(measure)) +
                                 " needs the evidential k-NN model");
  if ((measure == Measure::rl_epistemic || measure == Measure::rl_aleatoric) &&
      models.pknn->frame()->size() != 2)
    fail(errc::bad_argument, "relative-likelihood measures are two-class only");

  LandscapeRaster raster;
  raster.bounds = bounds;
  raster.resolution = resolution;
  raster.measure = measure;
  raster.grid.assign(static_cast<size_t>(resolution) * resolution, 0.0);

  auto score = [&](double x, double y) -> double {
    const double point[2] = {x, y};
    switch (measure) {
      case Measure::entropy:
        return shannon_entropy(models.pknn->predict(point));
      case Measure::least_confidence:
        return least_confidence(models.pknn->predict(point));
      case Measure::rl_epistemic:
      case Measure::rl_aleatoric: {
        const std::vector<double> counts = models.pknn->weighted_counts(point);
        const EpistemicAleatoric ua = relative_likelihood_binary(counts[1], counts[0]);
        return measure == Measure::rl_epistemic ? ua.epistemic : ua.aleatoric;
      }
      case Measure::discord:
        return discord(models.eknn->predict(point));
      case Measure::nonspecificity:
        return nonspecificity(models.eknn->predict(point));
      case Measure::klir:
        return klir(models.eknn->predict(point), klir_lambda);
      case Measure::evidential_epistemic:
        return evidential_epistemic_aleatoric(models.eknn->predict(point)).epistemic;
      case Measure::evidential_aleatoric:
        return evidential_epistemic_aleatoric(models.eknn->predict(point)).aleatoric;
    }
    fail(errc::bad_argument, "unhandled measure");
  };

  parallel_for(static_cast<size_t>(resolution), parallelism, [&](size_t i) {
    const double y = bounds.ymin + static_cast<double>(i) * (bounds.ymax - bounds.ymin) /
                                       (resolution - 1);
    for (int j = 0; j < resolution; ++j) {
      const double x = bounds.xmin + static_cast<double>(j) * (bounds.xmax - bounds.xmin) /
                                         (resolution - 1);
      raster.grid[i * static_cast<size_t>(resolution) + static_cast<size_t>(j)] =
          score(x, y);
    }
  });
  return raster;
}

void write_raster_csv(const LandscapeRaster& raster, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(errc::io_error, "cannot write " + path);
  for (int i = 0; i < raster.resolution; ++i) {
    for (int j = 0; j < raster.resolution; ++j) {
      if (j > 0) out << ",";
      out << format_double(raster.at(i, j));
    }
    out << "\n";
  }
  if (!out) fail(errc::io_error, "write failed for " + path);
}

void write_raster_pgm(const LandscapeRaster& raster, const std::string& path) {
  double lo = raster.grid[0], hi = raster.grid[0];
  for (double v : raster.grid) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  const double span = hi - lo;
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(errc::io_error, "cannot write " + path);
  out << "P5\n" << raster.resolution << " " << raster.resolution << "\n65535\n";
  for (double v : raster.grid) {
    const unsigned value =
        span > 0.0
            ? static_cast<unsigned>(std::lround((v - lo) / span * 65535.0))
            : 0u;
    out.put(static_cast<char>((value >> 8) & 0xff));
    out.put(static_cast<char>(value & 0xff));
  }
  if (!out) fail(errc::io_error, "write failed for " + path);
}

}  // namespace eal
