#pragma once

#include <optional>
#include <string>
#include <vector>

#include "eal/classifiers.hpp"
#include "eal/uncertainty.hpp"

namespace eal {

struct Bounds {
  double xmin = -1.0, xmax = 1.0;
  double ymin = -1.0, ymax = 1.0;
};

// Bounding box of a 2D feature matrix grown by `margin` of its span per side.
Bounds bounds_of(const Matrix& features, double margin = 0.1);

// Uncertainty values of a measure on an R x R grid over 2D feature space.
// grid[i * resolution + j] scores the point (x_j, y_i) with
// x_j = xmin + j * (xmax - xmin) / (R - 1) and y likewise (row 0 at ymin).
struct LandscapeRaster {
  Bounds bounds;
  int resolution = 0;
  Measure measure = Measure::klir;
  std::vector<double> grid;

  double at(int i, int j) const { return grid[static_cast<size_t>(i) * resolution + j]; }
};

// Whichever models the requested measure needs must be non-null: the
// evidential model for mass-based measures, the probabilistic one for
// entropy / least-confidence / relative-likelihood scores.
struct LandscapeModels {
  const EknnModel* eknn = nullptr;
  const PknnModel* pknn = nullptr;
};

LandscapeRaster landscape(const LandscapeModels& models, Bounds bounds,
                          int resolution, Measure measure, double klir_lambda = 0.2,
                          int parallelism = 1);

void write_raster_csv(const LandscapeRaster& raster, const std::string& path);
// P5 grayscale, 16-bit big-endian samples, scores rescaled to [0, 65535] by
// the raster's own min and max (a constant raster renders black).
void write_raster_pgm(const LandscapeRaster& raster, const std::string& path);

}  // namespace eal
