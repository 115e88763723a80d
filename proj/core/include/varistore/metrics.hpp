#pragma once

#include "varistore/image_grid.hpp"

namespace varistore {

/// Reported instead of +infinity for identical images.
inline constexpr double kPsnrCap = 99.0;

/// 20 log10(255 / RMSE) with both images scaled from [0, 1] to [0, 255].
double psnr(const ImageGrid& u, const ImageGrid& reference);

/// Mean absolute difference over all pixels.
double mean_error(const ImageGrid& u, const ImageGrid& reference);

struct GapValue {
  double value = 0.0;
  /// Set when the dual value was too small to divide by and `value` holds
  /// the absolute difference primal - dual.
  bool absolute = false;
};

/// (primal - dual) / dual, or primal - dual when dual <= 1e-12.
GapValue relative_gap(double primal, double dual);

/// Relative gap of the weighted-TV objective for the pair (u, b).
GapValue relative_duality_gap(const ImageGrid& u, const VectorField& b,
                              const ImageGrid& u0, const ImageGrid& W,
                              double lambda);

struct MetricRecord {
  double psnr_db = 0.0;
  double mean_error = 0.0;
  double duality_gap = 0.0;
  bool gap_is_absolute = false;
  int iteration = 0;
};

}  // namespace varistore
