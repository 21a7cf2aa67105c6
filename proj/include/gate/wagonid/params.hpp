#pragma once

#include "gate/core/error.hpp"

namespace gate::wagonid {

/// Tunables of the identifier segmentation. Defaults are sized for characters on a
/// ~4096 px tall line-scan mosaic; all of them can be overridden from a config file.
struct SegmentationParams {
  int r_D = 3;              ///< disk radius of the edge dilation
  int d = 512;              ///< sliding sub-window side
  int s = 128;              ///< sliding step
  int ransac_iters = 200;
  double ransac_inlier_tol = 5.0;
  int min_window_points = 5;
  int top_k = 20;           ///< regions kept for alignment weighting
  long long min_area = 20;  ///< components smaller than this never vote
  double max_height_frac = 0.25;
  int strip_cols = 2048;    ///< column strip width for the local image stages
  int min_char_boxes = 6;   ///< fewer surviving boxes than this is not a plausible ID

  void validate() const {
    if (d <= 0) throw Error(Errc::invalid_argument, "d must be > 0");
    if (s <= 0 || s > d) throw Error(Errc::invalid_argument, "s must satisfy 0 < s <= d");
    if (!(ransac_inlier_tol > 0)) throw Error(Errc::invalid_argument, "ransac_inlier_tol must be > 0");
    if (top_k < 2) throw Error(Errc::invalid_argument, "top_k must be >= 2");
    if (r_D < 0) throw Error(Errc::invalid_argument, "r_D must be >= 0");
    if (ransac_iters < 1) throw Error(Errc::invalid_argument, "ransac_iters must be >= 1");
    if (min_window_points < 2) throw Error(Errc::invalid_argument, "min_window_points must be >= 2");
  }
};

}  // namespace gate::wagonid
