#pragma once

#include <cstdint>
#include <vector>

#include "ldpaint/image.hpp"

namespace ldpaint {

struct SeedSet {
  int prediction_id = 0;
  std::vector<Pixel> seeds;
};

/// Partition of a prediction mask into superpixels. `region_of[i]` is the
/// region of mask pixel i (same indexing as Mask::pixels); ids are dense in
/// [0, region_count).
struct SuperpixelRegions {
  std::vector<int> region_of;
  int region_count = 0;
};

// Things by weight (desc; ties: larger area, then lower id), then stuff by
// semantic group (asc; ties: lower id).
std::vector<Prediction> order_predictions(const Segmentation& seg);

// round_half_up(area / image_pixels * total_strokes), at least 1 when the
// prediction has any pixels.
std::int64_t seed_budget(const Prediction& prediction,
                         std::int64_t image_pixels, std::int64_t total_strokes);
std::int64_t seed_budget(const Prediction& prediction, const Image& image,
                         std::int64_t total_strokes);

/// Per-prediction budgets with a correction pass so that they sum to
/// `total_strokes` whenever that is compatible with the one-seed minimum.
/// Overshoot is trimmed from the largest predictions that were rounded up;
/// undershoot is added to the largest predictions that were rounded down.
std::vector<std::int64_t> allocate_budgets(
    const std::vector<Prediction>& predictions, std::int64_t image_pixels,
    std::int64_t total_strokes);

// Farthest-point sampling inside the mask, starting at its first raster
// pixel. Returns indices into mask.pixels.
std::vector<int> farthest_point_markers(const Mask& mask, int count);

/// Marker-controlled watershed over `gradient` (one value per image pixel)
/// restricted to `mask`. `count` is clamped to the mask area.
SuperpixelRegions superpixels(const std::vector<double>& gradient,
                              const Mask& mask, int count);

// Convenience overload: Sobel magnitude of the image luma.
SuperpixelRegions superpixels(const Image& image, const Mask& mask, int count);

/// One seed per region at its rounded centroid, snapped to the nearest pixel
/// of the region when the centroid pixel lies outside it.
SeedSet region_centroids(const SuperpixelRegions& regions, const Mask& mask,
                         int prediction_id);

}  // namespace ldpaint
