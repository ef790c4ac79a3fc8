#pragma once

#include <filesystem>
#include <vector>

#include "ldpaint/image.hpp"
#include "ldpaint/strokes.hpp"

namespace ldpaint {

// Opaque disc stamps of diameter width_px along the polyline, spaced at
// most one pixel apart. A pixel is covered when its center lies within the
// disc. Out-of-bounds coverage is clipped.
void raster_stroke(Image& canvas, const Stroke& stroke);

// White canvas with the first `count` strokes drawn.
Image render_prefix(const StrokePlan& plan, std::size_t count);

struct RenderOutput {
  Image painting;
  std::vector<std::filesystem::path> snapshots;
  std::filesystem::path painting_path;
};

/// Draws the plan in order, saving frameCCCC.png after each stroke count in
/// `snapshot_at` (ascending; counts beyond the plan are skipped), then
/// painting.png and frames.txt listing every written frame in order.
RenderOutput render_plan(const StrokePlan& plan,
                         const std::vector<std::size_t>& snapshot_at,
                         const std::filesystem::path& out_dir);

// 50, 250, 500, 1000, then every 500 up to `total`.
std::vector<std::size_t> default_snapshots(std::size_t total);

// Mean per-pixel Euclidean RGB distance.
double mean_l2_error(const Image& a, const Image& b);

}  // namespace ldpaint
