#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "ldpaint/depth.hpp"
#include "ldpaint/image.hpp"
#include "ldpaint/segmentation.hpp"

namespace ldpaint {

struct GridDims {
  int rows = 5;
  int cols = 5;
  friend bool operator==(const GridDims&, const GridDims&) = default;
};

/// Seeds of one prediction falling into one depth bin, in painting order.
struct Frame {
  int prediction_id = 0;
  int bin_index = 0;
  std::vector<Pixel> seeds;
  friend bool operator==(const Frame&, const Frame&) = default;
};

struct SeedPlan {
  std::vector<Frame> frames;
  GridDims grid;

  std::size_t seed_count() const;
  friend bool operator==(const SeedPlan&, const SeedPlan&) = default;
};

// Sort key of a seed within a frame: grid cell (row-major), then (y, x).
struct SeedKey {
  int cell_row = 0;
  int cell_col = 0;
  int y = 0;
  int x = 0;
  friend auto operator<=>(const SeedKey&, const SeedKey&) = default;
};

SeedKey seed_key(Pixel p, GridDims grid, int width, int height);

/// Splits a prediction's seeds into frames, one per non-empty histogram bin
/// in traversal order, each sorted by SeedKey. `depth` is the smoothed map.
std::vector<Frame> compute_frames(const DepthHistogram& hist,
                                  const SeedSet& seeds, const DepthMap& depth,
                                  GridDims grid);

struct PlanParams {
  double sigma = -1.0;  // negative: image diagonal / 200
  int bin_count = 8;
  GridDims grid;
  Binning binning = Binning::EqualWidth;
  // When > 0, the first k frames of every thing are emitted before the
  // regular prediction-major sequence continues.
  int interleave_first_k = 0;
};

struct LayeredDepthResult {
  SeedPlan plan;
  std::vector<Prediction> order;
  std::vector<std::int64_t> budgets;  // aligned with `order`
  std::vector<SeedSet> seed_sets;     // aligned with `order`
  DepthMap smoothed;
  DepthHistogram histogram;
  // Global superpixel id per pixel (predictions offset consecutively), -1
  // for pixels of predictions that received no seeds.
  std::vector<int> superpixel_map;
};

/// Full ordering pipeline: prediction order, depth smoothing and histogram,
/// per-prediction seed budgets, superpixel seeds and frames, concatenated
/// prediction-major. The plan holds at most `total_strokes` seeds.
LayeredDepthResult layered_depth_plan(const Image& image,
                                      const Segmentation& seg,
                                      const DepthMap& depth,
                                      std::int64_t total_strokes,
                                      const PlanParams& params);

void save_seed_plan(const SeedPlan& plan, const std::filesystem::path& path);
SeedPlan load_seed_plan(const std::filesystem::path& path);

}  // namespace ldpaint
