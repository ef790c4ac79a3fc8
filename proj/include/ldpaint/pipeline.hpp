#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "ldpaint/depth.hpp"
#include "ldpaint/image.hpp"
#include "ldpaint/ordering.hpp"
#include "ldpaint/robotplan.hpp"
#include "ldpaint/strokes.hpp"

namespace ldpaint {

inline constexpr const char* kVersion = "0.1.0";

struct Options {
  std::filesystem::path input;
  std::filesystem::path depth;
  std::filesystem::path labels;
  std::filesystem::path meta;
  std::filesystem::path out;
  DepthConvention convention = DepthConvention::NearerHigh;

  std::int64_t strokes = 2000;
  std::optional<int> colors;  // unset: unrestricted colors
  int kmeans_iters = 100;
  std::uint64_t rng_seed = 0;

  double width_px = 6.0;
  int min_points = 2;
  int max_points = 12;
  double color_tolerance = 0.0;

  int bins = 8;
  Binning binning = Binning::EqualWidth;
  GridDims grid;
  std::optional<double> sigma;  // unset: image diagonal / 200
  int interleave_first_k = 0;

  std::optional<std::vector<std::size_t>> snapshots;  // unset: default cadence

  bool robot = false;
  CanvasSpec canvas;
  Timing timing;

  bool debug = false;
};

// Throws UsageError on out-of-range values.
void validate(const Options& options);

std::string options_to_json(const Options& options);
Options options_from_json(const std::string& text);

struct PipelineResult {
  std::size_t stroke_count = 0;
  std::size_t frame_count = 0;
  std::optional<std::size_t> palette_size;
  std::optional<double> makespan_s;
  std::vector<std::filesystem::path> outputs;  // relative to Options::out
};

/// Loads inputs, plans, generates and renders strokes, optionally schedules
/// the two-arm drawing, and writes manifest.json last.
PipelineResult run_pipeline(const Options& options);

}  // namespace ldpaint
