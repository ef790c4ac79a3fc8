#pragma once

#include <filesystem>
#include <optional>
#include <vector>

#include "ldpaint/gradient.hpp"
#include "ldpaint/image.hpp"
#include "ldpaint/ordering.hpp"
#include "ldpaint/palette.hpp"

namespace ldpaint {

struct PointF {
  double x = 0.0;
  double y = 0.0;
  friend bool operator==(const PointF&, const PointF&) = default;
};

struct Stroke {
  std::vector<PointF> points;
  double width_px = 6.0;
  Rgb color;
  int color_index = -1;  // palette index, -1 when colors are unrestricted
  Pixel seed;
  int frame_index = 0;
  int prediction_id = 0;
  int bin_index = 0;
  friend bool operator==(const Stroke&, const Stroke&) = default;
};

struct StrokePlan {
  int width = 0;
  int height = 0;
  std::vector<Stroke> strokes;
  std::optional<Palette> palette;
};

struct StrokeParams {
  double width_px = 6.0;
  int min_points = 2;
  int max_points = 12;
  double color_tolerance = 0.0;
  // Gradient magnitudes (Sobel on blurred luma) below this count as flat.
  double gradient_epsilon = 0.25;
};

/// Grows curved strokes from seeds following the direction perpendicular to
/// the reference luma gradient.
class StrokeGenerator {
 public:
  StrokeGenerator(const Image& reference, const Palette* palette,
                  StrokeParams params);

  /// Step length is width_px. Growth ends at max_points, when leaving the
  /// image, or (once min_points is reached) when the canvas already matches
  /// the reference at the tip better than the stroke color, or when the
  /// gradient is flat. Flat gradients before min_points continue straight
  /// (horizontally for the first step).
  Stroke generate(Pixel seed, const Image& canvas) const;

  Rgb stroke_color(Pixel seed, int* index) const;
  const StrokeParams& params() const { return params_; }

 private:
  const Image& reference_;
  const Palette* palette_;
  StrokeParams params_;
  GradientField gradient_;
};

Stroke generate_stroke(Pixel seed, const Image& reference, const Image& canvas,
                       const Palette* palette, const StrokeParams& params);

/// Generates strokes in seed-plan order against a white working canvas that
/// receives each stroke before the next one is grown.
StrokePlan generate_all(const SeedPlan& plan, const Image& reference,
                        const Palette* palette, const StrokeParams& params);

// One JSON object per line: {"i","pred","bin","frame","color","ci","w","pts"}.
void save_strokes_jsonl(const StrokePlan& plan,
                        const std::filesystem::path& path);
std::vector<Stroke> load_strokes_jsonl(const std::filesystem::path& path);

}  // namespace ldpaint
