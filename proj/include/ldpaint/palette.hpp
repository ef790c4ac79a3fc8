#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <vector>

#include "ldpaint/image.hpp"

namespace ldpaint {

struct Palette {
  std::vector<Rgb> colors;
  int k = 0;

  bool empty() const { return colors.empty(); }
  std::size_t size() const { return colors.size(); }
  friend bool operator==(const Palette&, const Palette&) = default;
};

struct KMeansOptions {
  int k = 4;
  std::uint64_t rng_seed = 0;
  int max_iters = 100;
  // Above this many pixels the clustering uses a fixed stride subsample.
  std::size_t max_samples = 1'000'000;
};

struct KMeansIteration {
  int iteration = 0;
  double sse = 0.0;  // within-cluster SSE after this assignment step
  std::vector<std::array<double, 3>> centers;
};

using KMeansObserver = std::function<void(const KMeansIteration&)>;

/// k-means palette over RGB values: k-means++ seeding from `rng_seed`,
/// Lloyd iterations until assignments stop changing or `max_iters` is hit.
/// Empty clusters are dropped. When the image has at most k distinct colors,
/// those colors are returned directly (sorted).
Palette build_palette(const Image& image, const KMeansOptions& options,
                      const KMeansObserver& observer = {});

// Nearest palette entry by squared RGB distance; ties go to the lower index.
int quantize(Rgb color, const Palette& palette);

void save_palette(const Palette& palette, const std::filesystem::path& path);
Palette load_palette(const std::filesystem::path& path);

}  // namespace ldpaint
