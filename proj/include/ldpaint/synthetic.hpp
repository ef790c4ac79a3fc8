#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "ldpaint/image.hpp"

namespace ldpaint {

// Target image with matching depth and panoptic maps. Used as test fixtures
// and demo inputs; no model is involved.
struct Scene {
  std::string name;
  Image image;
  DepthMap depth;
  Segmentation seg;
};

/// Two uniformly colored elliptical things (dome-shaped depth, rim far) on a
/// color-gradient background stuff whose depth ramps from far (top) to near
/// (bottom). Convention: nearer-high.
Scene two_things_scene(int width = 640, int height = 512);

/// Voronoi partition into `regions` predictions (roughly half things) with
/// shaded colors and a smooth random depth field.
Scene random_scene(std::uint64_t seed, int width, int height, int regions);

// Small fixed set of scenes for quality checks.
std::vector<Scene> standard_corpus();

// Writes image.png, depth.pgm, labels.png and labels.json into `dir`.
void save_scene(const Scene& scene, const std::filesystem::path& dir);

}  // namespace ldpaint
