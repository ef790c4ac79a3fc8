#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "ldpaint/image.hpp"

namespace ldpaint {

namespace fs = std::filesystem;

// Label value reserved for unlabeled pixels. Such pixels are gathered into a
// synthetic "background" stuff prediction ranked after every other group.
inline constexpr int kVoidLabel = 65535;
inline constexpr const char* kBackgroundCategory = "background";

struct Gray16 {
  int width = 0;
  int height = 0;
  std::vector<std::uint16_t> values;
};

// PNG, 8-bit RGB/RGBA/gray/palette; alpha is dropped, 16-bit is reduced.
Image load_image(const fs::path& path);
void save_png(const Image& image, const fs::path& path);

Gray16 load_gray16_png(const fs::path& path);
void save_gray16_png(const Gray16& image, const fs::path& path);

// Binary PGM, maxval 65535, big-endian samples.
DepthMap load_depth(const fs::path& path, DepthConvention convention);
void save_depth(const DepthMap& depth, const fs::path& path);

Segmentation load_labels(const fs::path& map_path, const fs::path& meta_path);
void save_labels(const Segmentation& seg, const fs::path& map_path,
                 const fs::path& meta_path);

// Builds a Segmentation from an id map and metadata records, computing areas
// and weights. Shared by load_labels and in-memory callers.
Segmentation make_segmentation(int width, int height, std::vector<int> labels,
                               std::vector<Prediction> meta);

// Throws InputError when any map differs in size from the image.
void check_dimensions(const Image& image, const DepthMap& depth,
                      const Segmentation& seg);

std::vector<std::uint8_t> read_bytes(const fs::path& path);
void write_text(const fs::path& path, const std::string& text);
std::string sha256_hex(const std::vector<std::uint8_t>& bytes);

}  // namespace ldpaint
