#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace ldpaint {

struct Rgb {
  std::uint8_t r = 0;
  std::uint8_t g = 0;
  std::uint8_t b = 0;

  friend bool operator==(const Rgb&, const Rgb&) = default;
  friend auto operator<=>(const Rgb&, const Rgb&) = default;
};

inline constexpr Rgb kWhite{255, 255, 255};

// Squared Euclidean distance in RGB space.
inline int squared_distance(Rgb a, Rgb b) {
  const int dr = int(a.r) - int(b.r);
  const int dg = int(a.g) - int(b.g);
  const int db = int(a.b) - int(b.b);
  return dr * dr + dg * dg + db * db;
}

// Integer pixel coordinate. Ordering is (y, x), i.e. raster order.
struct Pixel {
  int x = 0;
  int y = 0;

  friend bool operator==(const Pixel&, const Pixel&) = default;
  friend std::strong_ordering operator<=>(const Pixel& a, const Pixel& b) {
    if (auto c = a.y <=> b.y; c != 0) return c;
    return a.x <=> b.x;
  }
};

/// Row-major 8-bit RGB raster.
class Image {
 public:
  Image() = default;
  Image(int width, int height, Rgb fill = kWhite);

  int width() const { return width_; }
  int height() const { return height_; }
  std::size_t pixel_count() const { return pixels_.size(); }
  bool contains(int x, int y) const {
    return x >= 0 && y >= 0 && x < width_ && y < height_;
  }

  Rgb& at(int x, int y) { return pixels_[std::size_t(y) * width_ + x]; }
  Rgb at(int x, int y) const { return pixels_[std::size_t(y) * width_ + x]; }
  Rgb& operator[](std::size_t i) { return pixels_[i]; }
  Rgb operator[](std::size_t i) const { return pixels_[i]; }

  const std::vector<Rgb>& pixels() const { return pixels_; }
  std::vector<Rgb>& pixels() { return pixels_; }

  friend bool operator==(const Image&, const Image&) = default;

 private:
  int width_ = 0;
  int height_ = 0;
  std::vector<Rgb> pixels_;
};

enum class DepthConvention {
  NearerHigh,  // larger value = nearer to the viewer (inverse depth)
  NearerLow,   // larger value = farther from the viewer
};

/// Scalar depth in [0,1], same layout as Image.
struct DepthMap {
  int width = 0;
  int height = 0;
  std::vector<double> values;
  DepthConvention convention = DepthConvention::NearerHigh;

  double at(int x, int y) const { return values[std::size_t(y) * width + x]; }
  double& at(int x, int y) { return values[std::size_t(y) * width + x]; }
};

enum class PredictionKind { Thing, Stuff };

struct Prediction {
  int id = 0;
  PredictionKind kind = PredictionKind::Stuff;
  double score = 1.0;
  std::string category;
  int semantic_group = 0;
  std::int64_t area = 0;
  double weight = 0.0;  // score * area

  friend bool operator==(const Prediction&, const Prediction&) = default;
};

/// Pixels of one prediction, as sorted raster indices into the image.
struct Mask {
  int width = 0;
  int height = 0;
  std::vector<int> pixels;

  bool empty() const { return pixels.empty(); }
  std::size_t size() const { return pixels.size(); }
  Pixel pixel(std::size_t i) const {
    return {pixels[i] % width, pixels[i] / width};
  }
};

struct Segmentation {
  int width = 0;
  int height = 0;
  std::vector<int> labels;  // prediction id per pixel
  std::vector<Prediction> predictions;

  const Prediction* find(int id) const;
  Mask mask_of(int id) const;
  // One pass over the label map; keyed by prediction id.
  std::map<int, Mask> masks() const;
};

}  // namespace ldpaint
