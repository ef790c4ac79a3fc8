#include "ldpaint/gradient.hpp"

#include <algorithm>
#include <cmath>

namespace ldpaint {

namespace {

struct Clamped {
  const std::vector<double>& plane;
  int width;
  int height;

  double operator()(int x, int y) const {
    x = std::clamp(x, 0, width - 1);
    y = std::clamp(y, 0, height - 1);
    return plane[std::size_t(y) * width + x];
  }
};

}  // namespace

double GradientField::magnitude(std::size_t i) const {
  return std::sqrt(gx[i] * gx[i] + gy[i] * gy[i]);
}

std::vector<double> GradientField::magnitudes() const {
  std::vector<double> out(gx.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = magnitude(i);
  return out;
}

std::vector<double> luma(const Image& image) {
  std::vector<double> out(image.pixel_count());
  for (std::size_t i = 0; i < out.size(); ++i) {
    const Rgb c = image[i];
    out[i] = 0.299 * c.r + 0.587 * c.g + 0.114 * c.b;
  }
  return out;
}

std::vector<double> blur3x3(const std::vector<double>& plane, int width,
                            int height) {
  Clamped in{plane, width, height};
  std::vector<double> out(plane.size());
  for (int y = 0; y < height; ++y)
    for (int x = 0; x < width; ++x) {
      double s = 4.0 * in(x, y);
      s += 2.0 * (in(x - 1, y) + in(x + 1, y) + in(x, y - 1) + in(x, y + 1));
      s += in(x - 1, y - 1) + in(x + 1, y - 1) + in(x - 1, y + 1) +
           in(x + 1, y + 1);
      out[std::size_t(y) * width + x] = s / 16.0;
    }
  return out;
}

GradientField sobel(const std::vector<double>& plane, int width, int height) {
  Clamped in{plane, width, height};
  GradientField g{width, height, std::vector<double>(plane.size()),
                  std::vector<double>(plane.size())};
  for (int y = 0; y < height; ++y)
    for (int x = 0; x < width; ++x) {
      const std::size_t i = std::size_t(y) * width + x;
      g.gx[i] = (in(x + 1, y - 1) + 2.0 * in(x + 1, y) + in(x + 1, y + 1)) -
                (in(x - 1, y - 1) + 2.0 * in(x - 1, y) + in(x - 1, y + 1));
      g.gy[i] = (in(x - 1, y + 1) + 2.0 * in(x, y + 1) + in(x + 1, y + 1)) -
                (in(x - 1, y - 1) + 2.0 * in(x, y - 1) + in(x + 1, y - 1));
    }
  return g;
}

}  // namespace ldpaint
