#pragma once

#include <cstddef>
#include <vector>

#include "ldpaint/image.hpp"

namespace ldpaint {

struct GradientField {
  int width = 0;
  int height = 0;
  std::vector<double> gx;
  std::vector<double> gy;

  double magnitude(std::size_t i) const;
  std::vector<double> magnitudes() const;
};

// Rec. 601 luma in [0,255].
std::vector<double> luma(const Image& image);

// 3x3 binomial blur with replicated borders.
std::vector<double> blur3x3(const std::vector<double>& plane, int width,
                            int height);

// Sobel derivatives with replicated borders.
GradientField sobel(const std::vector<double>& plane, int width, int height);

}  // namespace ldpaint
