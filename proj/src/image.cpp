#include "ldpaint/image.hpp"

#include <algorithm>

namespace ldpaint {

Image::Image(int width, int height, Rgb fill)
    : width_(width),
      height_(height),
      pixels_(std::size_t(std::max(width, 0)) * std::max(height, 0), fill) {}

const Prediction* Segmentation::find(int id) const {
  auto it = std::find_if(predictions.begin(), predictions.end(),
                         [id](const Prediction& p) { return p.id == id; });
  return it == predictions.end() ? nullptr : &*it;
}

Mask Segmentation::mask_of(int id) const {
  Mask mask{width, height, {}};
  for (std::size_t i = 0; i < labels.size(); ++i)
    if (labels[i] == id) mask.pixels.push_back(int(i));
  return mask;
}

std::map<int, Mask> Segmentation::masks() const {
  std::map<int, Mask> out;
  for (const auto& p : predictions) out[p.id] = Mask{width, height, {}};
  for (std::size_t i = 0; i < labels.size(); ++i) {
    auto it = out.find(labels[i]);
    if (it != out.end()) it->second.pixels.push_back(int(i));
  }
  return out;
}

}  // namespace ldpaint
