#include "ldpaint/depth.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "ldpaint/error.hpp"

namespace ldpaint {

std::vector<double> gaussian_kernel(double sigma) {
  const int radius = int(std::ceil(3.0 * sigma));
  std::vector<double> taps(std::size_t(2 * radius + 1));
  double sum = 0.0;
  for (int i = -radius; i <= radius; ++i) {
    taps[std::size_t(i + radius)] = std::exp(-(i * i) / (2.0 * sigma * sigma));
    sum += taps[std::size_t(i + radius)];
  }
  for (double& t : taps) t /= sum;
  return taps;
}

DepthMap smooth_depth(const DepthMap& depth, double sigma) {
  if (!(sigma >= 0.0)) throw UsageError("sigma must be >= 0");
  if (sigma == 0.0 || depth.values.empty()) return depth;

  const auto taps = gaussian_kernel(sigma);
  const int radius = int(taps.size() / 2);
  const int w = depth.width;
  const int h = depth.height;
  std::vector<double> tmp(depth.values.size());

  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      double s = 0.0;
      for (int k = -radius; k <= radius; ++k)
        s += taps[std::size_t(k + radius)] * depth.at(std::clamp(x + k, 0, w - 1), y);
      tmp[std::size_t(y) * w + x] = s;
    }

  const auto [lo, hi] = std::minmax_element(depth.values.begin(), depth.values.end());
  DepthMap out = depth;
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      double s = 0.0;
      for (int k = -radius; k <= radius; ++k)
        s += taps[std::size_t(k + radius)] *
             tmp[std::size_t(std::clamp(y + k, 0, h - 1)) * w + x];
      out.at(x, y) = std::clamp(s, *lo, *hi);
    }
  return out;
}

DepthHistogram build_histogram(const DepthMap& depth, int bin_count,
                               Binning binning) {
  if (bin_count < 1) throw UsageError("bin count must be >= 1");
  if (depth.values.empty()) throw InputError("empty depth map");
  const auto [lo_it, hi_it] =
      std::minmax_element(depth.values.begin(), depth.values.end());
  const double lo = *lo_it;
  const double hi = *hi_it;

  DepthHistogram hist;
  if (lo == hi) {
    hist.edges = {lo, std::nextafter(lo, std::numeric_limits<double>::infinity())};
  } else if (binning == Binning::EqualWidth) {
    hist.edges.resize(std::size_t(bin_count) + 1);
    for (int i = 0; i < bin_count; ++i)
      hist.edges[std::size_t(i)] = lo + (hi - lo) * double(i) / double(bin_count);
    hist.edges.back() = hi;
  } else {
    std::vector<double> sorted = depth.values;
    std::sort(sorted.begin(), sorted.end());
    hist.edges.push_back(lo);
    for (int i = 1; i < bin_count; ++i) {
      const double q = sorted[sorted.size() * std::size_t(i) / std::size_t(bin_count)];
      if (q > hist.edges.back() && q < hi) hist.edges.push_back(q);
    }
    hist.edges.push_back(hi);
  }

  const int bins = hist.bin_count();
  hist.traversal.resize(std::size_t(bins));
  for (int i = 0; i < bins; ++i)
    hist.traversal[std::size_t(i)] =
        depth.convention == DepthConvention::NearerHigh ? i : bins - 1 - i;

  hist.counts.assign(std::size_t(bins), 0);
  for (double v : depth.values) ++hist.counts[std::size_t(bin_of(v, hist))];
  return hist;
}

int bin_of(double value, const DepthHistogram& hist) {
  const int bins = hist.bin_count();
  if (value >= hist.edges.back()) return bins - 1;
  const auto it = std::upper_bound(hist.edges.begin(), hist.edges.end(), value);
  const int idx = int(it - hist.edges.begin()) - 1;
  return std::clamp(idx, 0, bins - 1);
}

double default_sigma(int width, int height) {
  return std::hypot(double(width), double(height)) / 200.0;
}

}  // namespace ldpaint
