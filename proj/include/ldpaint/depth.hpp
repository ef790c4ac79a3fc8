#pragma once

#include <cstddef>
#include <vector>

#include "ldpaint/image.hpp"

namespace ldpaint {

enum class Binning { EqualWidth, EqualPopulation };

/// Depth histogram. Bin i covers [edges[i], edges[i+1]); the last bin is
/// closed. `traversal` lists bin indices from farthest to nearest.
struct DepthHistogram {
  std::vector<double> edges;
  std::vector<int> traversal;
  std::vector<std::size_t> counts;

  int bin_count() const { return int(edges.size()) - 1; }
};

// Separable Gaussian, radius ceil(3*sigma), replicated borders. sigma == 0
// returns the input unchanged.
DepthMap smooth_depth(const DepthMap& depth, double sigma);

// Normalised 1D Gaussian taps for offsets -radius..radius.
std::vector<double> gaussian_kernel(double sigma);

// A degenerate map (min == max) yields a single bin.
DepthHistogram build_histogram(const DepthMap& depth, int bin_count,
                               Binning binning = Binning::EqualWidth);

// Values outside the histogram range clamp to the first/last bin.
int bin_of(double value, const DepthHistogram& hist);

// Default smoothing: image diagonal / 200.
double default_sigma(int width, int height);

}  // namespace ldpaint
