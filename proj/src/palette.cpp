#include "ldpaint/palette.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <json.hpp>

#include "ldpaint/error.hpp"
#include "ldpaint/io.hpp"

namespace ldpaint {

namespace {

using Center = std::array<double, 3>;

struct WeightedColor {
  Rgb color;
  std::uint64_t count = 0;
};

std::uint32_t pack(Rgb c) {
  return (std::uint32_t(c.r) << 16) | (std::uint32_t(c.g) << 8) | c.b;
}

Rgb unpack(std::uint32_t v) {
  return {std::uint8_t(v >> 16), std::uint8_t(v >> 8), std::uint8_t(v)};
}

// Distinct colors with multiplicities, in packed (r,g,b) order.
std::vector<WeightedColor> color_histogram(const Image& image,
                                           std::size_t max_samples) {
  const std::size_t n = image.pixel_count();
  const std::size_t stride =
      n > max_samples ? (n + max_samples - 1) / max_samples : 1;
  std::vector<std::uint32_t> packed;
  packed.reserve(n / stride + 1);
  for (std::size_t i = 0; i < n; i += stride) packed.push_back(pack(image[i]));
  std::sort(packed.begin(), packed.end());

  std::vector<WeightedColor> out;
  for (std::size_t i = 0; i < packed.size();) {
    std::size_t j = i;
    while (j < packed.size() && packed[j] == packed[i]) ++j;
    out.push_back({unpack(packed[i]), std::uint64_t(j - i)});
    i = j;
  }
  return out;
}

double squared_distance(const Center& c, Rgb p) {
  const double dr = c[0] - p.r;
  const double dg = c[1] - p.g;
  const double db = c[2] - p.b;
  return dr * dr + dg * dg + db * db;
}

// Uniform double in [0,1) from the raw engine output; avoids the
// implementation-defined std::uniform_real_distribution.
double unit_uniform(std::mt19937_64& rng) {
  return double(rng() >> 11) * 0x1.0p-53;
}

std::size_t weighted_pick(const std::vector<double>& weights, double total,
                          std::mt19937_64& rng) {
  const double target = unit_uniform(rng) * total;
  double acc = 0.0;
  std::size_t last_positive = 0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    if (weights[i] <= 0.0) continue;
    acc += weights[i];
    last_positive = i;
    if (target < acc) return i;
  }
  return last_positive;
}

std::vector<Center> seed_centers(const std::vector<WeightedColor>& colors,
                                 int k, std::mt19937_64& rng) {
  std::vector<double> weights(colors.size());
  double total = 0.0;
  for (std::size_t i = 0; i < colors.size(); ++i) {
    weights[i] = double(colors[i].count);
    total += weights[i];
  }
  auto to_center = [](Rgb c) { return Center{double(c.r), double(c.g), double(c.b)}; };

  std::vector<Center> centers;
  centers.push_back(to_center(colors[weighted_pick(weights, total, rng)].color));
  std::vector<double> nearest(colors.size());
  for (std::size_t i = 0; i < colors.size(); ++i)
    nearest[i] = squared_distance(centers[0], colors[i].color);

  while (int(centers.size()) < k) {
    total = 0.0;
    for (std::size_t i = 0; i < colors.size(); ++i) {
      weights[i] = double(colors[i].count) * nearest[i];
      total += weights[i];
    }
    if (total <= 0.0) break;
    centers.push_back(to_center(colors[weighted_pick(weights, total, rng)].color));
    for (std::size_t i = 0; i < colors.size(); ++i)
      nearest[i] = std::min(nearest[i],
                            squared_distance(centers.back(), colors[i].color));
  }
  return centers;
}

// Returns the SSE of the assignment.
double assign(const std::vector<WeightedColor>& colors,
              const std::vector<Center>& centers, std::vector<int>& labels) {
  double sse = 0.0;
  for (std::size_t i = 0; i < colors.size(); ++i) {
    int best = 0;
    double best_d = squared_distance(centers[0], colors[i].color);
    for (std::size_t c = 1; c < centers.size(); ++c) {
      const double d = squared_distance(centers[c], colors[i].color);
      if (d < best_d) {
        best_d = d;
        best = int(c);
      }
    }
    labels[i] = best;
    sse += double(colors[i].count) * best_d;
  }
  return sse;
}

// Recomputes centers as cluster means (integer accumulation) and drops
// clusters that lost all members, remapping `labels` accordingly.
void update_centers(const std::vector<WeightedColor>& colors,
                    std::vector<Center>& centers, std::vector<int>& labels) {
  struct Sum {
    std::uint64_t r = 0, g = 0, b = 0, n = 0;
  };
  std::vector<Sum> sums(centers.size());
  for (std::size_t i = 0; i < colors.size(); ++i) {
    Sum& s = sums[labels[i]];
    const auto& wc = colors[i];
    s.r += wc.count * wc.color.r;
    s.g += wc.count * wc.color.g;
    s.b += wc.count * wc.color.b;
    s.n += wc.count;
  }
  std::vector<int> remap(centers.size(), -1);
  std::vector<Center> kept;
  for (std::size_t c = 0; c < centers.size(); ++c) {
    if (sums[c].n == 0) continue;
    remap[c] = int(kept.size());
    const double n = double(sums[c].n);
    kept.push_back({double(sums[c].r) / n, double(sums[c].g) / n,
                    double(sums[c].b) / n});
  }
  for (int& l : labels) l = remap[l];
  centers = std::move(kept);
}

}  // namespace

Palette build_palette(const Image& image, const KMeansOptions& options,
                      const KMeansObserver& observer) {
  if (options.k < 1) throw UsageError("palette size k must be >= 1");
  if (options.max_iters < 1) throw UsageError("k-means max_iters must be >= 1");
  if (image.pixel_count() == 0) throw InputError("empty image");

  const auto colors = color_histogram(image, std::max<std::size_t>(options.max_samples, 1));
  Palette palette;
  palette.k = options.k;
  if (colors.size() <= std::size_t(options.k)) {
    for (const auto& wc : colors) palette.colors.push_back(wc.color);
    return palette;
  }

  std::mt19937_64 rng(options.rng_seed);
  std::vector<Center> centers = seed_centers(colors, options.k, rng);
  std::vector<int> labels(colors.size(), 0);
  double sse = assign(colors, centers, labels);
  if (observer) observer({0, sse, centers});

  for (int it = 1; it <= options.max_iters; ++it) {
    update_centers(colors, centers, labels);
    std::vector<int> previous = labels;
    sse = assign(colors, centers, labels);
    if (observer) observer({it, sse, centers});
    if (labels == previous) break;
  }

  for (const auto& c : centers) {
    Rgb color{};
    auto channel = [](double v) {
      return std::uint8_t(std::clamp<long>(std::lround(v), 0, 255));
    };
    color = {channel(c[0]), channel(c[1]), channel(c[2])};
    if (std::find(palette.colors.begin(), palette.colors.end(), color) ==
        palette.colors.end())
      palette.colors.push_back(color);
  }
  return palette;
}

int quantize(Rgb color, const Palette& palette) {
  int best = 0;
  int best_d = squared_distance(color, palette.colors.at(0));
  for (std::size_t i = 1; i < palette.colors.size(); ++i) {
    const int d = squared_distance(color, palette.colors[i]);
    if (d < best_d) {
      best_d = d;
      best = int(i);
    }
  }
  return best;
}

void save_palette(const Palette& palette, const std::filesystem::path& path) {
  nlohmann::json doc = nlohmann::json::array();
  for (const auto& c : palette.colors) doc.push_back({c.r, c.g, c.b});
  write_text(path, doc.dump() + "\n");
}

Palette load_palette(const std::filesystem::path& path) {
  const auto bytes = read_bytes(path);
  Palette palette;
  try {
    const auto doc = nlohmann::json::parse(bytes.begin(), bytes.end());
    for (const auto& entry : doc) {
      const auto rgb = entry.get<std::array<int, 3>>();
      for (int v : rgb)
        if (v < 0 || v > 255) throw InputError("palette channel out of range");
      Rgb c{std::uint8_t(rgb[0]), std::uint8_t(rgb[1]), std::uint8_t(rgb[2])};
      if (std::find(palette.colors.begin(), palette.colors.end(), c) ==
          palette.colors.end())
        palette.colors.push_back(c);
    }
  } catch (const nlohmann::json::exception& e) {
    throw InputError("palette file: " + std::string(e.what()));
  }
  if (palette.colors.empty()) throw InputError("palette file is empty");
  palette.k = int(palette.colors.size());
  return palette;
}

}  // namespace ldpaint
