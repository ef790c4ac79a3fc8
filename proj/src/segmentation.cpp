#include "ldpaint/segmentation.hpp"

#include <algorithm>
#include <cstdint>
#include <limits>
#include <numeric>
#include <queue>

#include "ldpaint/error.hpp"
#include "ldpaint/gradient.hpp"

namespace ldpaint {

std::vector<Prediction> order_predictions(const Segmentation& seg) {
  std::vector<Prediction> things;
  std::vector<Prediction> stuff;
  for (const auto& p : seg.predictions)
    (p.kind == PredictionKind::Thing ? things : stuff).push_back(p);

  std::sort(things.begin(), things.end(),
            [](const Prediction& a, const Prediction& b) {
              if (a.weight != b.weight) return a.weight > b.weight;
              if (a.area != b.area) return a.area > b.area;
              return a.id < b.id;
            });
  std::sort(stuff.begin(), stuff.end(),
            [](const Prediction& a, const Prediction& b) {
              if (a.semantic_group != b.semantic_group)
                return a.semantic_group < b.semantic_group;
              return a.id < b.id;
            });
  things.insert(things.end(), stuff.begin(), stuff.end());
  return things;
}

std::int64_t seed_budget(const Prediction& prediction,
                         std::int64_t image_pixels,
                         std::int64_t total_strokes) {
  if (total_strokes < 1) throw UsageError("stroke count must be >= 1");
  if (image_pixels < 1) throw InputError("empty image");
  if (prediction.area <= 0) return 0;
  // floor(area * N / T + 1/2) in exact integer arithmetic.
  const std::int64_t rounded =
      (2 * prediction.area * total_strokes + image_pixels) / (2 * image_pixels);
  return std::max<std::int64_t>(rounded, 1);
}

std::int64_t seed_budget(const Prediction& prediction, const Image& image,
                         std::int64_t total_strokes) {
  return seed_budget(prediction, std::int64_t(image.pixel_count()),
                     total_strokes);
}

std::vector<std::int64_t> allocate_budgets(
    const std::vector<Prediction>& predictions, std::int64_t image_pixels,
    std::int64_t total_strokes) {
  const std::size_t n = predictions.size();
  std::vector<std::int64_t> budget(n);
  for (std::size_t i = 0; i < n; ++i)
    budget[i] = seed_budget(predictions[i], image_pixels, total_strokes);

  // Compares budget * T with area * N, i.e. the sign of the rounding error.
  auto excess = [&](std::size_t i) {
    const std::int64_t lhs = budget[i] * image_pixels;
    const std::int64_t rhs = predictions[i].area * total_strokes;
    return (lhs > rhs) - (lhs < rhs);
  };

  std::vector<std::size_t> by_size(n);
  std::iota(by_size.begin(), by_size.end(), 0);
  std::stable_sort(by_size.begin(), by_size.end(),
                   [&](std::size_t a, std::size_t b) {
                     if (predictions[a].area != predictions[b].area)
                       return predictions[a].area > predictions[b].area;
                     return predictions[a].id < predictions[b].id;
                   });

  std::int64_t sum = std::accumulate(budget.begin(), budget.end(),
                                     std::int64_t{0});
  if (sum > total_strokes) {
    for (std::size_t i : by_size) {
      if (sum == total_strokes) break;
      if (budget[i] > 1 && excess(i) > 0) {
        --budget[i];
        --sum;
      }
    }
    // Exact shares can still give one seed without leaving the +-1 band.
    for (std::size_t i : by_size) {
      if (sum == total_strokes) break;
      if (budget[i] > 1 && excess(i) == 0) {
        --budget[i];
        --sum;
      }
    }
    while (sum > total_strokes) {
      std::size_t best = n;
      for (std::size_t i : by_size)
        if (budget[i] > 1 && (best == n || budget[i] > budget[best])) best = i;
      if (best == n) break;  // every prediction is at its one-seed minimum
      --budget[best];
      --sum;
    }
  } else if (sum < total_strokes) {
    for (std::size_t i : by_size) {
      if (sum == total_strokes) break;
      if (excess(i) < 0 && budget[i] < predictions[i].area) {
        ++budget[i];
        ++sum;
      }
    }
    for (std::size_t i : by_size) {
      if (sum == total_strokes) break;
      if (excess(i) == 0 && budget[i] < predictions[i].area) {
        ++budget[i];
        ++sum;
      }
    }
    while (sum < total_strokes) {
      std::size_t best = n;
      for (std::size_t i : by_size)
        if (budget[i] < predictions[i].area) {
          best = i;
          break;
        }
      if (best == n) break;
      ++budget[best];
      ++sum;
    }
  }
  return budget;
}

std::vector<int> farthest_point_markers(const Mask& mask, int count) {
  const int area = int(mask.size());
  count = std::clamp(count, 0, area);
  std::vector<int> markers;
  if (count == 0) return markers;
  markers.reserve(std::size_t(count));

  std::vector<std::int64_t> nearest(std::size_t(area),
                                    std::numeric_limits<std::int64_t>::max());
  std::vector<Pixel> px(static_cast<std::size_t>(area));
  for (int i = 0; i < area; ++i) px[i] = mask.pixel(std::size_t(i));

  int next = 0;
  while (true) {
    markers.push_back(next);
    if (int(markers.size()) == count) break;
    const Pixel m = px[next];
    std::int64_t best_d = -1;
    int best = 0;
    for (int i = 0; i < area; ++i) {
      const std::int64_t dx = px[i].x - m.x;
      const std::int64_t dy = px[i].y - m.y;
      const std::int64_t d = std::min(nearest[i], dx * dx + dy * dy);
      nearest[i] = d;
      if (d > best_d) {
        best_d = d;
        best = i;
      }
    }
    next = best;
  }
  return markers;
}

SuperpixelRegions superpixels(const std::vector<double>& gradient,
                              const Mask& mask, int count) {
  if (mask.empty()) throw InputError("superpixels: empty mask");
  if (count < 1) throw UsageError("superpixels: count must be >= 1");
  const int area = int(mask.size());
  const std::vector<int> markers = farthest_point_markers(mask, count);

  // slot[pixel] = index into mask.pixels, or -1 outside the mask.
  std::vector<int> slot(std::size_t(mask.width) * mask.height, -1);
  for (int i = 0; i < area; ++i) slot[mask.pixels[i]] = i;

  SuperpixelRegions out;
  out.region_count = int(markers.size());
  out.region_of.assign(std::size_t(area), -1);

  struct Entry {
    double level;
    std::uint64_t age;
    int index;
  };
  auto later = [](const Entry& a, const Entry& b) {
    if (a.level != b.level) return a.level > b.level;
    return a.age > b.age;
  };
  std::priority_queue<Entry, std::vector<Entry>, decltype(later)> queue(later);
  std::uint64_t age = 0;

  for (int r = 0; r < out.region_count; ++r) {
    const int i = markers[r];
    out.region_of[i] = r;
    queue.push({gradient[mask.pixels[i]], age++, i});
  }

  const int dx[4] = {1, -1, 0, 0};
  const int dy[4] = {0, 0, 1, -1};
  while (!queue.empty()) {
    const Entry e = queue.top();
    queue.pop();
    const Pixel p = mask.pixel(std::size_t(e.index));
    for (int k = 0; k < 4; ++k) {
      const int nx = p.x + dx[k];
      const int ny = p.y + dy[k];
      if (nx < 0 || ny < 0 || nx >= mask.width || ny >= mask.height) continue;
      const int s = slot[std::size_t(ny) * mask.width + nx];
      if (s < 0 || out.region_of[s] >= 0) continue;
      out.region_of[s] = out.region_of[e.index];
      queue.push({gradient[mask.pixels[s]], age++, s});
    }
  }

  // Mask components without a marker: nearest marker by Euclidean distance.
  for (int i = 0; i < area; ++i) {
    if (out.region_of[i] >= 0) continue;
    const Pixel p = mask.pixel(std::size_t(i));
    std::int64_t best_d = std::numeric_limits<std::int64_t>::max();
    for (int r = 0; r < out.region_count; ++r) {
      const Pixel m = mask.pixel(std::size_t(markers[r]));
      const std::int64_t ddx = p.x - m.x;
      const std::int64_t ddy = p.y - m.y;
      const std::int64_t d = ddx * ddx + ddy * ddy;
      if (d < best_d) {
        best_d = d;
        out.region_of[i] = r;
      }
    }
  }
  return out;
}

SuperpixelRegions superpixels(const Image& image, const Mask& mask,
                              int count) {
  const auto grad = sobel(luma(image), image.width(), image.height());
  return superpixels(grad.magnitudes(), mask, count);
}

SeedSet region_centroids(const SuperpixelRegions& regions, const Mask& mask,
                         int prediction_id) {
  const std::size_t rc = std::size_t(regions.region_count);
  std::vector<std::vector<int>> members(rc);
  for (std::size_t i = 0; i < regions.region_of.size(); ++i)
    members[std::size_t(regions.region_of[i])].push_back(int(i));

  std::vector<int> region_at(std::size_t(mask.width) * mask.height, -1);
  for (std::size_t i = 0; i < mask.size(); ++i)
    region_at[mask.pixels[i]] = regions.region_of[i];

  SeedSet out{prediction_id, {}};
  out.seeds.reserve(rc);
  for (std::size_t r = 0; r < rc; ++r) {
    const auto& m = members[r];
    if (m.empty()) continue;
    std::int64_t sx = 0;
    std::int64_t sy = 0;
    for (int i : m) {
      const Pixel p = mask.pixel(std::size_t(i));
      sx += p.x;
      sy += p.y;
    }
    const std::int64_t n = std::int64_t(m.size());
    // Half-up rounding of the mean; coordinates are non-negative.
    Pixel c{int((2 * sx + n) / (2 * n)), int((2 * sy + n) / (2 * n))};
    if (region_at[std::size_t(c.y) * mask.width + c.x] != int(r)) {
      std::int64_t best_d = std::numeric_limits<std::int64_t>::max();
      Pixel best = c;
      for (int i : m) {
        const Pixel p = mask.pixel(std::size_t(i));
        const std::int64_t ddx = p.x - c.x;
        const std::int64_t ddy = p.y - c.y;
        const std::int64_t d = ddx * ddx + ddy * ddy;
        if (d < best_d) {
          best_d = d;
          best = p;
        }
      }
      c = best;
    }
    out.seeds.push_back(c);
  }
  return out;
}

}  // namespace ldpaint
