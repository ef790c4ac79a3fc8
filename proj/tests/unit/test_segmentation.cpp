#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <set>

#include "ldpaint/gradient.hpp"
#include "ldpaint/io.hpp"
#include "ldpaint/segmentation.hpp"
#include "support.hpp"

using namespace ldpaint;

namespace {

Prediction pred(int id, PredictionKind kind, double score, std::int64_t area, int group = 0) {
  Prediction p;
  p.id = id;
  p.kind = kind;
  p.score = score;
  p.area = area;
  p.weight = score * double(area);
  p.semantic_group = group;
  return p;
}

Mask mask_where(int w, int h, const std::function<bool(int, int)>& inside) {
  Mask m{w, h, {}};
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x)
      if (inside(x, y)) m.pixels.push_back(y * w + x);
  return m;
}

std::vector<int> ids_of(const std::vector<Prediction>& ps) {
  std::vector<int> out;
  for (const auto& p : ps) out.push_back(p.id);
  return out;
}

void check_partition(const SuperpixelRegions& r, const Mask& m) {
  REQUIRE(r.region_of.size() == m.size());
  std::set<int> used(r.region_of.begin(), r.region_of.end());
  CHECK(int(used.size()) == r.region_count);
  CHECK(*used.begin() == 0);
  CHECK(*used.rbegin() == r.region_count - 1);
}

}  // namespace

TEST_CASE("things by weight, then stuff by group") {
  Segmentation seg;
  seg.predictions = {pred(1, PredictionKind::Thing, 0.9, 10000),   // w 9000
                     pred(2, PredictionKind::Thing, 0.8, 15000),   // w 12000
                     pred(3, PredictionKind::Stuff, 1.0, 500, 2),
                     pred(4, PredictionKind::Stuff, 1.0, 50000, 9)};
  std::reverse(seg.predictions.begin(), seg.predictions.end());
  CHECK(ids_of(order_predictions(seg)) == std::vector<int>{2, 1, 3, 4});
}

TEST_CASE("ordering tie rules") {
  Segmentation seg;
  seg.predictions = {pred(5, PredictionKind::Thing, 1.0, 100),
                     pred(6, PredictionKind::Thing, 0.5, 200),
                     pred(7, PredictionKind::Thing, 0.5, 200)};
  CHECK(ids_of(order_predictions(seg)) == std::vector<int>{6, 7, 5});

  Segmentation stuff;
  stuff.predictions = {pred(9, PredictionKind::Stuff, 1.0, 1, 3),
                       pred(8, PredictionKind::Stuff, 1.0, 1, 3),
                       pred(2, PredictionKind::Stuff, 1.0, 1, 7),
                       pred(4, PredictionKind::Stuff, 1.0, 1, 0)};
  const auto ordered = order_predictions(stuff);
  CHECK(ids_of(ordered) == std::vector<int>{4, 8, 9, 2});
  CHECK(order_predictions(stuff) == ordered);
}

TEST_CASE("seed budget rounding") {
  CHECK(seed_budget(pred(0, PredictionKind::Thing, 1.0, 25000), 100000, 2000) == 500);
  CHECK(seed_budget(pred(0, PredictionKind::Stuff, 1.0, 100000), 100000, 2000) == 2000);
  CHECK(seed_budget(pred(0, PredictionKind::Thing, 1.0, 10), 1000000, 2000) == 1);
  CHECK(seed_budget(pred(0, PredictionKind::Thing, 1.0, 0), 1000000, 2000) == 0);
  // 1/4 of 10 strokes is 2.5, which rounds up; 0.249 * 10 rounds down.
  CHECK(seed_budget(pred(0, PredictionKind::Thing, 1.0, 250), 1000, 10) == 3);
  CHECK(seed_budget(pred(0, PredictionKind::Thing, 1.0, 249), 1000, 10) == 2);
  CHECK(seed_budget(pred(0, PredictionKind::Thing, 1.0, 64), Image(16, 16), 100) == 25);
}

TEST_CASE("allocated budgets sum to N and stay within one of the exact share") {
  std::mt19937 rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    const int n_preds = 1 + int(rng() % 12);
    std::vector<std::int64_t> cuts{0, 1000000};
    for (int i = 0; i < n_preds - 1; ++i) cuts.push_back(1 + rng() % 999999);
    std::sort(cuts.begin(), cuts.end());
    std::vector<Prediction> preds;
    for (int i = 0; i < n_preds; ++i) {
      const auto area = cuts[i + 1] - cuts[i];
      if (area > 0) preds.push_back(pred(i, PredictionKind::Thing, 1.0, area));
    }
    const std::int64_t n = 50 + rng() % 3000;
    const auto budgets = allocate_budgets(preds, 1000000, n);
    REQUIRE(budgets.size() == preds.size());
    CHECK(std::accumulate(budgets.begin(), budgets.end(), std::int64_t{0}) == n);
    for (std::size_t i = 0; i < preds.size(); ++i) {
      const double exact = double(preds[i].area) / 1e6 * double(n);
      CHECK(budgets[i] >= 1);
      CHECK(std::abs(double(budgets[i]) - exact) <= 1.0);
    }
  }
}

TEST_CASE("single uniform region") {
  const Image image(20, 10, {50, 60, 70});
  const Mask m = mask_where(20, 10, [](int x, int y) { return x > 2 && y < 8; });
  const auto r = superpixels(image, m, 1);
  check_partition(r, m);
  CHECK(r.region_count == 1);
}

TEST_CASE("uniform square splits into balanced regions") {
  const Image image(100, 100, {128, 128, 128});
  const Mask m = mask_where(100, 100, [](int, int) { return true; });
  const auto r = superpixels(image, m, 4);
  check_partition(r, m);
  REQUIRE(r.region_count == 4);
  std::vector<int> sizes(4, 0);
  for (int id : r.region_of) ++sizes[std::size_t(id)];
  CHECK(std::accumulate(sizes.begin(), sizes.end(), 0) == 10000);
  for (int s : sizes) {
    CHECK(s <= 2 * 2500);
    CHECK(s >= 2500 / 2);
  }
}

TEST_CASE("region count is clamped to the mask area") {
  const Image image(5, 5);
  const Mask m = mask_where(5, 5, [](int x, int y) { return x == y; });
  const auto r = superpixels(image, m, 50);
  check_partition(r, m);
  CHECK(r.region_count == 5);
}

TEST_CASE("watershed boundary follows a strong vertical edge") {
  const int w = 60, h = 40, edge = 30;
  Image image(w, h, {0, 0, 0});
  for (int y = 0; y < h; ++y)
    for (int x = edge; x < w; ++x) image.at(x, y) = {255, 255, 255};
  const Mask m = mask_where(w, h, [](int, int) { return true; });
  const auto r = superpixels(image, m, 2);
  check_partition(r, m);
  REQUIRE(r.region_count == 2);
  for (int y = 0; y < h; ++y) {
    // Last column of the left region in this row.
    const int left_id = r.region_of[std::size_t(y * w)];
    int boundary = -1;
    for (int x = 0; x < w; ++x)
      if (r.region_of[std::size_t(y * w + x)] == left_id) boundary = x;
    CAPTURE(y);
    CHECK(std::abs((boundary + 1) - edge) <= 2);
    CHECK(r.region_of[std::size_t(y * w + w - 1)] != left_id);
  }
}

TEST_CASE("farthest point markers spread across the mask") {
  const Mask m = mask_where(50, 20, [](int, int) { return true; });
  const auto markers = farthest_point_markers(m, 2);
  REQUIRE(markers.size() == 2);
  CHECK(m.pixel(std::size_t(markers[0])) == Pixel{0, 0});
  CHECK(m.pixel(std::size_t(markers[1])) == Pixel{49, 19});
}

TEST_CASE("centroid of a 3x3 block") {
  const Mask m = mask_where(10, 10, [](int x, int y) { return x < 3 && y < 3; });
  SuperpixelRegions r{std::vector<int>(m.size(), 0), 1};
  const SeedSet s = region_centroids(r, m, 4);
  CHECK(s.prediction_id == 4);
  REQUIRE(s.seeds.size() == 1);
  CHECK(s.seeds[0] == Pixel{1, 1});
}

TEST_CASE("centroid outside an L-shaped region snaps onto it") {
  auto in_l = [](int x, int y) { return (x < 2 && y < 10) || (y >= 8 && y < 10 && x < 10); };
  const Mask m = mask_where(12, 12, in_l);
  SuperpixelRegions r{std::vector<int>(m.size(), 0), 1};
  const SeedSet s = region_centroids(r, m, 0);
  REQUIRE(s.seeds.size() == 1);

  double sx = 0, sy = 0;
  for (std::size_t i = 0; i < m.size(); ++i) {
    sx += m.pixel(i).x;
    sy += m.pixel(i).y;
  }
  const int cx = int(std::floor(sx / double(m.size()) + 0.5));
  const int cy = int(std::floor(sy / double(m.size()) + 0.5));
  REQUIRE(!in_l(cx, cy));
  CHECK(in_l(s.seeds[0].x, s.seeds[0].y));
  int best = 1 << 30;
  for (std::size_t i = 0; i < m.size(); ++i) {
    const Pixel p = m.pixel(i);
    best = std::min(best, (p.x - cx) * (p.x - cx) + (p.y - cy) * (p.y - cy));
  }
  const int got = (s.seeds[0].x - cx) * (s.seeds[0].x - cx) + (s.seeds[0].y - cy) * (s.seeds[0].y - cy);
  CHECK(got == best);
}

TEST_CASE("one seed per region, each on its own region") {
  Image image(64, 48);
  std::mt19937 rng(2);
  for (auto& px : image.pixels()) px = {std::uint8_t(rng() % 256), 90, 90};
  const Mask m = mask_where(64, 48, [](int x, int y) { return (x - 32) * (x - 32) + (y - 24) * (y - 24) < 400; });
  const auto r = superpixels(image, m, 17);
  check_partition(r, m);
  const SeedSet s = region_centroids(r, m, 1);
  CHECK(int(s.seeds.size()) == r.region_count);
  std::set<int> mask_set(m.pixels.begin(), m.pixels.end());
  for (const Pixel& p : s.seeds) CHECK(mask_set.count(p.y * 64 + p.x) == 1);
}
