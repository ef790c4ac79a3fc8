#include <doctest.h>

#include <cmath>
#include <numeric>

#include "ldpaint/depth.hpp"
#include "support.hpp"

using namespace ldpaint;

namespace {

DepthMap map_of(int w, int h, std::vector<double> v,
                DepthConvention c = DepthConvention::NearerHigh) {
  return {w, h, std::move(v), c};
}

DepthMap smooth_random(std::uint32_t seed, int w, int h) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double fx = 0.05 + 0.1 * u(rng), fy = 0.05 + 0.1 * u(rng), ph = 6.0 * u(rng);
  DepthMap d{w, h, {}, DepthConvention::NearerHigh};
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x)
      d.values.push_back(0.5 + 0.3 * std::sin(fx * x + ph) * std::cos(fy * y) + 0.1 * u(rng));
  return d;
}

}  // namespace

TEST_CASE("blurring a constant map changes nothing") {
  const DepthMap d = map_of(9, 7, std::vector<double>(63, 0.375));
  for (double sigma : {0.0, 0.5, 1.0, 2.5, 6.0}) {
    const DepthMap s = smooth_depth(d, sigma);
    for (double v : s.values) CHECK(v == 0.375);
  }
}

TEST_CASE("sigma zero is the identity") {
  const DepthMap d = smooth_random(4, 20, 13);
  CHECK(smooth_depth(d, 0.0).values == d.values);
}

TEST_CASE("impulse response matches a directly evaluated 2D Gaussian") {
  const int n = 31, c = 15;
  std::vector<double> v(std::size_t(n * n), 0.0);
  v[std::size_t(c * n + c)] = 1.0;
  const DepthMap s = smooth_depth(map_of(n, n, v), 1.0);

  const int radius = 3;
  double norm = 0.0;
  for (int dy = -radius; dy <= radius; ++dy)
    for (int dx = -radius; dx <= radius; ++dx) norm += std::exp(-(dx * dx + dy * dy) / 2.0);

  double mass = 0.0;
  for (int y = 0; y < n; ++y)
    for (int x = 0; x < n; ++x) {
      const int dx = x - c, dy = y - c;
      const double expected = (std::abs(dx) <= radius && std::abs(dy) <= radius)
                                  ? std::exp(-(dx * dx + dy * dy) / 2.0) / norm
                                  : 0.0;
      CHECK(s.at(x, y) == doctest::Approx(expected).epsilon(1e-9).scale(1e-12));
      mass += s.at(x, y);
    }
  CHECK(std::abs(mass - 1.0) < 1e-6);
  CHECK(s.at(c, c) == doctest::Approx(1.0 / norm));
}

TEST_CASE("smoothing preserves the mean and the value range") {
  for (double sigma : {1.0, 2.0, 3.0}) {
    const DepthMap d = smooth_random(9, 96, 64);
    const DepthMap s = smooth_depth(d, sigma);
    const double m0 = std::accumulate(d.values.begin(), d.values.end(), 0.0) / double(d.values.size());
    const double m1 = std::accumulate(s.values.begin(), s.values.end(), 0.0) / double(s.values.size());
    CHECK(std::abs(m1 - m0) < 1e-3);
    const auto [lo, hi] = std::minmax_element(d.values.begin(), d.values.end());
    for (double v : s.values) {
      CHECK(v >= *lo);
      CHECK(v <= *hi);
    }
  }
}

TEST_CASE("gaussian kernel radius and normalisation") {
  CHECK(gaussian_kernel(1.0).size() == 7);
  CHECK(gaussian_kernel(0.4).size() == 5);
  const auto k = gaussian_kernel(2.2);
  CHECK(k.size() == 2 * 7 + 1);
  CHECK(std::accumulate(k.begin(), k.end(), 0.0) == doctest::Approx(1.0));
}

TEST_CASE("two equal-width bins with half-open edges") {
  const DepthHistogram h = build_histogram(map_of(3, 1, {0.1, 0.5, 0.9}), 2);
  REQUIRE(h.bin_count() == 2);
  CHECK(h.edges[0] == 0.1);
  CHECK(h.edges[1] == doctest::Approx(0.5));
  CHECK(h.edges[2] == 0.9);
  CHECK(bin_of(0.5, h) == 1);
  CHECK(bin_of(0.1, h) == 0);
  CHECK(h.counts == std::vector<std::size_t>{1, 2});
}

TEST_CASE("constant map collapses to one bin") {
  const DepthHistogram h = build_histogram(map_of(4, 4, std::vector<double>(16, 0.3)), 8);
  CHECK(h.bin_count() == 1);
  CHECK(h.counts == std::vector<std::size_t>{16});
  CHECK(bin_of(0.3, h) == 0);
}

TEST_CASE("traversal direction follows the depth convention") {
  std::vector<double> ramp;
  for (int i = 0; i < 64; ++i) ramp.push_back(i / 63.0);
  const auto near_high = build_histogram(map_of(64, 1, ramp, DepthConvention::NearerHigh), 8);
  const auto near_low = build_histogram(map_of(64, 1, ramp, DepthConvention::NearerLow), 8);
  CHECK(near_high.traversal == std::vector<int>{0, 1, 2, 3, 4, 5, 6, 7});
  CHECK(near_low.traversal == std::vector<int>{7, 6, 5, 4, 3, 2, 1, 0});
}

TEST_CASE("bin lookup edges and clamping") {
  std::vector<double> ramp;
  for (int i = 0; i <= 80; ++i) ramp.push_back(i / 80.0);
  const DepthHistogram h = build_histogram(map_of(81, 1, ramp), 8);
  CHECK(bin_of(1.0, h) == 7);
  CHECK(bin_of(h.edges[3], h) == 3);
  CHECK(bin_of(std::nextafter(h.edges[3], 0.0), h) == 2);
  CHECK(bin_of(-0.5, h) == 0);
  CHECK(bin_of(1.5, h) == 7);
}

TEST_CASE("every pixel lands in exactly one bin") {
  const DepthMap d = smooth_random(21, 50, 40);
  for (Binning b : {Binning::EqualWidth, Binning::EqualPopulation}) {
    const DepthHistogram h = build_histogram(d, 8, b);
    for (std::size_t i = 1; i < h.edges.size(); ++i) CHECK(h.edges[i] > h.edges[i - 1]);
    std::vector<std::size_t> counts(std::size_t(h.bin_count()), 0);
    for (double v : d.values) ++counts[std::size_t(bin_of(v, h))];
    CHECK(counts == h.counts);
    CHECK(std::accumulate(counts.begin(), counts.end(), std::size_t{0}) == d.values.size());
  }
}

TEST_CASE("equal-population bins hold similar counts") {
  const DepthMap d = smooth_random(8, 64, 64);
  const DepthHistogram h = build_histogram(d, 4, Binning::EqualPopulation);
  REQUIRE(h.bin_count() == 4);
  for (std::size_t c : h.counts) CHECK(std::abs(double(c) - 1024.0) < 64.0);
}

TEST_CASE("default sigma is the diagonal over 200") {
  CHECK(default_sigma(640, 512) == doctest::Approx(std::hypot(640.0, 512.0) / 200.0));
}
