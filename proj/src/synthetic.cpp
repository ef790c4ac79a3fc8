#include "ldpaint/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "ldpaint/io.hpp"

namespace ldpaint {

namespace {

std::uint8_t to_byte(double v) {
  return std::uint8_t(std::clamp(std::lround(v), 0L, 255L));
}

double unit(std::mt19937_64& rng) { return double(rng() >> 11) * 0x1.0p-53; }

struct Ellipse {
  double cx, cy, rx, ry;
  // 0 at the center, 1 on the rim, > 1 outside.
  double radius(double x, double y) const {
    const double dx = (x - cx) / rx;
    const double dy = (y - cy) / ry;
    return std::sqrt(dx * dx + dy * dy);
  }
};

void normalise(std::vector<double>& values) {
  const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  const double a = *lo;
  const double span = *hi - *lo;
  for (double& v : values) v = span > 0.0 ? (v - a) / span : 0.0;
}

}  // namespace

Scene two_things_scene(int width, int height) {
  Scene scene;
  scene.name = "two-things";
  scene.image = Image(width, height);
  scene.depth = {width, height, std::vector<double>(std::size_t(width) * height),
                 DepthConvention::NearerHigh};

  const double sx = width / 640.0;
  const double sy = height / 512.0;
  const Ellipse a{180 * sx, 270 * sy, 140 * sx, 170 * sy};
  const Ellipse b{470 * sx, 280 * sy, 120 * sx, 150 * sy};
  const Rgb color_a{200, 40, 40};
  const Rgb color_b{230, 200, 40};

  std::vector<int> labels(std::size_t(width) * height, 0);
  for (int y = 0; y < height; ++y)
    for (int x = 0; x < width; ++x) {
      const double u = double(x) / std::max(1, width - 1);
      const double v = double(y) / std::max(1, height - 1);
      const std::size_t i = std::size_t(y) * width + x;
      // Background: sky-to-grass color gradient, depth ramps far to near.
      Rgb bg{to_byte(90 + 60 * u), to_byte(150 + 40 * v), to_byte(220 - 150 * v)};
      double d = v;
      int id = 0;
      Rgb c = bg;
      const double ra = a.radius(x, y);
      const double rb = b.radius(x, y);
      if (ra <= 1.0) {
        id = 1;
        c = color_a;
        d = 0.02 + 0.58 * (1.0 - ra);
      } else if (rb <= 1.0) {
        id = 2;
        c = color_b;
        d = 0.02 + 0.58 * (1.0 - rb);
      }
      labels[i] = id;
      scene.image[i] = c;
      scene.depth.values[i] = d;
    }

  std::vector<Prediction> meta(3);
  meta[0] = {0, PredictionKind::Stuff, 1.0, "grass", 9, 0, 0.0};
  meta[1] = {1, PredictionKind::Thing, 0.95, "person", 0, 0, 0.0};
  meta[2] = {2, PredictionKind::Thing, 0.9, "sheep", 0, 0, 0.0};
  scene.seg = make_segmentation(width, height, std::move(labels), std::move(meta));
  return scene;
}

Scene random_scene(std::uint64_t seed, int width, int height, int regions) {
  std::mt19937_64 rng(seed);
  Scene scene;
  scene.name = "random-" + std::to_string(seed);
  regions = std::max(1, regions);

  struct Site {
    double x, y;
    Rgb color;
    double shade_dx, shade_dy;
  };
  std::vector<Site> sites;
  for (int r = 0; r < regions; ++r) {
    Site s;
    s.x = unit(rng) * width;
    s.y = unit(rng) * height;
    s.color = {to_byte(40 + 200 * unit(rng)), to_byte(40 + 200 * unit(rng)),
               to_byte(40 + 200 * unit(rng))};
    s.shade_dx = (unit(rng) - 0.5) * 0.4;
    s.shade_dy = (unit(rng) - 0.5) * 0.4;
    sites.push_back(s);
  }

  struct Bump {
    double x, y, sigma, amp;
  };
  std::vector<Bump> bumps;
  for (int k = 0; k < 5; ++k)
    bumps.push_back({unit(rng) * width, unit(rng) * height,
                     (0.1 + 0.3 * unit(rng)) * std::max(width, height),
                     unit(rng) * 2.0 - 0.5});
  const double tilt_x = unit(rng) - 0.5;
  const double tilt_y = unit(rng);

  scene.image = Image(width, height);
  std::vector<int> labels(std::size_t(width) * height);
  std::vector<double> depth(labels.size());
  for (int y = 0; y < height; ++y)
    for (int x = 0; x < width; ++x) {
      const std::size_t i = std::size_t(y) * width + x;
      int best = 0;
      double best_d = 1e300;
      for (int r = 0; r < regions; ++r) {
        const double dx = x - sites[r].x;
        const double dy = y - sites[r].y;
        const double d = dx * dx + dy * dy;
        if (d < best_d) {
          best_d = d;
          best = r;
        }
      }
      labels[i] = best;
      const Site& s = sites[std::size_t(best)];
      const double shade = 1.0 + s.shade_dx * (x - s.x) / width * 4.0 +
                           s.shade_dy * (y - s.y) / height * 4.0;
      scene.image[i] = {to_byte(s.color.r * shade), to_byte(s.color.g * shade),
                        to_byte(s.color.b * shade)};
      double d = tilt_x * x / width + tilt_y * y / height;
      for (const auto& b : bumps) {
        const double dx = x - b.x;
        const double dy = y - b.y;
        d += b.amp * std::exp(-(dx * dx + dy * dy) / (2 * b.sigma * b.sigma));
      }
      depth[i] = d;
    }
  normalise(depth);
  scene.depth = {width, height, std::move(depth), DepthConvention::NearerHigh};

  std::vector<Prediction> meta;
  for (int r = 0; r < regions; ++r) {
    Prediction p;
    p.id = r;
    if (r % 2 == 0) {
      p.kind = PredictionKind::Thing;
      p.score = 0.5 + 0.5 * unit(rng);
      p.category = "object";
    } else {
      p.kind = PredictionKind::Stuff;
      p.score = 1.0;
      p.category = "region";
      p.semantic_group = int(rng() % 9);
    }
    meta.push_back(p);
  }
  scene.seg = make_segmentation(width, height, std::move(labels), std::move(meta));
  return scene;
}

std::vector<Scene> standard_corpus() {
  std::vector<Scene> corpus;
  corpus.push_back(two_things_scene(320, 256));
  corpus.push_back(random_scene(11, 256, 192, 6));
  corpus.push_back(random_scene(23, 224, 224, 9));
  return corpus;
}

void save_scene(const Scene& scene, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  save_png(scene.image, dir / "image.png");
  save_depth(scene.depth, dir / "depth.pgm");
  save_labels(scene.seg, dir / "labels.png", dir / "labels.json");
}

}  // namespace ldpaint
