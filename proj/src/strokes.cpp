#include "ldpaint/strokes.hpp"

#include <cmath>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "ldpaint/error.hpp"
#include "ldpaint/io.hpp"
#include "ldpaint/render.hpp"

namespace ldpaint {

namespace {

double color_distance(Rgb a, Rgb b) {
  return std::sqrt(double(squared_distance(a, b)));
}

Pixel nearest_pixel(PointF p, int width, int height) {
  return {std::clamp(int(std::floor(p.x + 0.5)), 0, width - 1),
          std::clamp(int(std::floor(p.y + 0.5)), 0, height - 1)};
}

}  // namespace

StrokeGenerator::StrokeGenerator(const Image& reference, const Palette* palette,
                                 StrokeParams params)
    : reference_(reference),
      palette_(palette && !palette->empty() ? palette : nullptr),
      params_(params) {
  if (!(params_.width_px > 0.0)) throw UsageError("stroke width must be > 0");
  if (params_.max_points < 1) throw UsageError("max points must be >= 1");
  if (params_.min_points < 1) throw UsageError("min points must be >= 1");
  const int w = reference.width();
  const int h = reference.height();
  gradient_ = sobel(blur3x3(luma(reference), w, h), w, h);
}

Rgb StrokeGenerator::stroke_color(Pixel seed, int* index) const {
  const Rgb ref = reference_.at(seed.x, seed.y);
  if (!palette_) {
    if (index) *index = -1;
    return ref;
  }
  const int q = quantize(ref, *palette_);
  if (index) *index = q;
  return palette_->colors[std::size_t(q)];
}

Stroke StrokeGenerator::generate(Pixel seed, const Image& canvas) const {
  const int w = reference_.width();
  const int h = reference_.height();
  if (!reference_.contains(seed.x, seed.y))
    throw InputError("stroke seed outside the image");

  Stroke stroke;
  stroke.seed = seed;
  stroke.width_px = params_.width_px;
  stroke.color = stroke_color(seed, &stroke.color_index);
  stroke.points.push_back({double(seed.x), double(seed.y)});

  PointF p = stroke.points.front();
  double prev_dx = 0.0;
  double prev_dy = 0.0;
  bool has_prev = false;
  while (int(stroke.points.size()) < params_.max_points) {
    const Pixel tip = nearest_pixel(p, w, h);
    const bool min_met = int(stroke.points.size()) >= params_.min_points;
    if (min_met) {
      const Rgb ref = reference_.at(tip.x, tip.y);
      if (color_distance(ref, stroke.color) >
          color_distance(ref, canvas.at(tip.x, tip.y)) + params_.color_tolerance)
        break;
    }

    const std::size_t gi = std::size_t(tip.y) * w + tip.x;
    const double gx = gradient_.gx[gi];
    const double gy = gradient_.gy[gi];
    const double mag = std::sqrt(gx * gx + gy * gy);
    double dx;
    double dy;
    if (mag < params_.gradient_epsilon) {
      if (min_met) break;
      dx = has_prev ? prev_dx : 1.0;
      dy = has_prev ? prev_dy : 0.0;
    } else {
      dx = -gy / mag;
      dy = gx / mag;
      if (has_prev && dx * prev_dx + dy * prev_dy < 0.0) {
        dx = -dx;
        dy = -dy;
      }
    }

    const PointF next{p.x + params_.width_px * dx, p.y + params_.width_px * dy};
    if (next.x < 0.0 || next.y < 0.0 || next.x > double(w - 1) ||
        next.y > double(h - 1))
      break;
    stroke.points.push_back(next);
    p = next;
    prev_dx = dx;
    prev_dy = dy;
    has_prev = true;
  }
  return stroke;
}

Stroke generate_stroke(Pixel seed, const Image& reference, const Image& canvas,
                       const Palette* palette, const StrokeParams& params) {
  return StrokeGenerator(reference, palette, params).generate(seed, canvas);
}

StrokePlan generate_all(const SeedPlan& plan, const Image& reference,
                        const Palette* palette, const StrokeParams& params) {
  StrokePlan out;
  out.width = reference.width();
  out.height = reference.height();
  if (palette && !palette->empty()) out.palette = *palette;

  const StrokeGenerator generator(reference, palette, params);
  Image canvas(reference.width(), reference.height(), kWhite);
  out.strokes.reserve(plan.seed_count());
  for (std::size_t f = 0; f < plan.frames.size(); ++f) {
    const Frame& frame = plan.frames[f];
    for (const Pixel& seed : frame.seeds) {
      Stroke s = generator.generate(seed, canvas);
      s.frame_index = int(f);
      s.prediction_id = frame.prediction_id;
      s.bin_index = frame.bin_index;
      raster_stroke(canvas, s);
      out.strokes.push_back(std::move(s));
    }
  }
  return out;
}

void save_strokes_jsonl(const StrokePlan& plan,
                        const std::filesystem::path& path) {
  std::ostringstream text;
  for (std::size_t i = 0; i < plan.strokes.size(); ++i) {
    const Stroke& s = plan.strokes[i];
    nlohmann::json pts = nlohmann::json::array();
    for (const auto& p : s.points) pts.push_back({p.x, p.y});
    nlohmann::json line = {{"i", i},
                           {"pred", s.prediction_id},
                           {"bin", s.bin_index},
                           {"frame", s.frame_index},
                           {"color", {s.color.r, s.color.g, s.color.b}},
                           {"ci", s.color_index},
                           {"w", s.width_px},
                           {"seed", {s.seed.x, s.seed.y}},
                           {"pts", std::move(pts)}};
    text << line.dump() << '\n';
  }
  write_text(path, text.str());
}

std::vector<Stroke> load_strokes_jsonl(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path.string());
  std::vector<Stroke> strokes;
  std::string line;
  try {
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      const auto j = nlohmann::json::parse(line);
      Stroke s;
      s.prediction_id = j.at("pred").get<int>();
      s.bin_index = j.at("bin").get<int>();
      s.frame_index = j.value("frame", 0);
      const auto c = j.at("color").get<std::array<int, 3>>();
      s.color = {std::uint8_t(c[0]), std::uint8_t(c[1]), std::uint8_t(c[2])};
      s.color_index = j.value("ci", -1);
      s.width_px = j.at("w").get<double>();
      if (j.contains("seed")) {
        const auto seed = j.at("seed").get<std::array<int, 2>>();
        s.seed = {seed[0], seed[1]};
      }
      for (const auto& p : j.at("pts")) {
        const auto xy = p.get<std::array<double, 2>>();
        s.points.push_back({xy[0], xy[1]});
      }
      if (s.points.empty()) throw InputError("stroke without points");
      strokes.push_back(std::move(s));
    }
  } catch (const nlohmann::json::exception& e) {
    throw InputError("stroke file: " + std::string(e.what()));
  }
  return strokes;
}

}  // namespace ldpaint
