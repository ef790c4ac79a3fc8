#include "ldpaint/render.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "ldpaint/error.hpp"
#include "ldpaint/io.hpp"

namespace ldpaint {

namespace {

void stamp(Image& canvas, double cx, double cy, double radius, Rgb color) {
  const double r2 = radius * radius;
  const int x0 = std::max(0, int(std::floor(cx - radius)));
  const int x1 = std::min(canvas.width() - 1, int(std::ceil(cx + radius)));
  const int y0 = std::max(0, int(std::floor(cy - radius)));
  const int y1 = std::min(canvas.height() - 1, int(std::ceil(cy + radius)));
  for (int y = y0; y <= y1; ++y) {
    const double dy = double(y) - cy;
    for (int x = x0; x <= x1; ++x) {
      const double dx = double(x) - cx;
      if (dx * dx + dy * dy <= r2) canvas.at(x, y) = color;
    }
  }
}

std::string frame_name(std::size_t count) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "frame%04zu.png", count);
  return buf;
}

}  // namespace

void raster_stroke(Image& canvas, const Stroke& stroke) {
  if (stroke.points.empty()) return;
  const double radius = stroke.width_px / 2.0;
  stamp(canvas, stroke.points[0].x, stroke.points[0].y, radius, stroke.color);
  for (std::size_t i = 1; i < stroke.points.size(); ++i) {
    const PointF a = stroke.points[i - 1];
    const PointF b = stroke.points[i];
    const double len = std::hypot(b.x - a.x, b.y - a.y);
    const int steps = std::max(1, int(std::ceil(len)));
    for (int s = 1; s <= steps; ++s) {
      const double t = double(s) / double(steps);
      stamp(canvas, a.x + t * (b.x - a.x), a.y + t * (b.y - a.y), radius,
            stroke.color);
    }
  }
}

Image render_prefix(const StrokePlan& plan, std::size_t count) {
  Image canvas(plan.width, plan.height, kWhite);
  count = std::min(count, plan.strokes.size());
  for (std::size_t i = 0; i < count; ++i) raster_stroke(canvas, plan.strokes[i]);
  return canvas;
}

RenderOutput render_plan(const StrokePlan& plan,
                         const std::vector<std::size_t>& snapshot_at,
                         const std::filesystem::path& out_dir) {
  if (!std::is_sorted(snapshot_at.begin(), snapshot_at.end()))
    throw UsageError("snapshot counts must be ascending");
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw OutputError("cannot create " + out_dir.string());

  RenderOutput out;
  out.painting = Image(plan.width, plan.height, kWhite);
  auto next = snapshot_at.begin();
  auto take_snapshots = [&](std::size_t drawn) {
    for (; next != snapshot_at.end() && *next == drawn; ++next) {
      const auto path = out_dir / frame_name(drawn);
      if (out.snapshots.empty() || out.snapshots.back() != path) {
        save_png(out.painting, path);
        out.snapshots.push_back(path);
      }
    }
  };
  take_snapshots(0);
  for (std::size_t i = 0; i < plan.strokes.size(); ++i) {
    raster_stroke(out.painting, plan.strokes[i]);
    take_snapshots(i + 1);
  }

  out.painting_path = out_dir / "painting.png";
  save_png(out.painting, out.painting_path);

  std::ostringstream list;
  for (const auto& p : out.snapshots) list << p.filename().string() << '\n';
  list << out.painting_path.filename().string() << '\n';
  write_text(out_dir / "frames.txt", list.str());
  return out;
}

std::vector<std::size_t> default_snapshots(std::size_t total) {
  std::vector<std::size_t> out;
  for (std::size_t c : {50, 250, 500, 1000})
    if (c <= total) out.push_back(c);
  for (std::size_t c = 1500; c <= total; c += 500) out.push_back(c);
  return out;
}

double mean_l2_error(const Image& a, const Image& b) {
  if (a.width() != b.width() || a.height() != b.height())
    throw InputError("image size mismatch");
  if (a.pixel_count() == 0) return 0.0;
  double sum = 0.0;
  for (std::size_t i = 0; i < a.pixel_count(); ++i)
    sum += std::sqrt(double(squared_distance(a[i], b[i])));
  return sum / double(a.pixel_count());
}

}  // namespace ldpaint
