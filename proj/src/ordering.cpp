#include "ldpaint/ordering.hpp"

#include <array>
#include <algorithm>
#include <json.hpp>

#include "ldpaint/error.hpp"
#include "ldpaint/gradient.hpp"
#include "ldpaint/io.hpp"

namespace ldpaint {

std::size_t SeedPlan::seed_count() const {
  std::size_t n = 0;
  for (const auto& f : frames) n += f.seeds.size();
  return n;
}

SeedKey seed_key(Pixel p, GridDims grid, int width, int height) {
  return {int(std::int64_t(grid.rows) * p.y / height),
          int(std::int64_t(grid.cols) * p.x / width), p.y, p.x};
}

std::vector<Frame> compute_frames(const DepthHistogram& hist,
                                  const SeedSet& seeds, const DepthMap& depth,
                                  GridDims grid) {
  if (grid.rows < 1 || grid.cols < 1)
    throw UsageError("grid dimensions must be >= 1x1");
  std::vector<std::vector<Pixel>> by_bin(std::size_t(hist.bin_count()));
  for (const Pixel& s : seeds.seeds)
    by_bin[std::size_t(bin_of(depth.at(s.x, s.y), hist))].push_back(s);

  std::vector<Frame> frames;
  for (int bin : hist.traversal) {
    auto& members = by_bin[std::size_t(bin)];
    if (members.empty()) continue;
    std::sort(members.begin(), members.end(), [&](Pixel a, Pixel b) {
      return seed_key(a, grid, depth.width, depth.height) <
             seed_key(b, grid, depth.width, depth.height);
    });
    frames.push_back({seeds.prediction_id, bin, std::move(members)});
  }
  return frames;
}

namespace {

// Drops seeds from the tail frames of the predictions holding the most
// seeds until the plan fits `limit`. Only reachable when there are more
// predictions than strokes.
void trim_to(std::vector<std::vector<Frame>>& per_prediction,
             std::size_t limit) {
  auto count = [](const std::vector<Frame>& fs) {
    std::size_t n = 0;
    for (const auto& f : fs) n += f.seeds.size();
    return n;
  };
  std::size_t total = 0;
  for (const auto& fs : per_prediction) total += count(fs);
  while (total > limit) {
    std::size_t best = 0;
    std::size_t best_n = 0;
    for (std::size_t i = 0; i < per_prediction.size(); ++i) {
      const std::size_t n = count(per_prediction[i]);
      if (n > best_n) {
        best_n = n;
        best = i;
      }
    }
    auto& fs = per_prediction[best];
    fs.back().seeds.pop_back();
    if (fs.back().seeds.empty()) fs.pop_back();
    --total;
  }
}

}  // namespace

LayeredDepthResult layered_depth_plan(const Image& image,
                                      const Segmentation& seg,
                                      const DepthMap& depth,
                                      std::int64_t total_strokes,
                                      const PlanParams& params) {
  if (total_strokes < 1) throw UsageError("stroke count must be >= 1");
  check_dimensions(image, depth, seg);

  LayeredDepthResult out;
  out.plan.grid = params.grid;
  out.order = order_predictions(seg);
  const double sigma = params.sigma < 0.0
                           ? default_sigma(image.width(), image.height())
                           : params.sigma;
  out.smoothed = smooth_depth(depth, sigma);
  out.histogram = build_histogram(out.smoothed, params.bin_count, params.binning);
  out.budgets = allocate_budgets(out.order, std::int64_t(image.pixel_count()),
                                 total_strokes);

  const auto gradient =
      sobel(luma(image), image.width(), image.height()).magnitudes();
  const auto masks = seg.masks();
  out.superpixel_map.assign(image.pixel_count(), -1);

  std::vector<std::vector<Frame>> per_prediction;
  int region_offset = 0;
  for (std::size_t i = 0; i < out.order.size(); ++i) {
    const Prediction& p = out.order[i];
    const Mask& mask = masks.at(p.id);
    SeedSet seeds{p.id, {}};
    if (out.budgets[i] > 0 && !mask.empty()) {
      const auto regions = superpixels(gradient, mask, int(out.budgets[i]));
      for (std::size_t k = 0; k < mask.size(); ++k)
        out.superpixel_map[std::size_t(mask.pixels[k])] =
            region_offset + regions.region_of[k];
      region_offset += regions.region_count;
      seeds = region_centroids(regions, mask, p.id);
    }
    per_prediction.push_back(
        seeds.seeds.empty()
            ? std::vector<Frame>{}
            : compute_frames(out.histogram, seeds, out.smoothed, params.grid));
    out.seed_sets.push_back(std::move(seeds));
  }
  trim_to(per_prediction, std::size_t(total_strokes));

  std::vector<std::size_t> consumed(per_prediction.size(), 0);
  if (params.interleave_first_k > 0) {
    for (std::size_t i = 0; i < per_prediction.size(); ++i) {
      if (out.order[i].kind != PredictionKind::Thing) continue;
      const auto& fs = per_prediction[i];
      const std::size_t k =
          std::min(fs.size(), std::size_t(params.interleave_first_k));
      for (std::size_t f = 0; f < k; ++f) out.plan.frames.push_back(fs[f]);
      consumed[i] = k;
    }
  }
  for (std::size_t i = 0; i < per_prediction.size(); ++i)
    for (std::size_t f = consumed[i]; f < per_prediction[i].size(); ++f)
      out.plan.frames.push_back(std::move(per_prediction[i][f]));
  return out;
}

void save_seed_plan(const SeedPlan& plan, const std::filesystem::path& path) {
  nlohmann::json doc = nlohmann::json::array();
  for (const auto& f : plan.frames) {
    nlohmann::json seeds = nlohmann::json::array();
    for (const auto& s : f.seeds) seeds.push_back({s.x, s.y});
    doc.push_back({{"predictionId", f.prediction_id},
                   {"binIndex", f.bin_index},
                   {"seeds", std::move(seeds)}});
  }
  write_text(path, doc.dump() + "\n");
}

SeedPlan load_seed_plan(const std::filesystem::path& path) {
  const auto bytes = read_bytes(path);
  SeedPlan plan;
  try {
    const auto doc = nlohmann::json::parse(bytes.begin(), bytes.end());
    for (const auto& f : doc) {
      Frame frame;
      frame.prediction_id = f.at("predictionId").get<int>();
      frame.bin_index = f.at("binIndex").get<int>();
      for (const auto& s : f.at("seeds")) {
        const auto xy = s.get<std::array<int, 2>>();
        frame.seeds.push_back({xy[0], xy[1]});
      }
      plan.frames.push_back(std::move(frame));
    }
  } catch (const nlohmann::json::exception& e) {
    throw InputError("seed plan: " + std::string(e.what()));
  }
  return plan;
}

}  // namespace ldpaint
