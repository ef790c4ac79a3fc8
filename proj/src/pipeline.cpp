#include "ldpaint/pipeline.hpp"

#include <json.hpp>

#include "ldpaint/error.hpp"
#include "ldpaint/io.hpp"
#include "ldpaint/palette.hpp"
#include "ldpaint/render.hpp"

namespace ldpaint {

using json = nlohmann::json;

void validate(const Options& o) {
  if (o.strokes < 1) throw UsageError("--strokes must be >= 1");
  if (o.colors && *o.colors < 1) throw UsageError("--colors must be >= 1");
  if (o.kmeans_iters < 1) throw UsageError("--kmeans-iters must be >= 1");
  if (!(o.width_px > 0.0)) throw UsageError("--width must be > 0");
  if (o.min_points < 1 || o.max_points < 1)
    throw UsageError("--min-points and --max-points must be >= 1");
  if (o.color_tolerance < 0.0) throw UsageError("--color-tolerance must be >= 0");
  if (o.bins < 1) throw UsageError("--bins must be >= 1");
  if (o.grid.rows < 1 || o.grid.cols < 1) throw UsageError("--grid must be at least 1x1");
  if (o.sigma && !(*o.sigma >= 0.0)) throw UsageError("--sigma must be >= 0");
  if (o.interleave_first_k < 0) throw UsageError("--interleave-first-k must be >= 0");
  if (o.snapshots && !std::is_sorted(o.snapshots->begin(), o.snapshots->end()))
    throw UsageError("--snapshots must be ascending");
  if (o.robot) {
    if (!(o.canvas.width_mm - 2 * o.canvas.margin_mm > 0.0) ||
        !(o.canvas.height_mm - 2 * o.canvas.margin_mm > 0.0) ||
        o.canvas.margin_mm < 0.0)
      throw UsageError("--canvas-mm minus margins must be positive");
    if (!(o.timing.pen_speed_mm_s > 0.0) || !(o.timing.travel_speed_mm_s > 0.0))
      throw UsageError("--pen-speed and --travel-speed must be > 0");
    if (o.timing.tool_change_s < 0.0) throw UsageError("--toolchange-s must be >= 0");
  }
  if (o.input.empty() || o.depth.empty() || o.labels.empty() || o.meta.empty())
    throw UsageError("--input, --depth, --labels and --meta are required");
  if (o.out.empty()) throw UsageError("--out is required");
}

std::string options_to_json(const Options& o) {
  json j = {
      {"input", o.input.string()},
      {"depth", o.depth.string()},
      {"labels", o.labels.string()},
      {"meta", o.meta.string()},
      {"out", o.out.string()},
      {"depthConvention",
       o.convention == DepthConvention::NearerHigh ? "nearer-high" : "nearer-low"},
      {"strokes", o.strokes},
      {"colors", o.colors ? json(*o.colors) : json(nullptr)},
      {"kmeansIters", o.kmeans_iters},
      {"rngSeed", o.rng_seed},
      {"width", o.width_px},
      {"minPoints", o.min_points},
      {"maxPoints", o.max_points},
      {"colorTolerance", o.color_tolerance},
      {"bins", o.bins},
      {"binning", o.binning == Binning::EqualWidth ? "equal-width" : "equal-population"},
      {"grid", {o.grid.rows, o.grid.cols}},
      {"sigma", o.sigma ? json(*o.sigma) : json(nullptr)},
      {"interleaveFirstK", o.interleave_first_k},
      {"snapshots", o.snapshots ? json(*o.snapshots) : json(nullptr)},
      {"robot", o.robot},
      {"canvasMm", {o.canvas.width_mm, o.canvas.height_mm}},
      {"marginMm", o.canvas.margin_mm},
      {"penSpeed", o.timing.pen_speed_mm_s},
      {"travelSpeed", o.timing.travel_speed_mm_s},
      {"toolchangeS", o.timing.tool_change_s},
      {"debug", o.debug}};
  return j.dump(2);
}

Options options_from_json(const std::string& text) {
  Options o;
  try {
    const json j = json::parse(text);
    o.input = j.at("input").get<std::string>();
    o.depth = j.at("depth").get<std::string>();
    o.labels = j.at("labels").get<std::string>();
    o.meta = j.at("meta").get<std::string>();
    o.out = j.at("out").get<std::string>();
    const auto conv = j.at("depthConvention").get<std::string>();
    if (conv != "nearer-high" && conv != "nearer-low")
      throw UsageError("bad depthConvention " + conv);
    o.convention = conv == "nearer-high" ? DepthConvention::NearerHigh
                                         : DepthConvention::NearerLow;
    o.strokes = j.at("strokes").get<std::int64_t>();
    if (!j.at("colors").is_null()) o.colors = j.at("colors").get<int>();
    o.kmeans_iters = j.at("kmeansIters").get<int>();
    o.rng_seed = j.at("rngSeed").get<std::uint64_t>();
    o.width_px = j.at("width").get<double>();
    o.min_points = j.at("minPoints").get<int>();
    o.max_points = j.at("maxPoints").get<int>();
    o.color_tolerance = j.at("colorTolerance").get<double>();
    o.bins = j.at("bins").get<int>();
    o.binning = j.at("binning").get<std::string>() == "equal-population"
                    ? Binning::EqualPopulation
                    : Binning::EqualWidth;
    const auto grid = j.at("grid").get<std::array<int, 2>>();
    o.grid = {grid[0], grid[1]};
    if (!j.at("sigma").is_null()) o.sigma = j.at("sigma").get<double>();
    o.interleave_first_k = j.at("interleaveFirstK").get<int>();
    if (!j.at("snapshots").is_null())
      o.snapshots = j.at("snapshots").get<std::vector<std::size_t>>();
    o.robot = j.at("robot").get<bool>();
    const auto canvas = j.at("canvasMm").get<std::array<double, 2>>();
    o.canvas = {canvas[0], canvas[1], j.at("marginMm").get<double>()};
    o.timing = {j.at("penSpeed").get<double>(), j.at("travelSpeed").get<double>(),
                j.at("toolchangeS").get<double>()};
    o.debug = j.value("debug", false);
  } catch (const json::exception& e) {
    throw UsageError("manifest parameters: " + std::string(e.what()));
  }
  return o;
}

namespace {

json input_record(const std::filesystem::path& path) {
  return {{"path", path.string()}, {"sha256", sha256_hex(read_bytes(path))}};
}

void write_debug_dumps(const LayeredDepthResult& planned, const Image& image,
                       const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  save_depth(planned.smoothed, dir / "smoothed_depth.pgm");

  Gray16 regions{image.width(), image.height(), {}};
  regions.values.reserve(planned.superpixel_map.size());
  for (int r : planned.superpixel_map)
    regions.values.push_back(r < 0 ? std::uint16_t(65535) : std::uint16_t(r % 65535));
  save_gray16_png(regions, dir / "superpixels.png");

  json seeds = json::array();
  for (const auto& set : planned.seed_sets) {
    json pts = json::array();
    for (const auto& s : set.seeds) pts.push_back({s.x, s.y});
    seeds.push_back({{"predictionId", set.prediction_id}, {"seeds", std::move(pts)}});
  }
  write_text(dir / "seeds.json", seeds.dump() + "\n");
}

}  // namespace

PipelineResult run_pipeline(const Options& o) {
  validate(o);

  const Image image = load_image(o.input);
  const DepthMap depth = load_depth(o.depth, o.convention);
  const Segmentation seg = load_labels(o.labels, o.meta);
  check_dimensions(image, depth, seg);

  json manifest = {{"tool", "ldpaint"}, {"version", kVersion}};
  manifest["parameters"] = json::parse(options_to_json(o));
  manifest["inputs"] = {{"image", input_record(o.input)},
                        {"depth", input_record(o.depth)},
                        {"labels", input_record(o.labels)},
                        {"meta", input_record(o.meta)}};

  std::error_code ec;
  std::filesystem::create_directories(o.out, ec);
  if (ec || !std::filesystem::is_directory(o.out))
    throw OutputError("cannot create output directory " + o.out.string());

  PipelineResult result;
  auto record = [&](const std::filesystem::path& p) {
    result.outputs.push_back(std::filesystem::relative(p, o.out));
  };

  std::optional<Palette> palette;
  if (o.colors) {
    palette = build_palette(image, {*o.colors, o.rng_seed, o.kmeans_iters});
    save_palette(*palette, o.out / "palette.json");
    record(o.out / "palette.json");
    result.palette_size = palette->size();
  }

  PlanParams params;
  params.sigma = o.sigma.value_or(-1.0);
  params.bin_count = o.bins;
  params.grid = o.grid;
  params.binning = o.binning;
  params.interleave_first_k = o.interleave_first_k;
  const LayeredDepthResult planned = layered_depth_plan(image, seg, depth, o.strokes, params);
  save_seed_plan(planned.plan, o.out / "plan.json");
  record(o.out / "plan.json");
  result.frame_count = planned.plan.frames.size();

  StrokeParams stroke_params;
  stroke_params.width_px = o.width_px;
  stroke_params.min_points = o.min_points;
  stroke_params.max_points = o.max_points;
  stroke_params.color_tolerance = o.color_tolerance;
  const StrokePlan strokes =
      generate_all(planned.plan, image, palette ? &*palette : nullptr, stroke_params);
  save_strokes_jsonl(strokes, o.out / "strokes.jsonl");
  record(o.out / "strokes.jsonl");
  result.stroke_count = strokes.strokes.size();

  const auto snapshots = o.snapshots.value_or(default_snapshots(strokes.strokes.size()));
  const RenderOutput rendered = render_plan(strokes, snapshots, o.out);
  for (const auto& p : rendered.snapshots) record(p);
  record(rendered.painting_path);
  record(o.out / "frames.txt");

  if (o.robot) {
    const PhysicalPlan physical = map_to_canvas(strokes, o.canvas);
    const auto tasks = split_canvas(physical);
    const ArmSchedule schedule = schedule_bimanual(tasks, o.timing);
    export_plan(schedule, o.out / "schedule.jsonl");
    save_assignment_svg(physical, tasks, o.out / "schedule.svg");
    record(o.out / "schedule.jsonl");
    record(o.out / "schedule.svg");
    result.makespan_s = schedule.makespan;
    manifest["schedule"] = {{"makespan", schedule.makespan},
                            {"toolChanges", schedule.tool_changes()},
                            {"scaleMmPerPx", physical.scale}};
  }

  if (o.debug) {
    write_debug_dumps(planned, image, o.out / "debug");
    for (const char* name : {"smoothed_depth.pgm", "superpixels.png", "seeds.json"})
      record(o.out / "debug" / name);
  }

  manifest["counts"] = {{"strokes", result.stroke_count},
                        {"frames", result.frame_count},
                        {"bins", planned.histogram.bin_count()}};
  json outputs = json::array();
  for (const auto& p : result.outputs) outputs.push_back(p.generic_string());
  manifest["outputs"] = outputs;
  write_text(o.out / "manifest.json", manifest.dump(2) + "\n");
  return result;
}

}  // namespace ldpaint
