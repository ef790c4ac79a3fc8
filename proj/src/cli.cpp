#include "ldpaint/cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <json.hpp>
#include <ostream>
#include <sstream>

#include "ldpaint/error.hpp"
#include "ldpaint/io.hpp"
#include "ldpaint/pipeline.hpp"

namespace ldpaint {

namespace {

std::pair<double, double> parse_pair(const std::string& text, const char* flag) {
  const auto x = text.find_first_of("xX");
  if (x == std::string::npos) throw UsageError(std::string(flag) + " expects AxB");
  try {
    std::size_t used_a = 0;
    std::size_t used_b = 0;
    const std::string a = text.substr(0, x);
    const std::string b = text.substr(x + 1);
    const double va = std::stod(a, &used_a);
    const double vb = std::stod(b, &used_b);
    if (used_a != a.size() || used_b != b.size()) throw std::invalid_argument(text);
    return {va, vb};
  } catch (const std::logic_error&) {
    throw UsageError(std::string(flag) + " expects AxB, got \"" + text + "\"");
  }
}

std::vector<std::size_t> parse_counts(const std::string& text) {
  std::vector<std::size_t> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    if (!std::all_of(item.begin(), item.end(), [](char c) { return std::isdigit((unsigned char)c); }))
      throw UsageError("--snapshots expects comma-separated counts, got \"" + text + "\"");
    out.push_back(std::stoul(item));
  }
  return out;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err) {
  CLI::App app{"Layered-depth stroke planner: paints a target image as an "
               "ordered stroke plan and schedules it for two drawing arms.",
               "ldpaint"};
  app.set_version_flag("--version", kVersion);

  Options o;
  std::string input, depth, labels, meta, out_dir, replay;
  std::string convention = "nearer-high";
  std::string binning = "equal-width";
  std::string grid = "5x5";
  std::string snapshots;
  std::string canvas = "160x160";
  int colors = 0;
  double sigma = -1.0;

  app.add_option("--input", input, "Target image (PNG)");
  app.add_option("--depth", depth, "Depth map (16-bit binary PGM)");
  app.add_option("--depth-convention", convention, "nearer-high | nearer-low")
      ->check(CLI::IsMember({"nearer-high", "nearer-low"}));
  app.add_option("--labels", labels, "Prediction id map (16-bit grayscale PNG)");
  app.add_option("--meta", meta, "Prediction metadata (JSON)");
  app.add_option("--out", out_dir, "Output directory");
  app.add_option("--strokes", o.strokes, "Total stroke count N")->capture_default_str();
  app.add_option("--colors", colors, "Palette size k (omit for unrestricted colors)");
  app.add_option("--kmeans-iters", o.kmeans_iters, "k-means iteration cap")->capture_default_str();
  app.add_option("--rng-seed", o.rng_seed, "Seed for k-means++ initialisation")->capture_default_str();
  app.add_option("--width", o.width_px, "Stroke width in pixels")->capture_default_str();
  app.add_option("--min-points", o.min_points, "Minimum stroke points")->capture_default_str();
  app.add_option("--max-points", o.max_points, "Maximum stroke points")->capture_default_str();
  app.add_option("--color-tolerance", o.color_tolerance, "Stroke stop tolerance (RGB distance)")->capture_default_str();
  app.add_option("--bins", o.bins, "Depth histogram bins")->capture_default_str();
  app.add_option("--binning", binning, "equal-width | equal-population")
      ->check(CLI::IsMember({"equal-width", "equal-population"}));
  app.add_option("--grid", grid, "Frame sort grid RxC")->capture_default_str();
  app.add_option("--sigma", sigma, "Depth smoothing sigma in pixels (default: diagonal/200)");
  app.add_option("--interleave-first-k", o.interleave_first_k,
                 "Emit the first K frames of every thing before the rest")->capture_default_str();
  app.add_option("--snapshots", snapshots, "Comma-separated stroke counts (default 50,250,500,1000,+500...)");
  app.add_flag("--robot", o.robot, "Export the two-arm drawing schedule");
  app.add_option("--canvas-mm", canvas, "Physical canvas WxH in mm")->capture_default_str();
  app.add_option("--margin-mm", o.canvas.margin_mm, "Canvas margin in mm")->capture_default_str();
  app.add_option("--pen-speed", o.timing.pen_speed_mm_s, "Drawing speed, mm/s")->capture_default_str();
  app.add_option("--travel-speed", o.timing.travel_speed_mm_s, "Pen-up travel speed, mm/s")->capture_default_str();
  app.add_option("--toolchange-s", o.timing.tool_change_s, "Tool change duration, s")->capture_default_str();
  app.add_flag("--debug", o.debug, "Write smoothed depth, superpixels and seeds under out/debug");
  app.add_option("--replay", replay, "Re-run with the parameters recorded in a manifest.json");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForVersion&) {
    out << kVersion << '\n';
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "ldpaint: usage error: " << e.what() << '\n';
    return kExitUsage;
  }

  try {
    if (!replay.empty()) {
      const auto bytes = read_bytes(replay);
      nlohmann::json manifest;
      try {
        manifest = nlohmann::json::parse(bytes.begin(), bytes.end());
      } catch (const nlohmann::json::exception& e) {
        throw InputError("manifest: " + std::string(e.what()));
      }
      if (!manifest.contains("parameters"))
        throw InputError("manifest has no parameters record");
      o = options_from_json(manifest.at("parameters").dump());
      if (!out_dir.empty()) o.out = out_dir;
    } else {
      o.input = input;
      o.depth = depth;
      o.labels = labels;
      o.meta = meta;
      o.out = out_dir;
      o.convention = convention == "nearer-high" ? DepthConvention::NearerHigh
                                                 : DepthConvention::NearerLow;
      o.binning = binning == "equal-population" ? Binning::EqualPopulation
                                                : Binning::EqualWidth;
      if (app.count("--colors")) o.colors = colors;
      if (app.count("--sigma")) o.sigma = sigma;
      if (app.count("--snapshots")) o.snapshots = parse_counts(snapshots);
      const auto [rows, cols] = parse_pair(grid, "--grid");
      if (rows != double(int(rows)) || cols != double(int(cols)))
        throw UsageError("--grid expects integers");
      o.grid = {int(rows), int(cols)};
      const auto [cw, ch] = parse_pair(canvas, "--canvas-mm");
      o.canvas.width_mm = cw;
      o.canvas.height_mm = ch;
    }
    validate(o);
    const PipelineResult result = run_pipeline(o);
    out << "ldpaint: " << result.stroke_count << " strokes in "
        << result.frame_count << " frames";
    if (result.palette_size) out << ", " << *result.palette_size << " colors";
    if (result.makespan_s) out << ", makespan " << *result.makespan_s << " s";
    out << " -> " << o.out.string() << '\n';
    return kExitOk;
  } catch (const UsageError& e) {
    err << "ldpaint: usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const InputError& e) {
    err << "ldpaint: input error: " << e.what() << '\n';
    return kExitInput;
  } catch (const OutputError& e) {
    err << "ldpaint: output error: " << e.what() << '\n';
    return kExitOutput;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "ldpaint: output error: " << e.what() << '\n';
    return kExitOutput;
  } catch (const std::exception& e) {
    err << "ldpaint: internal error: " << e.what() << '\n';
    return kExitInternal;
  }
}

}  // namespace ldpaint
