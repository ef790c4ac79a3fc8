#include <pybind11/numpy.h>
#include <pybind11/operators.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <sstream>

#include "ldpaint/cli.hpp"
#include "ldpaint/depth.hpp"
#include "ldpaint/error.hpp"
#include "ldpaint/io.hpp"
#include "ldpaint/ordering.hpp"
#include "ldpaint/palette.hpp"
#include "ldpaint/pipeline.hpp"
#include "ldpaint/render.hpp"
#include "ldpaint/robotplan.hpp"
#include "ldpaint/segmentation.hpp"
#include "ldpaint/strokes.hpp"
#include "ldpaint/synthetic.hpp"

namespace py = pybind11;
using namespace ldpaint;

namespace {

py::tuple rgb_tuple(Rgb c) { return py::make_tuple(c.r, c.g, c.b); }

Rgb rgb_from(const std::array<int, 3>& c) {
  for (int v : c)
    if (v < 0 || v > 255) throw py::value_error("color channel out of range");
  return {std::uint8_t(c[0]), std::uint8_t(c[1]), std::uint8_t(c[2])};
}

py::array_t<std::uint8_t> image_to_array(const Image& image) {
  py::array_t<std::uint8_t> out({image.height(), image.width(), 3});
  auto view = out.mutable_unchecked<3>();
  for (int y = 0; y < image.height(); ++y)
    for (int x = 0; x < image.width(); ++x) {
      const Rgb c = image.at(x, y);
      view(y, x, 0) = c.r;
      view(y, x, 1) = c.g;
      view(y, x, 2) = c.b;
    }
  return out;
}

Image image_from_array(py::array_t<std::uint8_t, py::array::c_style | py::array::forcecast> a) {
  if (a.ndim() != 3 || a.shape(2) != 3)
    throw py::value_error("expected an (H, W, 3) uint8 array");
  auto view = a.unchecked<3>();
  Image image(int(a.shape(1)), int(a.shape(0)));
  for (int y = 0; y < image.height(); ++y)
    for (int x = 0; x < image.width(); ++x)
      image.at(x, y) = {view(y, x, 0), view(y, x, 1), view(y, x, 2)};
  return image;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Layered-depth stroke planning, rendering and two-arm scheduling.";
  m.attr("__version__") = kVersion;

  auto base = py::register_exception<Error>(m, "Error");
  py::register_exception<UsageError>(m, "UsageError", base.ptr());
  py::register_exception<InputError>(m, "InputError", base.ptr());
  py::register_exception<OutputError>(m, "OutputError", base.ptr());

  py::enum_<DepthConvention>(m, "DepthConvention")
      .value("NEARER_HIGH", DepthConvention::NearerHigh)
      .value("NEARER_LOW", DepthConvention::NearerLow);
  py::enum_<PredictionKind>(m, "PredictionKind")
      .value("THING", PredictionKind::Thing)
      .value("STUFF", PredictionKind::Stuff);
  py::enum_<Binning>(m, "Binning")
      .value("EQUAL_WIDTH", Binning::EqualWidth)
      .value("EQUAL_POPULATION", Binning::EqualPopulation);
  py::enum_<Arm>(m, "Arm").value("LEFT", Arm::Left).value("RIGHT", Arm::Right);
  py::enum_<EventKind>(m, "EventKind")
      .value("DRAW", EventKind::Draw)
      .value("TOOLCHANGE", EventKind::ToolChange)
      .value("IDLE", EventKind::Idle);

  py::class_<Image>(m, "Image")
      .def(py::init([](int w, int h, std::array<int, 3> fill) {
             if (w < 1 || h < 1) throw py::value_error("image size must be positive");
             return Image(w, h, rgb_from(fill));
           }),
           py::arg("width"), py::arg("height"),
           py::arg("fill") = std::array<int, 3>{255, 255, 255})
      .def_property_readonly("width", &Image::width)
      .def_property_readonly("height", &Image::height)
      .def("pixel", [](const Image& im, int x, int y) {
        if (!im.contains(x, y)) throw py::index_error("pixel out of range");
        return rgb_tuple(im.at(x, y));
      })
      .def("to_array", &image_to_array)
      .def_static("from_array", &image_from_array)
      .def(py::self == py::self);

  py::class_<DepthMap>(m, "DepthMap")
      .def_readonly("width", &DepthMap::width)
      .def_readonly("height", &DepthMap::height)
      .def_readonly("convention", &DepthMap::convention)
      .def("at", [](const DepthMap& d, int x, int y) { return d.at(x, y); })
      .def("values", [](const DepthMap& d) { return d.values; });

  py::class_<Prediction>(m, "Prediction")
      .def_readonly("id", &Prediction::id)
      .def_readonly("kind", &Prediction::kind)
      .def_readonly("score", &Prediction::score)
      .def_readonly("category", &Prediction::category)
      .def_readonly("semantic_group", &Prediction::semantic_group)
      .def_readonly("area", &Prediction::area)
      .def_readonly("weight", &Prediction::weight);

  py::class_<Segmentation>(m, "Segmentation")
      .def_readonly("width", &Segmentation::width)
      .def_readonly("height", &Segmentation::height)
      .def_readonly("predictions", &Segmentation::predictions)
      .def("label", [](const Segmentation& s, int x, int y) {
        return s.labels.at(std::size_t(y) * s.width + x);
      });

  py::class_<Scene>(m, "Scene")
      .def_readonly("name", &Scene::name)
      .def_readonly("image", &Scene::image)
      .def_readonly("depth", &Scene::depth)
      .def_readonly("segmentation", &Scene::seg);

  m.def("load_image", &load_image, py::arg("path"));
  m.def("save_png", &save_png, py::arg("image"), py::arg("path"));
  m.def("load_depth", &load_depth, py::arg("path"),
        py::arg("convention") = DepthConvention::NearerHigh);
  m.def("save_depth", &save_depth, py::arg("depth"), py::arg("path"));
  m.def("load_labels", &load_labels, py::arg("map_path"), py::arg("meta_path"));
  m.def("two_things_scene", &two_things_scene, py::arg("width") = 640,
        py::arg("height") = 512);
  m.def("random_scene", &random_scene, py::arg("seed"), py::arg("width"),
        py::arg("height"), py::arg("regions"));
  m.def("save_scene", &save_scene, py::arg("scene"), py::arg("dir"));

  py::class_<Palette>(m, "Palette")
      .def_property_readonly("colors", [](const Palette& p) {
        py::list out;
        for (const auto& c : p.colors) out.append(rgb_tuple(c));
        return out;
      })
      .def_readonly("k", &Palette::k)
      .def("__len__", &Palette::size);
  m.def("build_palette",
        [](const Image& image, int k, std::uint64_t rng_seed, int max_iters) {
          return build_palette(image, {k, rng_seed, max_iters});
        },
        py::arg("image"), py::arg("k"), py::arg("rng_seed") = 0,
        py::arg("max_iters") = 100);
  m.def("kmeans_sse_trace",
        [](const Image& image, int k, std::uint64_t rng_seed, int max_iters) {
          std::vector<double> trace;
          build_palette(image, {k, rng_seed, max_iters},
                        [&](const KMeansIteration& it) { trace.push_back(it.sse); });
          return trace;
        },
        py::arg("image"), py::arg("k"), py::arg("rng_seed") = 0,
        py::arg("max_iters") = 100);
  m.def("quantize",
        [](std::array<int, 3> color, const Palette& palette) {
          if (palette.empty()) throw py::value_error("empty palette");
          return quantize(rgb_from(color), palette);
        },
        py::arg("color"), py::arg("palette"));

  m.def("order_predictions", &order_predictions, py::arg("segmentation"));
  m.def("seed_budget",
        py::overload_cast<const Prediction&, std::int64_t, std::int64_t>(&seed_budget),
        py::arg("prediction"), py::arg("image_pixels"), py::arg("total_strokes"));
  m.def("allocate_budgets", &allocate_budgets, py::arg("predictions"),
        py::arg("image_pixels"), py::arg("total_strokes"));

  py::class_<DepthHistogram>(m, "DepthHistogram")
      .def_readonly("edges", &DepthHistogram::edges)
      .def_readonly("traversal", &DepthHistogram::traversal)
      .def_readonly("counts", &DepthHistogram::counts)
      .def_property_readonly("bin_count", &DepthHistogram::bin_count);
  m.def("smooth_depth", &smooth_depth, py::arg("depth"), py::arg("sigma"));
  m.def("build_histogram", &build_histogram, py::arg("depth"), py::arg("bin_count"),
        py::arg("binning") = Binning::EqualWidth);
  m.def("bin_of", &bin_of, py::arg("value"), py::arg("histogram"));

  py::class_<Frame>(m, "Frame")
      .def_readonly("prediction_id", &Frame::prediction_id)
      .def_readonly("bin_index", &Frame::bin_index)
      .def_property_readonly("seeds", [](const Frame& f) {
        std::vector<std::pair<int, int>> out;
        for (const auto& s : f.seeds) out.emplace_back(s.x, s.y);
        return out;
      });
  py::class_<SeedPlan>(m, "SeedPlan")
      .def_readonly("frames", &SeedPlan::frames)
      .def("seed_count", &SeedPlan::seed_count);
  py::class_<LayeredDepthResult>(m, "LayeredDepthResult")
      .def_readonly("plan", &LayeredDepthResult::plan)
      .def_readonly("order", &LayeredDepthResult::order)
      .def_readonly("budgets", &LayeredDepthResult::budgets)
      .def_readonly("smoothed", &LayeredDepthResult::smoothed)
      .def_readonly("histogram", &LayeredDepthResult::histogram);
  m.def("layered_depth_plan",
        [](const Image& image, const Segmentation& seg, const DepthMap& depth,
           std::int64_t total_strokes, std::optional<double> sigma, int bins,
           std::pair<int, int> grid, int interleave_first_k) {
          PlanParams p;
          p.sigma = sigma.value_or(-1.0);
          p.bin_count = bins;
          p.grid = {grid.first, grid.second};
          p.interleave_first_k = interleave_first_k;
          return layered_depth_plan(image, seg, depth, total_strokes, p);
        },
        py::arg("image"), py::arg("segmentation"), py::arg("depth"),
        py::arg("total_strokes"), py::arg("sigma") = py::none(), py::arg("bins") = 8,
        py::arg("grid") = std::pair<int, int>{5, 5}, py::arg("interleave_first_k") = 0);

  py::class_<Stroke>(m, "Stroke")
      .def_property_readonly("points", [](const Stroke& s) {
        std::vector<std::pair<double, double>> out;
        for (const auto& p : s.points) out.emplace_back(p.x, p.y);
        return out;
      })
      .def_readonly("width_px", &Stroke::width_px)
      .def_property_readonly("color", [](const Stroke& s) { return rgb_tuple(s.color); })
      .def_readonly("color_index", &Stroke::color_index)
      .def_readonly("prediction_id", &Stroke::prediction_id)
      .def_readonly("bin_index", &Stroke::bin_index)
      .def_readonly("frame_index", &Stroke::frame_index);
  py::class_<StrokePlan>(m, "StrokePlan")
      .def_readonly("width", &StrokePlan::width)
      .def_readonly("height", &StrokePlan::height)
      .def_readonly("strokes", &StrokePlan::strokes)
      .def("__len__", [](const StrokePlan& p) { return p.strokes.size(); });
  m.def("generate_all",
        [](const SeedPlan& plan, const Image& reference, const Palette* palette,
           double width_px, int min_points, int max_points, double color_tolerance) {
          StrokeParams p;
          p.width_px = width_px;
          p.min_points = min_points;
          p.max_points = max_points;
          p.color_tolerance = color_tolerance;
          return generate_all(plan, reference, palette, p);
        },
        py::arg("plan"), py::arg("reference"), py::arg("palette") = nullptr,
        py::arg("width_px") = 6.0, py::arg("min_points") = 2,
        py::arg("max_points") = 12, py::arg("color_tolerance") = 0.0);
  m.def("save_strokes_jsonl", &save_strokes_jsonl, py::arg("plan"), py::arg("path"));
  m.def("render_prefix", &render_prefix, py::arg("plan"), py::arg("count"));
  m.def("render_plan",
        [](const StrokePlan& plan, std::vector<std::size_t> snapshot_at,
           const std::filesystem::path& out_dir) {
          return render_plan(plan, snapshot_at, out_dir).painting;
        },
        py::arg("plan"), py::arg("snapshot_at"), py::arg("out_dir"));
  m.def("mean_l2_error", &mean_l2_error);

  py::class_<PhysicalPlan>(m, "PhysicalPlan")
      .def_readonly("canvas_width_mm", &PhysicalPlan::canvas_width_mm)
      .def_readonly("canvas_height_mm", &PhysicalPlan::canvas_height_mm)
      .def_readonly("scale", &PhysicalPlan::scale)
      .def("__len__", [](const PhysicalPlan& p) { return p.strokes.size(); });
  py::class_<ArmTask>(m, "ArmTask")
      .def_readonly("global_index", &ArmTask::global_index)
      .def_readonly("color_index", &ArmTask::color_index)
      .def_readonly("arm", &ArmTask::arm);
  py::class_<ScheduleEvent>(m, "ScheduleEvent")
      .def_readonly("arm", &ScheduleEvent::arm)
      .def_readonly("kind", &ScheduleEvent::kind)
      .def_readonly("t_start", &ScheduleEvent::t_start)
      .def_readonly("t_end", &ScheduleEvent::t_end)
      .def_readonly("stroke_index", &ScheduleEvent::stroke_index)
      .def_readonly("color_index", &ScheduleEvent::color_index);
  py::class_<ArmSchedule>(m, "ArmSchedule")
      .def_readonly("left", &ArmSchedule::left)
      .def_readonly("right", &ArmSchedule::right)
      .def_readonly("makespan", &ArmSchedule::makespan)
      .def("serial_total", &ArmSchedule::serial_total)
      .def("tool_changes", &ArmSchedule::tool_changes);
  m.def("map_to_canvas",
        [](const StrokePlan& plan, std::pair<double, double> canvas_mm, double margin_mm) {
          return map_to_canvas(plan, {canvas_mm.first, canvas_mm.second, margin_mm});
        },
        py::arg("plan"), py::arg("canvas_mm") = std::pair<double, double>{160, 160},
        py::arg("margin_mm") = 5.0);
  m.def("split_canvas", &split_canvas, py::arg("plan"));
  m.def("schedule_bimanual",
        [](const std::vector<ArmTask>& tasks, double pen_speed, double travel_speed,
           double toolchange_s) {
          return schedule_bimanual(tasks, {pen_speed, travel_speed, toolchange_s});
        },
        py::arg("tasks"), py::arg("pen_speed") = 40.0, py::arg("travel_speed") = 100.0,
        py::arg("toolchange_s") = 15.0);
  m.def("export_plan", &export_plan, py::arg("schedule"), py::arg("path"));
  m.def("load_schedule", &load_schedule, py::arg("path"));

  m.def("run_cli",
        [](const std::vector<std::string>& args) {
          std::ostringstream out;
          std::ostringstream err;
          const int code = run_cli(args, out, err);
          return py::make_tuple(code, out.str(), err.str());
        },
        py::arg("args"),
        "Runs the ldpaint command line in-process; returns (exit_code, stdout, stderr).");
}
