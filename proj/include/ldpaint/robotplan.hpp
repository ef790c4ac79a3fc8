#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "ldpaint/strokes.hpp"

namespace ldpaint {

struct PointMm {
  double x = 0.0;
  double y = 0.0;
  friend bool operator==(const PointMm&, const PointMm&) = default;
};

using Polyline = std::vector<PointMm>;

struct PhysicalStroke {
  Polyline points;
  int color_index = 0;
  std::size_t global_index = 0;
};

struct PhysicalPlan {
  std::vector<PhysicalStroke> strokes;
  double canvas_width_mm = 0.0;
  double canvas_height_mm = 0.0;
  double scale = 1.0;  // mm per pixel
  double offset_x_mm = 0.0;
  double offset_y_mm = 0.0;
};

struct CanvasSpec {
  double width_mm = 160.0;
  double height_mm = 160.0;
  double margin_mm = 5.0;
};

/// Uniform aspect-preserving scale into the canvas minus margins, centered.
/// Pixel (0,0) maps to the top-left corner of the drawn area. Strokes
/// without a palette index get one per distinct color, by first use.
PhysicalPlan map_to_canvas(const StrokePlan& plan, const CanvasSpec& canvas);

enum class Arm { Left, Right };

const char* arm_name(Arm arm);

/// The part of one stroke drawn by one arm. A stroke that crosses the
/// midline several times contributes several pen-down segments.
struct ArmTask {
  std::size_t global_index = 0;
  int color_index = 0;
  Arm arm = Arm::Left;
  std::vector<Polyline> segments;
};

/// Assigns strokes to canvas halves around x = width/2. Crossing strokes are
/// cut at interpolated midline points. Strokes that stay on one side go by
/// their centroid, with the midline itself belonging to the right half.
/// Output is ordered by global index, left before right.
std::vector<ArmTask> split_canvas(const PhysicalPlan& plan);

struct Timing {
  double pen_speed_mm_s = 40.0;
  double travel_speed_mm_s = 100.0;
  double tool_change_s = 15.0;
};

enum class EventKind { Draw, ToolChange, Idle };

const char* event_kind_name(EventKind kind);

struct ScheduleEvent {
  Arm arm = Arm::Left;
  EventKind kind = EventKind::Draw;
  double t_start = 0.0;
  double t_end = 0.0;
  std::optional<std::size_t> stroke_index;
  int color_index = -1;
  std::vector<Polyline> segments;

  friend bool operator==(const ScheduleEvent&, const ScheduleEvent&) = default;
};

struct ArmStats {
  double serial_s = 0.0;  // draw + travel + tool changes
  double draw_s = 0.0;
  int tool_changes = 0;
  friend bool operator==(const ArmStats&, const ArmStats&) = default;
};

struct ArmSchedule {
  std::vector<ScheduleEvent> left;
  std::vector<ScheduleEvent> right;
  ArmStats left_stats;
  ArmStats right_stats;
  double makespan = 0.0;

  const std::vector<ScheduleEvent>& events(Arm arm) const {
    return arm == Arm::Left ? left : right;
  }
  double serial_total() const { return left_stats.serial_s + right_stats.serial_s; }
  int tool_changes() const { return left_stats.tool_changes + right_stats.tool_changes; }
};

double path_length(const Polyline& line);

/// Discrete-event simulation of two arms consuming their halves' tasks in
/// global order. Each arm starts holding the pen of its first task; a color
/// switch costs one tool-change event on that arm only. Travel between
/// segments is the gap between events. An arm that finishes early idles
/// until the makespan.
ArmSchedule schedule_bimanual(const std::vector<ArmTask>& tasks,
                              const Timing& timing);

// JSON Lines: one event per line, then a summary record.
void export_plan(const ArmSchedule& schedule, const std::filesystem::path& path);
ArmSchedule load_schedule(const std::filesystem::path& path);

// Left/right assignment overlay for inspection.
void save_assignment_svg(const PhysicalPlan& plan,
                         const std::vector<ArmTask>& tasks,
                         const std::filesystem::path& path);

}  // namespace ldpaint
