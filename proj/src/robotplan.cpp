#include "ldpaint/robotplan.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <json.hpp>
#include <map>
#include <queue>
#include <sstream>

#include "ldpaint/error.hpp"
#include "ldpaint/io.hpp"

namespace ldpaint {

using json = nlohmann::json;

const char* arm_name(Arm arm) { return arm == Arm::Left ? "left" : "right"; }

const char* event_kind_name(EventKind kind) {
  switch (kind) {
    case EventKind::Draw: return "draw";
    case EventKind::ToolChange: return "toolchange";
    case EventKind::Idle: return "idle";
  }
  return "?";
}

PhysicalPlan map_to_canvas(const StrokePlan& plan, const CanvasSpec& canvas) {
  const double avail_w = canvas.width_mm - 2.0 * canvas.margin_mm;
  const double avail_h = canvas.height_mm - 2.0 * canvas.margin_mm;
  if (!(avail_w > 0.0) || !(avail_h > 0.0) || canvas.margin_mm < 0.0)
    throw UsageError("degenerate canvas: no drawable area inside margins");
  if (plan.width < 1 || plan.height < 1)
    throw InputError("stroke plan has no canvas size");

  PhysicalPlan out;
  out.canvas_width_mm = canvas.width_mm;
  out.canvas_height_mm = canvas.height_mm;
  out.scale = std::min(avail_w / plan.width, avail_h / plan.height);
  out.offset_x_mm = (canvas.width_mm - plan.width * out.scale) / 2.0;
  out.offset_y_mm = (canvas.height_mm - plan.height * out.scale) / 2.0;

  std::map<Rgb, int> raw_colors;
  out.strokes.reserve(plan.strokes.size());
  for (std::size_t i = 0; i < plan.strokes.size(); ++i) {
    const Stroke& s = plan.strokes[i];
    PhysicalStroke ps;
    ps.global_index = i;
    if (s.color_index >= 0) {
      ps.color_index = s.color_index;
    } else {
      auto [it, inserted] = raw_colors.try_emplace(s.color, int(raw_colors.size()));
      ps.color_index = it->second;
    }
    for (const auto& p : s.points)
      ps.points.push_back({out.offset_x_mm + p.x * out.scale,
                           out.offset_y_mm + p.y * out.scale});
    out.strokes.push_back(std::move(ps));
  }
  return out;
}

std::vector<ArmTask> split_canvas(const PhysicalPlan& plan) {
  const double mid = plan.canvas_width_mm / 2.0;
  auto side = [mid](const PointMm& p) { return p.x < mid ? Arm::Left : Arm::Right; };

  std::vector<ArmTask> tasks;
  for (const auto& stroke : plan.strokes) {
    if (stroke.points.empty()) continue;
    std::vector<std::pair<Arm, Polyline>> pieces;
    Arm current = side(stroke.points.front());
    Polyline line{stroke.points.front()};
    for (std::size_t i = 1; i < stroke.points.size(); ++i) {
      const PointMm& a = stroke.points[i - 1];
      const PointMm& b = stroke.points[i];
      const Arm s = side(b);
      if (s != current) {
        const double t = (mid - a.x) / (b.x - a.x);
        const PointMm cut{mid, a.y + t * (b.y - a.y)};
        line.push_back(cut);
        pieces.emplace_back(current, std::move(line));
        line = Polyline{cut};
        current = s;
      }
      line.push_back(b);
    }
    if (pieces.empty()) {
      double cx = 0.0;
      for (const auto& p : line) cx += p.x;
      cx /= double(line.size());
      current = cx < mid ? Arm::Left : Arm::Right;
    }
    pieces.emplace_back(current, std::move(line));

    ArmTask left{stroke.global_index, stroke.color_index, Arm::Left, {}};
    ArmTask right{stroke.global_index, stroke.color_index, Arm::Right, {}};
    for (auto& [arm, piece] : pieces)
      (arm == Arm::Left ? left : right).segments.push_back(std::move(piece));
    if (!left.segments.empty()) tasks.push_back(std::move(left));
    if (!right.segments.empty()) tasks.push_back(std::move(right));
  }
  return tasks;
}

double path_length(const Polyline& line) {
  double len = 0.0;
  for (std::size_t i = 1; i < line.size(); ++i)
    len += std::hypot(line[i].x - line[i - 1].x, line[i].y - line[i - 1].y);
  return len;
}

namespace {

double distance(const PointMm& a, const PointMm& b) {
  return std::hypot(b.x - a.x, b.y - a.y);
}

struct ArmState {
  Arm arm = Arm::Left;
  std::vector<const ArmTask*> queue;
  std::size_t next = 0;
  double time = 0.0;
  int pen = -1;
  std::optional<PointMm> position;
  std::vector<ScheduleEvent> events;
  ArmStats stats;
};

// Executes the arm's next task starting at its current time.
void run_next_task(ArmState& st, const Timing& timing) {
  const ArmTask& task = *st.queue[st.next++];
  if (st.pen >= 0 && task.color_index != st.pen) {
    ScheduleEvent change;
    change.arm = st.arm;
    change.kind = EventKind::ToolChange;
    change.t_start = st.time;
    change.t_end = st.time + timing.tool_change_s;
    change.color_index = task.color_index;
    st.time = change.t_end;
    st.stats.tool_changes += 1;
    st.stats.serial_s += timing.tool_change_s;
    st.events.push_back(std::move(change));
  }
  st.pen = task.color_index;

  const PointMm start = task.segments.front().front();
  if (st.position) {
    const double travel = distance(*st.position, start) / timing.travel_speed_mm_s;
    st.time += travel;
    st.stats.serial_s += travel;
  }

  double draw = 0.0;
  double hops = 0.0;
  for (std::size_t s = 0; s < task.segments.size(); ++s) {
    draw += path_length(task.segments[s]) / timing.pen_speed_mm_s;
    if (s > 0)
      hops += distance(task.segments[s - 1].back(), task.segments[s].front()) /
              timing.travel_speed_mm_s;
  }
  ScheduleEvent ev;
  ev.arm = st.arm;
  ev.kind = EventKind::Draw;
  ev.t_start = st.time;
  ev.t_end = st.time + draw + hops;
  ev.stroke_index = task.global_index;
  ev.color_index = task.color_index;
  ev.segments = task.segments;
  st.time = ev.t_end;
  st.stats.serial_s += draw + hops;
  st.stats.draw_s += draw;
  st.position = task.segments.back().back();
  st.events.push_back(std::move(ev));
}

}  // namespace

ArmSchedule schedule_bimanual(const std::vector<ArmTask>& tasks,
                              const Timing& timing) {
  if (!(timing.pen_speed_mm_s > 0.0) || !(timing.travel_speed_mm_s > 0.0))
    throw UsageError("pen and travel speeds must be > 0");
  if (timing.tool_change_s < 0.0) throw UsageError("tool change time must be >= 0");

  ArmState arms[2];
  arms[0].arm = Arm::Left;
  arms[1].arm = Arm::Right;
  for (const auto& t : tasks) {
    if (t.segments.empty() || t.segments.front().empty()) continue;
    arms[t.arm == Arm::Left ? 0 : 1].queue.push_back(&t);
  }
  for (auto& a : arms)
    if (!a.queue.empty()) a.pen = a.queue.front()->color_index;

  // Ready queue ordered by (time, arm); an idle arm immediately takes its
  // next task.
  using Ready = std::pair<double, int>;
  std::priority_queue<Ready, std::vector<Ready>, std::greater<>> ready;
  for (int i = 0; i < 2; ++i)
    if (!arms[i].queue.empty()) ready.push({0.0, i});
  while (!ready.empty()) {
    const int i = ready.top().second;
    ready.pop();
    run_next_task(arms[i], timing);
    if (arms[i].next < arms[i].queue.size()) ready.push({arms[i].time, i});
  }

  ArmSchedule out;
  out.makespan = std::max(arms[0].time, arms[1].time);
  for (auto& a : arms) {
    if (out.makespan > 0.0 && a.time < out.makespan) {
      ScheduleEvent idle;
      idle.arm = a.arm;
      idle.kind = EventKind::Idle;
      idle.t_start = a.time;
      idle.t_end = out.makespan;
      a.events.push_back(std::move(idle));
    }
  }
  out.left = std::move(arms[0].events);
  out.right = std::move(arms[1].events);
  out.left_stats = arms[0].stats;
  out.right_stats = arms[1].stats;
  return out;
}

namespace {

json polylines_to_json(const std::vector<Polyline>& segments) {
  json out = json::array();
  for (const auto& line : segments) {
    json pts = json::array();
    for (const auto& p : line) pts.push_back({p.x, p.y});
    out.push_back(std::move(pts));
  }
  return out;
}

json stats_to_json(const ArmStats& s, double makespan) {
  return {{"serial", s.serial_s},
          {"draw", s.draw_s},
          {"toolChanges", s.tool_changes},
          {"utilization", makespan > 0.0 ? s.draw_s / makespan : 0.0}};
}

ArmStats stats_from_json(const json& j) {
  return {j.at("serial").get<double>(), j.at("draw").get<double>(),
          j.at("toolChanges").get<int>()};
}

}  // namespace

void export_plan(const ArmSchedule& schedule, const std::filesystem::path& path) {
  std::vector<const ScheduleEvent*> events;
  for (const auto& e : schedule.left) events.push_back(&e);
  for (const auto& e : schedule.right) events.push_back(&e);
  std::stable_sort(events.begin(), events.end(),
                   [](const ScheduleEvent* a, const ScheduleEvent* b) {
                     if (a->t_start != b->t_start) return a->t_start < b->t_start;
                     return a->arm < b->arm;
                   });

  std::ostringstream text;
  for (const ScheduleEvent* e : events) {
    json line = {{"arm", arm_name(e->arm)},
                 {"kind", event_kind_name(e->kind)},
                 {"t0", e->t_start},
                 {"t1", e->t_end}};
    if (e->stroke_index) line["stroke"] = *e->stroke_index;
    if (e->color_index >= 0) line["color"] = e->color_index;
    if (!e->segments.empty()) line["segments"] = polylines_to_json(e->segments);
    text << line.dump() << '\n';
  }
  json summary = {
      {"makespan", schedule.makespan},
      {"serialTotal", schedule.serial_total()},
      {"toolChanges", schedule.tool_changes()},
      {"left", stats_to_json(schedule.left_stats, schedule.makespan)},
      {"right", stats_to_json(schedule.right_stats, schedule.makespan)}};
  text << json{{"summary", summary}}.dump() << '\n';
  write_text(path, text.str());
}

ArmSchedule load_schedule(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path.string());
  ArmSchedule out;
  bool have_summary = false;
  std::string line;
  try {
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      const json j = json::parse(line);
      if (j.contains("summary")) {
        const json& s = j.at("summary");
        out.makespan = s.at("makespan").get<double>();
        out.left_stats = stats_from_json(s.at("left"));
        out.right_stats = stats_from_json(s.at("right"));
        have_summary = true;
        continue;
      }
      ScheduleEvent e;
      const auto arm = j.at("arm").get<std::string>();
      if (arm != "left" && arm != "right") throw InputError("bad arm " + arm);
      e.arm = arm == "left" ? Arm::Left : Arm::Right;
      const auto kind = j.at("kind").get<std::string>();
      if (kind == "draw") e.kind = EventKind::Draw;
      else if (kind == "toolchange") e.kind = EventKind::ToolChange;
      else if (kind == "idle") e.kind = EventKind::Idle;
      else throw InputError("bad event kind " + kind);
      e.t_start = j.at("t0").get<double>();
      e.t_end = j.at("t1").get<double>();
      if (j.contains("stroke")) e.stroke_index = j.at("stroke").get<std::size_t>();
      e.color_index = j.value("color", -1);
      if (j.contains("segments"))
        for (const auto& seg : j.at("segments")) {
          Polyline pl;
          for (const auto& p : seg) {
            const auto xy = p.get<std::array<double, 2>>();
            pl.push_back({xy[0], xy[1]});
          }
          e.segments.push_back(std::move(pl));
        }
      (e.arm == Arm::Left ? out.left : out.right).push_back(std::move(e));
    }
  } catch (const json::exception& e) {
    throw InputError("schedule file: " + std::string(e.what()));
  }
  if (!have_summary) throw InputError("schedule file has no summary record");
  return out;
}

void save_assignment_svg(const PhysicalPlan& plan,
                         const std::vector<ArmTask>& tasks,
                         const std::filesystem::path& path) {
  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << plan.canvas_width_mm
      << "mm\" height=\"" << plan.canvas_height_mm << "mm\" viewBox=\"0 0 "
      << plan.canvas_width_mm << ' ' << plan.canvas_height_mm << "\">\n";
  svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  const double mid = plan.canvas_width_mm / 2.0;
  svg << "<line x1=\"" << mid << "\" y1=\"0\" x2=\"" << mid << "\" y2=\""
      << plan.canvas_height_mm << "\" stroke=\"black\" stroke-width=\"0.3\"/>\n";
  for (const auto& t : tasks) {
    const char* color = t.arm == Arm::Left ? "#1f5fbf" : "#c0392b";
    for (const auto& seg : t.segments) {
      svg << "<polyline fill=\"none\" stroke=\"" << color
          << "\" stroke-width=\"0.4\" points=\"";
      for (const auto& p : seg) svg << p.x << ',' << p.y << ' ';
      svg << "\"/>\n";
    }
  }
  svg << "</svg>\n";
  write_text(path, svg.str());
}

}  // namespace ldpaint
