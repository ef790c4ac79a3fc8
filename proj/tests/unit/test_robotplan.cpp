#include <doctest.h>

#include <cmath>
#include <map>

#include "ldpaint/robotplan.hpp"
#include "ldpaint/strokes.hpp"
#include "support.hpp"

using namespace ldpaint;

namespace {

StrokePlan pixel_plan(int w, int h, std::vector<std::vector<PointF>> lines) {
  StrokePlan plan{w, h, {}, std::nullopt};
  for (auto& pts : lines) {
    Stroke s;
    s.points = std::move(pts);
    s.color_index = 0;
    plan.strokes.push_back(s);
  }
  return plan;
}

PhysicalPlan physical(std::vector<PhysicalStroke> strokes, double w = 100, double h = 100) {
  PhysicalPlan p;
  p.strokes = std::move(strokes);
  for (std::size_t i = 0; i < p.strokes.size(); ++i) p.strokes[i].global_index = i;
  p.canvas_width_mm = w;
  p.canvas_height_mm = h;
  return p;
}

double drawn_length(const std::vector<ArmTask>& tasks, std::size_t index) {
  double total = 0.0;
  for (const auto& t : tasks)
    if (t.global_index == index)
      for (const auto& seg : t.segments) total += path_length(seg);
  return total;
}

}  // namespace

TEST_CASE("square image on a square canvas") {
  const StrokePlan plan = pixel_plan(300, 300, {{{0, 0}}, {{150, 150}}, {{300, 300}}});
  const PhysicalPlan p = map_to_canvas(plan, {160, 160, 5});
  CHECK(p.scale == doctest::Approx(150.0 / 300.0));
  CHECK(p.strokes[0].points[0] == PointMm{5, 5});
  CHECK(p.strokes[1].points[0].x == doctest::Approx(80.0));
  CHECK(p.strokes[1].points[0].y == doctest::Approx(80.0));
  CHECK(p.strokes[2].points[0].x == doctest::Approx(155.0));
}

TEST_CASE("square image on a tall canvas is centered vertically") {
  const StrokePlan plan = pixel_plan(200, 200, {{{0, 0}}, {{100, 100}}});
  const PhysicalPlan p = map_to_canvas(plan, {160, 200, 5});
  const double scale = std::min((160.0 - 10.0) / 200.0, (200.0 - 10.0) / 200.0);
  CHECK(p.scale == doctest::Approx(scale));
  CHECK(p.offset_x_mm == doctest::Approx(5.0));
  CHECK(p.offset_y_mm == doctest::Approx((200.0 - 200.0 * scale) / 2.0));
  CHECK(p.strokes[1].points[0].x == doctest::Approx(80.0));
  CHECK(p.strokes[1].points[0].y == doctest::Approx(100.0));
}

TEST_CASE("raw colors get indices by first use") {
  StrokePlan plan = pixel_plan(10, 10, {{{1, 1}}, {{2, 2}}, {{3, 3}}});
  plan.strokes[0].color = {1, 0, 0};
  plan.strokes[1].color = {0, 1, 0};
  plan.strokes[2].color = {1, 0, 0};
  for (auto& s : plan.strokes) s.color_index = -1;
  const PhysicalPlan p = map_to_canvas(plan, {});
  CHECK(p.strokes[0].color_index == 0);
  CHECK(p.strokes[1].color_index == 1);
  CHECK(p.strokes[2].color_index == 0);
}

TEST_CASE("side assignment") {
  const PhysicalPlan p = physical({{{{10, 10}, {30, 40}}, 0, 0},
                                   {{{50, 20}}, 0, 0},
                                   {{{60, 5}, {90, 5}}, 0, 0}});
  const auto tasks = split_canvas(p);
  REQUIRE(tasks.size() == 3);
  CHECK(tasks[0].arm == Arm::Left);
  CHECK(tasks[1].arm == Arm::Right);
  CHECK(tasks[2].arm == Arm::Right);
}

TEST_CASE("crossing strokes are cut on the midline") {
  const PhysicalPlan p = physical({{{{20, 50}, {80, 50}}, 2, 0},
                                   {{{40, 10}, {70, 10}, {30, 30}, {60, 60}}, 1, 0}});
  const auto tasks = split_canvas(p);
  for (const auto& t : tasks)
    for (const auto& seg : t.segments)
      for (const PointMm& q : seg) {
        if (t.arm == Arm::Left) CHECK(q.x <= 50.0);
        else CHECK(q.x >= 50.0);
      }
  const auto first = std::count_if(tasks.begin(), tasks.end(), [](const ArmTask& t) { return t.global_index == 0; });
  CHECK(first == 2);
  CHECK(drawn_length(tasks, 0) == doctest::Approx(60.0));
  CHECK(drawn_length(tasks, 1) == doctest::Approx(path_length(p.strokes[1].points)));
  for (const auto& t : tasks)
    if (t.global_index == 0) {
      REQUIRE(t.segments.size() == 1);
      const auto& seg = t.segments[0];
      const PointMm cut = t.arm == Arm::Left ? seg.back() : seg.front();
      CHECK(cut.x == 50.0);
      CHECK(cut.y == 50.0);
      CHECK(t.color_index == 2);
    }
}

TEST_CASE("one stroke of 100 mm at 50 mm/s draws for two seconds") {
  const PhysicalPlan p = physical({{{{60, 10}, {60, 110}}, 0, 0}}, 100, 120);
  const ArmSchedule s = schedule_bimanual(split_canvas(p), {50.0, 100.0, 15.0});
  REQUIRE(s.right.size() == 1);
  CHECK(s.right[0].kind == EventKind::Draw);
  CHECK(s.right[0].t_end - s.right[0].t_start == doctest::Approx(2.0));
  CHECK(s.makespan == doctest::Approx(2.0));
}

TEST_CASE("all work on the right leaves the left arm idle") {
  std::vector<PhysicalStroke> strokes;
  for (int i = 0; i < 6; ++i) strokes.push_back({{{60.0 + i, 10}, {60.0 + i, 30}}, i % 2, 0});
  const ArmSchedule s = schedule_bimanual(split_canvas(physical(strokes)), {});
  for (const auto& e : s.left) CHECK(e.kind == EventKind::Idle);
  CHECK(s.left_stats.serial_s == 0.0);
  CHECK(s.makespan == doctest::Approx(s.right_stats.serial_s));
}

TEST_CASE("balanced halves without tool changes finish between half and full serial time") {
  std::vector<PhysicalStroke> strokes;
  for (int i = 0; i < 10; ++i) {
    strokes.push_back({{{10, 5.0 + 8 * i}, {40, 5.0 + 8 * i}}, 0, 0});
    strokes.push_back({{{60, 5.0 + 8 * i}, {90, 5.0 + 8 * i}}, 0, 0});
  }
  const ArmSchedule s = schedule_bimanual(split_canvas(physical(strokes)), {});
  CHECK(s.tool_changes() == 0);
  CHECK(s.makespan >= s.serial_total() / 2.0 - 1e-9);
  CHECK(s.makespan <= s.serial_total() + 1e-9);
  CHECK(s.makespan == doctest::Approx(std::max(s.left_stats.serial_s, s.right_stats.serial_s)));
}

TEST_CASE("contiguous color blocks need at most three changes per arm") {
  std::vector<PhysicalStroke> strokes;
  for (int color = 0; color < 4; ++color)
    for (int i = 0; i < 5; ++i) {
      strokes.push_back({{{5.0 + i, 10.0 * color}, {20.0 + i, 10.0 * color + 5}}, color, 0});
      strokes.push_back({{{70.0 + i, 10.0 * color}, {85.0 + i, 10.0 * color + 5}}, color, 0});
    }
  const ArmSchedule s = schedule_bimanual(split_canvas(physical(strokes)), {});
  auto changes = [](const std::vector<ScheduleEvent>& events) {
    return std::count_if(events.begin(), events.end(),
                         [](const ScheduleEvent& e) { return e.kind == EventKind::ToolChange; });
  };
  CHECK(changes(s.left) <= 3);
  CHECK(changes(s.right) <= 3);
  CHECK(changes(s.left) == s.left_stats.tool_changes);
  CHECK(s.tool_changes() == 6);
}

TEST_CASE("per-arm events do not overlap and the makespan is the last end time") {
  std::vector<PhysicalStroke> strokes;
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> u(0.0, 100.0);
  for (int i = 0; i < 40; ++i) strokes.push_back({{{u(rng), u(rng)}, {u(rng), u(rng)}}, int(rng() % 4), 0});
  const ArmSchedule s = schedule_bimanual(split_canvas(physical(strokes)), {});
  double last = 0.0;
  for (Arm arm : {Arm::Left, Arm::Right}) {
    const auto& ev = s.events(arm);
    for (std::size_t i = 0; i < ev.size(); ++i) {
      CHECK(ev[i].t_end >= ev[i].t_start);
      if (i > 0) CHECK(ev[i].t_start >= ev[i - 1].t_end);
      last = std::max(last, ev[i].t_end);
    }
  }
  CHECK(s.makespan == last);
}

TEST_CASE("schedule export round trip") {
  testsupport::TempDir dir("schedule");
  const ArmSchedule empty = schedule_bimanual({}, {});
  export_plan(empty, dir / "empty.jsonl");
  const std::string text = testsupport::read_file(dir / "empty.jsonl");
  CHECK(std::count(text.begin(), text.end(), '\n') == 1);
  CHECK(text.find("summary") != std::string::npos);

  std::vector<PhysicalStroke> strokes;
  for (int i = 0; i < 12; ++i)
    strokes.push_back({{{8.0 * i, 10}, {8.0 * i + 3, 40}, {8.0 * i + 1, 70}}, i / 4, 0});
  const ArmSchedule s = schedule_bimanual(split_canvas(physical(strokes)), {});
  export_plan(s, dir / "s.jsonl");
  const ArmSchedule back = load_schedule(dir / "s.jsonl");
  CHECK(back.left == s.left);
  CHECK(back.right == s.right);
  CHECK(back.left_stats == s.left_stats);
  CHECK(back.right_stats == s.right_stats);
  CHECK(back.makespan == s.makespan);
}
