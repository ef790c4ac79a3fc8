#include <doctest.h>

#include <cmath>

#include "ldpaint/error.hpp"
#include "ldpaint/io.hpp"
#include "support.hpp"

using namespace ldpaint;
using testsupport::TempDir;

namespace {

Prediction meta(int id, PredictionKind kind, double score, int group = 0,
                std::string category = "x") {
  Prediction p;
  p.id = id;
  p.kind = kind;
  p.score = score;
  p.semantic_group = group;
  p.category = std::move(category);
  return p;
}

}  // namespace

TEST_CASE("png round trip of a white 2x2 image") {
  TempDir dir("png");
  save_png(Image(2, 2), dir / "w.png");
  const Image back = load_image(dir / "w.png");
  CHECK(back.width() == 2);
  CHECK(back.height() == 2);
  for (std::size_t i = 0; i < 4; ++i) CHECK(back[i] == Rgb{255, 255, 255});
}

TEST_CASE("odd-sized image keeps its dimensions") {
  TempDir dir("png");
  Image image(641, 513, {10, 20, 30});
  image.at(640, 512) = {1, 2, 3};
  save_png(image, dir / "scene.png");
  const Image back = load_image(dir / "scene.png");
  CHECK(back.width() == 641);
  CHECK(back.height() == 513);
  CHECK(back == image);
}

TEST_CASE("truncated png reports a decode failure") {
  TempDir dir("png");
  save_png(Image(32, 32, {1, 2, 3}), dir / "ok.png");
  const std::string bytes = testsupport::read_file(dir / "ok.png");
  testsupport::write_file(dir / "cut.png", bytes.substr(0, bytes.size() / 2));
  testsupport::write_file(dir / "junk.png", "not a png at all");
  CHECK_THROWS_WITH_AS(load_image(dir / "cut.png"), doctest::Contains("decode failure"),
                       InputError);
  CHECK_THROWS_WITH_AS(load_image(dir / "junk.png"), doctest::Contains("decode failure"),
                       InputError);
  CHECK_THROWS_AS(load_image(dir / "missing.png"), InputError);
}

TEST_CASE("depth samples are normalised by 65535") {
  TempDir dir("pgm");
  testsupport::write_file(dir / "max.pgm", testsupport::pgm16(3, 2, std::vector<std::uint16_t>(6, 65535)));
  testsupport::write_file(dir / "zero.pgm", testsupport::pgm16(3, 2, std::vector<std::uint16_t>(6, 0)));
  testsupport::write_file(dir / "mid.pgm",
                          testsupport::pgm16(2, 1, {32768, 1}, 65535, "made by hand"));

  for (double v : load_depth(dir / "max.pgm", DepthConvention::NearerHigh).values) CHECK(v == 1.0);
  for (double v : load_depth(dir / "zero.pgm", DepthConvention::NearerHigh).values) CHECK(v == 0.0);
  const DepthMap mid = load_depth(dir / "mid.pgm", DepthConvention::NearerLow);
  CHECK(mid.width == 2);
  CHECK(mid.height == 1);
  CHECK(mid.convention == DepthConvention::NearerLow);
  CHECK(mid.values[0] == doctest::Approx(0.50001).epsilon(1e-5));
  CHECK(mid.values[0] == 32768.0 / 65535.0);
  CHECK(mid.values[1] == 1.0 / 65535.0);
}

TEST_CASE("depth header errors") {
  TempDir dir("pgm");
  testsupport::write_file(dir / "maxval.pgm", testsupport::pgm16(1, 1, {0}, 255));
  testsupport::write_file(dir / "p2.pgm", "P2\n1 1\n65535\n0\n");
  testsupport::write_file(dir / "short.pgm", testsupport::pgm16(4, 4, {1, 2, 3}));
  testsupport::write_file(dir / "header.pgm", "P5\n4\n");
  CHECK_THROWS_WITH_AS(load_depth(dir / "maxval.pgm", DepthConvention::NearerHigh),
                       doctest::Contains("maxval"), InputError);
  CHECK_THROWS_AS(load_depth(dir / "p2.pgm", DepthConvention::NearerHigh), InputError);
  CHECK_THROWS_AS(load_depth(dir / "short.pgm", DepthConvention::NearerHigh), InputError);
  CHECK_THROWS_AS(load_depth(dir / "header.pgm", DepthConvention::NearerHigh), InputError);
}

TEST_CASE("depth save/load round trip within one quantum") {
  TempDir dir("pgm");
  DepthMap d{17, 9, {}, DepthConvention::NearerHigh};
  std::mt19937 rng(5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 17 * 9; ++i) d.values.push_back(u(rng));
  save_depth(d, dir / "d.pgm");
  const DepthMap back = load_depth(dir / "d.pgm", DepthConvention::NearerHigh);
  REQUIRE(back.values.size() == d.values.size());
  for (std::size_t i = 0; i < d.values.size(); ++i)
    CHECK(std::abs(back.values[i] - d.values[i]) <= 1.0 / 65535.0);
}

TEST_CASE("single stuff label covers the image") {
  TempDir dir("labels");
  save_gray16_png({4, 3, std::vector<std::uint16_t>(12, 0)}, dir / "l.png");
  testsupport::write_file(
      dir / "l.json",
      R"([{"id":0,"kind":"stuff","score":1.0,"category":"sky","semanticGroup":9}])");
  const Segmentation seg = load_labels(dir / "l.png", dir / "l.json");
  REQUIRE(seg.predictions.size() == 1);
  CHECK(seg.predictions[0].area == 12);
  CHECK(seg.predictions[0].category == "sky");
  CHECK(seg.predictions[0].semantic_group == 9);
  CHECK(seg.predictions[0].kind == PredictionKind::Stuff);
}

TEST_CASE("thing weight is score times area") {
  std::vector<int> labels(200 * 100, 1);
  std::fill(labels.begin(), labels.begin() + 10000, 3);
  const Segmentation seg = make_segmentation(
      200, 100, labels,
      {meta(3, PredictionKind::Thing, 0.9), meta(1, PredictionKind::Stuff, 1.0, 2)});
  const Prediction* thing = seg.find(3);
  REQUIRE(thing != nullptr);
  CHECK(thing->area == 10000);
  CHECK(thing->weight == 9000.0);
  std::int64_t total = 0;
  for (const auto& p : seg.predictions) total += p.area;
  CHECK(total == 200 * 100);
}

TEST_CASE("label metadata errors") {
  const std::vector<int> labels{0, 0, 7, 0};
  CHECK_THROWS_WITH_AS(
      make_segmentation(2, 2, labels, {meta(0, PredictionKind::Stuff, 1.0)}),
      doctest::Contains("unknown prediction id"), InputError);
  CHECK_THROWS_WITH_AS(
      make_segmentation(2, 2, {0, 0, 0, 0},
                        {meta(0, PredictionKind::Stuff, 1.0), meta(0, PredictionKind::Thing, 0.5)}),
      doctest::Contains("duplicate"), InputError);
  CHECK_THROWS_WITH_AS(make_segmentation(2, 2, {0, 0, 0, 0}, {meta(0, PredictionKind::Stuff, 0.8)}),
                       doctest::Contains("score 1.0"), InputError);

  TempDir dir("labels");
  save_gray16_png({2, 2, {0, 0, 0, 0}}, dir / "l.png");
  testsupport::write_file(dir / "bad.json", "{not json");
  testsupport::write_file(dir / "kind.json", R"([{"id":0,"kind":"blob","score":1.0}])");
  CHECK_THROWS_AS(load_labels(dir / "l.png", dir / "bad.json"), InputError);
  CHECK_THROWS_AS(load_labels(dir / "l.png", dir / "kind.json"), InputError);
}

TEST_CASE("unlabelled pixels become a trailing background stuff") {
  const std::vector<int> labels{0, kVoidLabel, 1, kVoidLabel};
  const Segmentation seg = make_segmentation(
      2, 2, labels, {meta(0, PredictionKind::Thing, 0.5), meta(1, PredictionKind::Stuff, 1.0, 4)});
  const Prediction* bg = seg.find(kVoidLabel);
  REQUIRE(bg != nullptr);
  CHECK(bg->kind == PredictionKind::Stuff);
  CHECK(bg->area == 2);
  CHECK(bg->semantic_group == 5);
  CHECK(bg->category == kBackgroundCategory);
}

TEST_CASE("dimension mismatch is an input error") {
  const Image image(4, 4);
  const DepthMap depth{4, 3, std::vector<double>(12, 0.5), DepthConvention::NearerHigh};
  const Segmentation seg =
      make_segmentation(4, 4, std::vector<int>(16, 0), {meta(0, PredictionKind::Stuff, 1.0)});
  CHECK_THROWS_WITH_AS(check_dimensions(image, depth, seg), doctest::Contains("dimension mismatch"),
                       InputError);
}

TEST_CASE("sha256 of a known message") {
  const std::string abc = "abc";
  CHECK(sha256_hex({abc.begin(), abc.end()}) ==
        "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}
