#include "ldpaint/io.hpp"

#include <png.h>
#include <openssl/evp.h>

#include <algorithm>
#include <cctype>
#include <csetjmp>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <iterator>
#include <memory>
#include <json.hpp>
#include <set>
#include <sstream>

#include "ldpaint/error.hpp"

namespace ldpaint {

using json = nlohmann::json;

namespace {

struct FileCloser {
  void operator()(std::FILE* f) const {
    if (f) std::fclose(f);
  }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

// libpng reports errors through longjmp. Every function below that calls
// setjmp keeps only trivially destructible locals.
struct PngErrorSink {
  char message[256] = {0};
};

void png_error_to_sink(png_structp png, png_const_charp msg) {
  auto* sink = static_cast<PngErrorSink*>(png_get_error_ptr(png));
  if (sink) std::snprintf(sink->message, sizeof sink->message, "%s", msg);
  png_longjmp(png, 1);
}

void png_ignore_warning(png_structp, png_const_charp) {}

struct PngHeader {
  png_uint_32 width = 0;
  png_uint_32 height = 0;
  int bit_depth = 0;
  int color_type = 0;
  int channels = 0;
  std::size_t rowbytes = 0;
};

enum class PngTarget { Rgb8, Gray16 };

bool read_png_header(png_structp png, png_infop info, std::FILE* fp,
                     PngTarget target, PngHeader* out) {
  if (setjmp(png_jmpbuf(png))) return false;
  png_init_io(png, fp);
  png_read_info(png, info);
  int color_type = png_get_color_type(png, info);
  int bit_depth = png_get_bit_depth(png, info);
  out->color_type = color_type;
  if (color_type == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(png);
  if (color_type == PNG_COLOR_TYPE_GRAY && bit_depth < 8)
    png_set_expand_gray_1_2_4_to_8(png);
  if (png_get_valid(png, info, PNG_INFO_tRNS)) png_set_tRNS_to_alpha(png);
  if (target == PngTarget::Rgb8) {
    if (bit_depth == 16) png_set_strip_16(png);
    if (color_type == PNG_COLOR_TYPE_GRAY ||
        color_type == PNG_COLOR_TYPE_GRAY_ALPHA)
      png_set_gray_to_rgb(png);
  }
  png_set_strip_alpha(png);
  png_set_interlace_handling(png);
  png_read_update_info(png, info);
  out->width = png_get_image_width(png, info);
  out->height = png_get_image_height(png, info);
  out->bit_depth = png_get_bit_depth(png, info);
  out->channels = png_get_channels(png, info);
  out->rowbytes = png_get_rowbytes(png, info);
  return true;
}

bool read_png_rows(png_structp png, png_infop info, png_bytepp rows) {
  if (setjmp(png_jmpbuf(png))) return false;
  png_read_image(png, rows);
  png_read_end(png, info);
  return true;
}

struct DecodedPng {
  PngHeader header;
  std::vector<std::uint8_t> data;
};

DecodedPng decode_png(const fs::path& path, PngTarget target) {
  FilePtr fp(std::fopen(path.c_str(), "rb"));
  if (!fp) throw InputError("cannot open " + path.string());
  unsigned char sig[8];
  if (std::fread(sig, 1, 8, fp.get()) != 8 || png_sig_cmp(sig, 0, 8) != 0)
    throw InputError("decode failure: " + path.string() + " is not a PNG");
  PngErrorSink sink;
  png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, &sink,
                                           png_error_to_sink,
                                           png_ignore_warning);
  png_infop info = png ? png_create_info_struct(png) : nullptr;
  if (!png || !info) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw InputError("decode failure: libpng initialisation");
  }
  png_set_sig_bytes(png, 8);
  DecodedPng out;
  bool ok = read_png_header(png, info, fp.get(), target, &out.header);
  std::vector<png_bytep> rows;
  if (ok) {
    if (out.header.width == 0 || out.header.height == 0) {
      png_destroy_read_struct(&png, &info, nullptr);
      throw InputError("decode failure: zero-dimension image " +
                       path.string());
    }
    out.data.resize(out.header.rowbytes * out.header.height);
    rows.resize(out.header.height);
    for (png_uint_32 y = 0; y < out.header.height; ++y)
      rows[y] = out.data.data() + y * out.header.rowbytes;
    ok = read_png_rows(png, info, rows.data());
  }
  png_destroy_read_struct(&png, &info, nullptr);
  if (!ok)
    throw InputError("decode failure: " + path.string() + ": " +
                     sink.message);
  return out;
}

bool write_png_rows(png_structp png, png_infop info, std::FILE* fp, int width,
                    int height, int bit_depth, int color_type,
                    png_bytepp rows) {
  if (setjmp(png_jmpbuf(png))) return false;
  png_init_io(png, fp);
  png_set_IHDR(png, info, png_uint_32(width), png_uint_32(height), bit_depth,
               color_type, PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT,
               PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);
  png_write_image(png, rows);
  png_write_end(png, info);
  return true;
}

void encode_png(const fs::path& path, int width, int height, int bit_depth,
                int color_type, std::size_t rowbytes,
                std::vector<std::uint8_t>& data) {
  FilePtr fp(std::fopen(path.c_str(), "wb"));
  if (!fp) throw OutputError("cannot write " + path.string());
  PngErrorSink sink;
  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, &sink,
                                            png_error_to_sink,
                                            png_ignore_warning);
  png_infop info = png ? png_create_info_struct(png) : nullptr;
  if (!png || !info) {
    png_destroy_write_struct(&png, &info);
    throw OutputError("libpng initialisation failed");
  }
  std::vector<png_bytep> rows(static_cast<std::size_t>(height));
  for (int y = 0; y < height; ++y) rows[y] = data.data() + y * rowbytes;
  bool ok = write_png_rows(png, info, fp.get(), width, height, bit_depth,
                           color_type, rows.data());
  png_destroy_write_struct(&png, &info);
  if (!ok || std::fflush(fp.get()) != 0)
    throw OutputError("cannot write " + path.string() + ": " + sink.message);
}

// PGM header token reader: skips whitespace and '#' comments.
bool next_token(const std::vector<std::uint8_t>& bytes, std::size_t& pos,
                std::string& token) {
  token.clear();
  while (pos < bytes.size()) {
    if (bytes[pos] == '#') {
      while (pos < bytes.size() && bytes[pos] != '\n') ++pos;
    } else if (std::isspace(bytes[pos])) {
      ++pos;
    } else {
      break;
    }
  }
  while (pos < bytes.size() && !std::isspace(bytes[pos]) && bytes[pos] != '#')
    token.push_back(char(bytes[pos++]));
  return !token.empty();
}

int parse_positive(const std::string& token, const char* what) {
  if (token.empty() || token.size() > 9 ||
      !std::all_of(token.begin(), token.end(),
                   [](char c) { return std::isdigit((unsigned char)c); }))
    throw InputError(std::string("malformed PGM header: bad ") + what);
  return std::stoi(token);
}

PredictionKind parse_kind(const std::string& s) {
  if (s == "thing") return PredictionKind::Thing;
  if (s == "stuff") return PredictionKind::Stuff;
  throw InputError("label metadata: unknown kind \"" + s + "\"");
}

}  // namespace

Image load_image(const fs::path& path) {
  DecodedPng png = decode_png(path, PngTarget::Rgb8);
  if (png.header.channels != 3 || png.header.bit_depth != 8)
    throw InputError("decode failure: unsupported PNG layout in " +
                     path.string());
  Image image(int(png.header.width), int(png.header.height));
  for (int y = 0; y < image.height(); ++y) {
    const std::uint8_t* row = png.data.data() + y * png.header.rowbytes;
    for (int x = 0; x < image.width(); ++x)
      image.at(x, y) = Rgb{row[3 * x], row[3 * x + 1], row[3 * x + 2]};
  }
  return image;
}

void save_png(const Image& image, const fs::path& path) {
  std::vector<std::uint8_t> data(image.pixel_count() * 3);
  for (std::size_t i = 0; i < image.pixel_count(); ++i) {
    data[3 * i] = image[i].r;
    data[3 * i + 1] = image[i].g;
    data[3 * i + 2] = image[i].b;
  }
  encode_png(path, image.width(), image.height(), 8, PNG_COLOR_TYPE_RGB,
             std::size_t(image.width()) * 3, data);
}

Gray16 load_gray16_png(const fs::path& path) {
  DecodedPng png = decode_png(path, PngTarget::Gray16);
  if (png.header.channels != 1)
    throw InputError("label map must be a grayscale PNG: " + path.string());
  Gray16 out{int(png.header.width), int(png.header.height), {}};
  out.values.resize(std::size_t(out.width) * out.height);
  for (int y = 0; y < out.height; ++y) {
    const std::uint8_t* row = png.data.data() + y * png.header.rowbytes;
    for (int x = 0; x < out.width; ++x) {
      std::uint16_t v = png.header.bit_depth == 16
                            ? std::uint16_t((row[2 * x] << 8) | row[2 * x + 1])
                            : row[x];
      out.values[std::size_t(y) * out.width + x] = v;
    }
  }
  return out;
}

void save_gray16_png(const Gray16& image, const fs::path& path) {
  std::vector<std::uint8_t> data(image.values.size() * 2);
  for (std::size_t i = 0; i < image.values.size(); ++i) {
    data[2 * i] = std::uint8_t(image.values[i] >> 8);
    data[2 * i + 1] = std::uint8_t(image.values[i] & 0xff);
  }
  encode_png(path, image.width, image.height, 16, PNG_COLOR_TYPE_GRAY,
             std::size_t(image.width) * 2, data);
}

DepthMap load_depth(const fs::path& path, DepthConvention convention) {
  std::vector<std::uint8_t> bytes = read_bytes(path);
  std::size_t pos = 0;
  std::string token;
  if (!next_token(bytes, pos, token) || token != "P5")
    throw InputError("malformed PGM header: expected P5 in " + path.string());
  if (!next_token(bytes, pos, token)) throw InputError("malformed PGM header");
  const int width = parse_positive(token, "width");
  if (!next_token(bytes, pos, token)) throw InputError("malformed PGM header");
  const int height = parse_positive(token, "height");
  if (!next_token(bytes, pos, token)) throw InputError("malformed PGM header");
  const int maxval = parse_positive(token, "maxval");
  if (maxval != 65535)
    throw InputError("depth PGM must have maxval 65535, got " +
                     std::to_string(maxval));
  if (width == 0 || height == 0)
    throw InputError("depth PGM has zero dimension");
  if (pos >= bytes.size() || !std::isspace(bytes[pos]))
    throw InputError("malformed PGM header");
  ++pos;  // single whitespace before the raster
  const std::size_t count = std::size_t(width) * height;
  if (bytes.size() - pos < count * 2)
    throw InputError("depth PGM truncated: " + path.string());

  DepthMap depth{width, height, std::vector<double>(count), convention};
  for (std::size_t i = 0; i < count; ++i) {
    unsigned v = (unsigned(bytes[pos + 2 * i]) << 8) | bytes[pos + 2 * i + 1];
    depth.values[i] = double(v) / 65535.0;
  }
  return depth;
}

void save_depth(const DepthMap& depth, const fs::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw OutputError("cannot write " + path.string());
  out << "P5\n" << depth.width << ' ' << depth.height << "\n65535\n";
  std::vector<char> raster(depth.values.size() * 2);
  for (std::size_t i = 0; i < depth.values.size(); ++i) {
    double v = std::clamp(depth.values[i], 0.0, 1.0);
    auto s = unsigned(std::lround(v * 65535.0));
    raster[2 * i] = char(s >> 8);
    raster[2 * i + 1] = char(s & 0xff);
  }
  out.write(raster.data(), std::streamsize(raster.size()));
  if (!out) throw OutputError("cannot write " + path.string());
}

Segmentation make_segmentation(int width, int height, std::vector<int> labels,
                               std::vector<Prediction> meta) {
  std::set<int> ids;
  int max_group = -1;
  for (const auto& p : meta) {
    if (!ids.insert(p.id).second)
      throw InputError("label metadata: duplicate prediction id " +
                       std::to_string(p.id));
    if (p.kind == PredictionKind::Stuff && p.score != 1.0)
      throw InputError("label metadata: stuff prediction " +
                       std::to_string(p.id) + " must have score 1.0");
    if (p.score < 0.0 || p.score > 1.0)
      throw InputError("label metadata: score out of [0,1] for id " +
                       std::to_string(p.id));
    if (p.semantic_group < 0)
      throw InputError("label metadata: negative semanticGroup for id " +
                       std::to_string(p.id));
    max_group = std::max(max_group, p.semantic_group);
  }

  std::map<int, std::int64_t> area;
  for (int id : ids) area[id] = 0;
  bool has_void = false;
  for (int label : labels) {
    auto it = area.find(label);
    if (it != area.end()) {
      ++it->second;
    } else if (label == kVoidLabel) {
      has_void = true;
    } else {
      throw InputError("unknown prediction id " + std::to_string(label));
    }
  }

  Segmentation seg{width, height, std::move(labels), std::move(meta)};
  for (auto& p : seg.predictions) {
    p.area = area[p.id];
    p.weight = p.score * double(p.area);
  }
  if (has_void) {
    Prediction bg;
    bg.id = kVoidLabel;
    bg.kind = PredictionKind::Stuff;
    bg.score = 1.0;
    bg.category = kBackgroundCategory;
    bg.semantic_group = max_group + 1;
    bg.area = std::int64_t(
        std::count(seg.labels.begin(), seg.labels.end(), kVoidLabel));
    bg.weight = double(bg.area);
    seg.predictions.push_back(bg);
  }
  return seg;
}

Segmentation load_labels(const fs::path& map_path, const fs::path& meta_path) {
  Gray16 map = load_gray16_png(map_path);
  std::vector<std::uint8_t> bytes = read_bytes(meta_path);
  json doc;
  try {
    doc = json::parse(bytes.begin(), bytes.end());
  } catch (const json::exception& e) {
    throw InputError("label metadata: " + std::string(e.what()));
  }
  if (!doc.is_array()) throw InputError("label metadata must be a JSON array");

  std::vector<Prediction> meta;
  for (const auto& entry : doc) {
    try {
      Prediction p;
      p.id = entry.at("id").get<int>();
      p.kind = parse_kind(entry.at("kind").get<std::string>());
      p.score = entry.at("score").get<double>();
      p.category = entry.value("category", std::string{});
      p.semantic_group = entry.value("semanticGroup", 0);
      if (p.id < 0 || p.id >= kVoidLabel)
        throw InputError("label metadata: id out of range " +
                         std::to_string(p.id));
      meta.push_back(std::move(p));
    } catch (const json::exception& e) {
      throw InputError("label metadata: " + std::string(e.what()));
    }
  }
  std::vector<int> labels(map.values.begin(), map.values.end());
  return make_segmentation(map.width, map.height, std::move(labels),
                           std::move(meta));
}

void save_labels(const Segmentation& seg, const fs::path& map_path,
                 const fs::path& meta_path) {
  Gray16 map{seg.width, seg.height, {}};
  map.values.reserve(seg.labels.size());
  for (int id : seg.labels) map.values.push_back(std::uint16_t(id));
  save_gray16_png(map, map_path);

  json doc = json::array();
  for (const auto& p : seg.predictions) {
    if (p.id == kVoidLabel) continue;
    doc.push_back({{"id", p.id},
                   {"kind", p.kind == PredictionKind::Thing ? "thing" : "stuff"},
                   {"score", p.score},
                   {"category", p.category},
                   {"semanticGroup", p.semantic_group}});
  }
  write_text(meta_path, doc.dump(2) + "\n");
}

void check_dimensions(const Image& image, const DepthMap& depth,
                      const Segmentation& seg) {
  auto dims = [](int w, int h) {
    return std::to_string(w) + "x" + std::to_string(h);
  };
  if (depth.width != image.width() || depth.height != image.height())
    throw InputError("dimension mismatch: depth " +
                     dims(depth.width, depth.height) + " vs image " +
                     dims(image.width(), image.height()));
  if (seg.width != image.width() || seg.height != image.height())
    throw InputError("dimension mismatch: labels " +
                     dims(seg.width, seg.height) + " vs image " +
                     dims(image.width(), image.height()));
}

std::vector<std::uint8_t> read_bytes(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
  out.flush();
  if (!out) throw OutputError("cannot write " + path.string());
}

std::string sha256_hex(const std::vector<std::uint8_t>& bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(),
                 nullptr) != 1)
    throw Error("sha256 failed");
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned i = 0; i < len; ++i) {
    out.push_back(hex[digest[i] >> 4]);
    out.push_back(hex[digest[i] & 0xf]);
  }
  return out;
}

}  // namespace ldpaint
