#include "gazedoc/io/raster.hpp"

#include <cmath>

#include <json.hpp>
#include <opencv2/imgcodecs.hpp>
#include <opencv2/imgproc.hpp>

#include "gazedoc/error.hpp"

namespace gazedoc::io {
namespace {

using nlohmann::json;
namespace fs = std::filesystem;

constexpr int kSidecarVersion = 1;
constexpr double kLevels = 65535.0;

cv::Mat read_image(const fs::path& path, int flags) {
  if (!fs::exists(path)) throw IoError("no such file: " + path.string());
  const std::string bytes = read_file(path);
  const std::vector<uchar> buf(bytes.begin(), bytes.end());
  cv::Mat m = cv::imdecode(buf, flags);
  if (m.empty()) throw IoError("cannot decode image: " + path.string());
  return m;
}

std::string encode_png(const cv::Mat& m) {
  std::vector<uchar> buf;
  if (!cv::imencode(".png", m, buf, {cv::IMWRITE_PNG_COMPRESSION, 6})) {
    throw IoError("PNG encoding failed");
  }
  return std::string(buf.begin(), buf.end());
}

void require_8u_c1(const cv::Mat& m, const fs::path& path, const char* what) {
  if (m.depth() != CV_8U || m.channels() != 1) {
    throw ValidationError(std::string(what) + " " + path.string() +
                          " must be an 8-bit single-channel PNG (depth " +
                          std::to_string(m.elemSize1() * 8) + " bit, " +
                          std::to_string(m.channels()) + " channel(s))");
  }
}

}  // namespace

Mask load_mask(const fs::path& path) {
  const cv::Mat m = read_image(path, cv::IMREAD_UNCHANGED);
  require_8u_c1(m, path, "face mask");
  Mask mask(m.cols, m.rows);
  for (int y = 0; y < m.rows; ++y) {
    const uchar* row = m.ptr<uchar>(y);
    for (int x = 0; x < m.cols; ++x) {
      if (row[x] != 0 && row[x] != 255) {
        throw ValidationError("face mask " + path.string() + " has value " +
                              std::to_string(row[x]) + "; expected 0 or 255");
      }
      mask.set(x, y, row[x] == 255);
    }
  }
  return mask;
}

SegmentationMap load_segmentation(const fs::path& path,
                                  const std::optional<fs::path>& face_mask) {
  const cv::Mat m = read_image(path, cv::IMREAD_UNCHANGED);
  require_8u_c1(m, path, "segmentation");
  std::vector<std::uint8_t> labels(static_cast<std::size_t>(m.rows) * m.cols);
  for (int y = 0; y < m.rows; ++y) {
    const uchar* row = m.ptr<uchar>(y);
    std::copy(row, row + m.cols, labels.begin() + static_cast<std::ptrdiff_t>(y) * m.cols);
  }
  std::optional<Mask> face;
  if (face_mask) {
    face = load_mask(*face_mask);
    if (face->width() != m.cols || face->height() != m.rows) {
      throw ValidationError("face mask " + face_mask->string() +
                            " does not match the segmentation size");
    }
  }
  try {
    return SegmentationMap(m.cols, m.rows, std::move(labels), std::move(face));
  } catch (const ValidationError& e) {
    throw ValidationError(path.string() + ": " + e.what());
  }
}

std::string encode_segmentation_png(const SegmentationMap& seg) {
  cv::Mat m(seg.height(), seg.width(), CV_8UC1);
  const auto labels = seg.labels();
  std::copy(labels.begin(), labels.end(), m.data);
  return encode_png(m);
}

std::string encode_mask_png(const Mask& mask) {
  cv::Mat m(mask.height(), mask.width(), CV_8UC1);
  const auto bits = mask.bits();
  for (std::size_t i = 0; i < bits.size(); ++i) m.data[i] = bits[i] ? 255 : 0;
  return encode_png(m);
}

fs::path sidecar_path(const fs::path& png_path) {
  fs::path p = png_path;
  p.replace_extension(".json");
  return p;
}

std::vector<StagedFile> density_map_files(const DensityMap& map, const fs::path& png_path) {
  if (map.empty()) throw ValidationError("cannot save an empty density map");
  const double max = map.max();
  cv::Mat m(map.height(), map.width(), CV_16UC1);
  const auto v = map.values();
  auto* out = reinterpret_cast<std::uint16_t*>(m.data);
  for (std::size_t i = 0; i < v.size(); ++i) {
    out[i] = max > 0.0 ? static_cast<std::uint16_t>(std::lround(v[i] / max * kLevels)) : 0;
  }
  const json side = {{"version", kSidecarVersion},
                     {"max", max},
                     {"normalized", map.is_normalized()},
                     {"width", map.width()},
                     {"height", map.height()}};
  return {{png_path, encode_png(m)}, {sidecar_path(png_path), side.dump(2) + "\n"}};
}

void save_density_map(const DensityMap& map, const fs::path& png_path) {
  for (const StagedFile& f : density_map_files(map, png_path)) write_file_atomic(f.path, f.bytes);
}

DensityMap load_density_map(const fs::path& png_path) {
  const fs::path side_path = sidecar_path(png_path);
  if (!fs::exists(side_path)) {
    throw ValidationError("missing sidecar " + side_path.string() + " for " + png_path.string());
  }
  json side;
  try {
    side = json::parse(read_file(side_path));
  } catch (const json::exception& e) {
    throw ValidationError("bad sidecar " + side_path.string() + ": " + e.what());
  }
  double max = 0.0;
  bool norm = false;
  int w = 0, h = 0;
  try {
    if (side.at("version").get<int>() != kSidecarVersion) {
      throw ValidationError("unsupported sidecar version in " + side_path.string());
    }
    max = side.at("max").get<double>();
    norm = side.at("normalized").get<bool>();
    w = side.at("width").get<int>();
    h = side.at("height").get<int>();
  } catch (const json::exception& e) {
    throw ValidationError("bad sidecar " + side_path.string() + ": " + e.what());
  }
  const cv::Mat m = read_image(png_path, cv::IMREAD_UNCHANGED);
  if (m.depth() != CV_16U || m.channels() != 1) {
    throw ValidationError("density map " + png_path.string() + " must be a 16-bit grayscale PNG");
  }
  if (m.cols != w || m.rows != h) {
    throw ValidationError("density map " + png_path.string() + " does not match its sidecar size");
  }
  std::vector<double> values(static_cast<std::size_t>(w) * h);
  for (int y = 0; y < h; ++y) {
    const auto* row = m.ptr<std::uint16_t>(y);
    for (int x = 0; x < w; ++x) {
      values[static_cast<std::size_t>(y) * w + x] = row[x] / kLevels * max;
    }
  }
  DensityMap map(w, h, std::move(values));
  return norm && map.sum() > 0.0 ? normalized(std::move(map)) : map;
}

RgbImage load_rgb(const fs::path& path) {
  const cv::Mat bgr = read_image(path, cv::IMREAD_COLOR);
  cv::Mat rgb;
  cv::cvtColor(bgr, rgb, cv::COLOR_BGR2RGB);
  RgbImage img{rgb.cols, rgb.rows,
               std::vector<std::uint8_t>(static_cast<std::size_t>(rgb.cols) * rgb.rows * 3)};
  for (int y = 0; y < rgb.rows; ++y) {
    std::copy(rgb.ptr<uchar>(y), rgb.ptr<uchar>(y) + rgb.cols * 3,
              img.pixels.begin() + static_cast<std::ptrdiff_t>(y) * rgb.cols * 3);
  }
  return img;
}

std::string encode_rgb_png(const RgbImage& image) {
  if (image.pixels.size() != static_cast<std::size_t>(image.width) * image.height * 3) {
    throw ValidationError("RGB image buffer does not match its size");
  }
  cv::Mat rgb(image.height, image.width, CV_8UC3,
              const_cast<std::uint8_t*>(image.pixels.data()));
  cv::Mat bgr;
  cv::cvtColor(rgb, bgr, cv::COLOR_RGB2BGR);
  return encode_png(bgr);
}

}  // namespace gazedoc::io
