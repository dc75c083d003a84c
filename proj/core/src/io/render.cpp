#include "gazedoc/io/render.hpp"

#include <algorithm>
#include <cmath>

#include <opencv2/imgproc.hpp>

#include "gazedoc/error.hpp"
#include "gazedoc/resample.hpp"

namespace gazedoc::io {
namespace {

cv::Mat to_mat(const RgbImage& image) {
  if (image.pixels.size() != static_cast<std::size_t>(image.width) * image.height * 3) {
    throw ValidationError("RGB image buffer does not match its size");
  }
  return cv::Mat(image.height, image.width, CV_8UC3, const_cast<std::uint8_t*>(image.pixels.data()))
      .clone();
}

RgbImage from_mat(const cv::Mat& m) {
  RgbImage img{m.cols, m.rows,
               std::vector<std::uint8_t>(static_cast<std::size_t>(m.cols) * m.rows * 3)};
  for (int y = 0; y < m.rows; ++y) {
    std::copy(m.ptr<uchar>(y), m.ptr<uchar>(y) + m.cols * 3,
              img.pixels.begin() + static_cast<std::ptrdiff_t>(y) * m.cols * 3);
  }
  return img;
}

int colormap_code(const std::string& name) {
  if (name == "jet") return cv::COLORMAP_JET;
  if (name == "inferno") return cv::COLORMAP_INFERNO;
  if (name == "viridis") return cv::COLORMAP_VIRIDIS;
  if (name == "hot") return cv::COLORMAP_HOT;
  if (name == "turbo") return cv::COLORMAP_TURBO;
  throw ValidationError("unknown colormap '" + name + "'");
}

}  // namespace

void validate(const RenderSpec& spec) {
  if (!(spec.alpha >= 0.0 && spec.alpha <= 1.0)) {
    throw ValidationError("overlay alpha must lie in [0, 1]");
  }
  if (spec.marker_radius < 1) throw ValidationError("marker radius must be positive");
  colormap_code(spec.colormap);
}

RgbImage render_heatmap(const RgbImage& image, const DensityMap& map, const RenderSpec& spec) {
  validate(spec);
  const DensityMap fitted = (map.width() == image.width && map.height() == image.height)
                                ? map
                                : resize_bilinear(map, image.width, image.height);
  if (spec.alpha == 0.0) return image;
  const double max = fitted.max();
  cv::Mat gray(image.height, image.width, CV_8UC1);
  const auto v = fitted.values();
  for (std::size_t i = 0; i < v.size(); ++i) {
    gray.data[i] = max > 0.0 ? static_cast<uchar>(std::lround(255.0 * v[i] / max)) : 0;
  }
  cv::Mat heat_bgr;
  cv::applyColorMap(gray, heat_bgr, colormap_code(spec.colormap));
  cv::Mat heat;
  cv::cvtColor(heat_bgr, heat, cv::COLOR_BGR2RGB);
  cv::Mat out;
  cv::addWeighted(to_mat(image), 1.0 - spec.alpha, heat, spec.alpha, 0.0, out);
  return from_mat(out);
}

std::vector<Marker> scanpath_markers(const Scanpath& scanpath, int width, int height) {
  std::vector<Marker> out;
  int n = 1;
  for (const Fixation& f : scanpath.fixations) {
    out.push_back({pixel_column(f.x, width), pixel_row(f.y, height), n++});
  }
  return out;
}

RgbImage render_scanpath(const RgbImage& image, const Scanpath& scanpath,
                         const RenderSpec& spec) {
  validate(spec);
  cv::Mat m = to_mat(image);
  const auto markers = scanpath_markers(scanpath, image.width, image.height);
  const cv::Scalar marker(kMarkerRgb[0], kMarkerRgb[1], kMarkerRgb[2]);
  const cv::Scalar line(30, 30, 30);
  for (std::size_t i = 1; i < markers.size(); ++i) {
    cv::line(m, {markers[i - 1].x, markers[i - 1].y}, {markers[i].x, markers[i].y}, line, 2,
             cv::LINE_8);
  }
  for (const Marker& k : markers) {
    cv::circle(m, {k.x, k.y}, spec.marker_radius, marker, cv::FILLED, cv::LINE_8);
    cv::circle(m, {k.x, k.y}, spec.marker_radius, line, 1, cv::LINE_8);
  }
  if (spec.numbering) {
    const double scale = spec.marker_radius / 20.0;
    for (const Marker& k : markers) {
      const std::string label = std::to_string(k.number);
      int baseline = 0;
      const cv::Size size = cv::getTextSize(label, cv::FONT_HERSHEY_SIMPLEX, scale, 1, &baseline);
      cv::putText(m, label, {k.x - size.width / 2, k.y + size.height / 2},
                  cv::FONT_HERSHEY_SIMPLEX, scale, line, 1, cv::LINE_8);
    }
  }
  return from_mat(m);
}

}  // namespace gazedoc::io
