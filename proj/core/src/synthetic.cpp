#include "gazedoc/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "gazedoc/density.hpp"
#include "gazedoc/error.hpp"
#include "gazedoc/rng.hpp"

namespace gazedoc {
namespace {

constexpr double kPlantedSigma = 15.0;
constexpr double kBackgroundImageWeight = 0.2;

struct Rect {
  int x0, y0, x1, y1;
};

struct Instance {
  Label label;
  Rect r;
  double weight;
};

struct Face {
  double cx, cy, rx, ry;
  double weight;
};

struct Layout {
  std::vector<Instance> instances;
  std::vector<Face> faces;
};

class Builder {
 public:
  Builder(int w, int h, Rng& rng) : w_(w), h_(h), rng_(rng) {}

  // Rectangle given in fractions of the page, jittered by up to `jitter` of
  // the page size and clipped.
  Rect rect(double fx0, double fy0, double fx1, double fy1, double jitter = 0.02) {
    auto j = [&](double f, int size) {
      const double v = (f + uniform(rng_, -jitter, jitter)) * size;
      return std::clamp(static_cast<int>(std::lround(v)), 0, size);
    };
    Rect r{j(fx0, w_), j(fy0, h_), j(fx1, w_), j(fy1, h_)};
    if (r.x1 <= r.x0) r.x1 = std::min(w_, r.x0 + 1);
    if (r.y1 <= r.y0) r.y1 = std::min(h_, r.y0 + 1);
    return r;
  }

  void add(Label label, Rect r) {
    layout_.instances.push_back({label, r, uniform(rng_, 0.5, 1.5)});
  }
  void add(Label label, double fx0, double fy0, double fx1, double fy1) {
    add(label, rect(fx0, fy0, fx1, fy1));
  }
  // Face ellipse centered inside rectangle r.
  void face_in(const Rect& r) {
    const double rw = 0.5 * (r.x1 - r.x0);
    const double rh = 0.5 * (r.y1 - r.y0);
    const double ry = std::max(4.0, 0.45 * std::min(rh, rw * 1.2));
    layout_.faces.push_back({r.x0 + rw * uniform(rng_, 0.7, 1.3), r.y0 + rh, ry / 1.3, ry,
                             uniform(rng_, 0.5, 1.5)});
  }
  bool coin(double p) { return uniform01(rng_) < p; }
  Layout take() { return std::move(layout_); }

 private:
  int w_, h_;
  Rng& rng_;
  Layout layout_;
};

Layout make_layout(int type, int w, int h, Rng& rng) {
  Builder b(w, h, rng);
  switch (type) {
    case 0: {  // news
      b.add(Label::kBanner, 0.0, 0.0, 1.0, 0.1);
      b.add(Label::kLogo, 0.02, 0.015, 0.15, 0.085);
      for (int c = 0; c < 3; ++c) {
        b.add(Label::kText, 0.03 + c * 0.22, 0.15, 0.22 + c * 0.22, 0.95);
      }
      const Rect img = b.rect(0.7, 0.15, 0.97, 0.5);
      b.add(Label::kImage, img);
      if (b.coin(0.5)) b.face_in(img);
      break;
    }
    case 1: {  // product grid
      b.add(Label::kLogo, 0.02, 0.02, 0.12, 0.1);
      for (int r = 0; r < 2; ++r) {
        for (int c = 0; c < 3; ++c) {
          const double x0 = 0.05 + c * 0.31;
          const double y0 = 0.15 + r * 0.42;
          b.add(Label::kImage, x0, y0, x0 + 0.26, y0 + 0.28);
          b.add(Label::kText, x0, y0 + 0.3, x0 + 0.26, y0 + 0.36);
        }
      }
      break;
    }
    case 2: {  // landing page with hero image
      const Rect hero = b.rect(0.0, 0.0, 1.0, 0.55, 0.0);
      b.add(Label::kImage, hero);
      b.face_in(b.rect(0.55, 0.05, 0.85, 0.5, 0.03));
      b.add(Label::kLogo, 0.03, 0.03, 0.16, 0.12);
      b.add(Label::kText, 0.1, 0.62, 0.9, 0.8);
      b.add(Label::kText, 0.1, 0.84, 0.6, 0.93);
      break;
    }
    case 3: {  // long-form text
      b.add(Label::kLogo, 0.42, 0.02, 0.58, 0.09);
      b.add(Label::kText, 0.2, 0.12, 0.8, 0.97);
      if (b.coin(0.5)) b.add(Label::kImage, 0.82, 0.3, 0.97, 0.55);
      break;
    }
    case 4: {  // banner-heavy portal
      b.add(Label::kBanner, 0.0, 0.0, 1.0, 0.14);
      b.add(Label::kBanner, 0.0, 0.14, 0.16, 1.0);
      b.add(Label::kBanner, 0.84, 0.14, 1.0, 1.0);
      b.add(Label::kLogo, 0.03, 0.02, 0.13, 0.11);
      b.add(Label::kText, 0.2, 0.2, 0.8, 0.6);
      b.add(Label::kImage, 0.2, 0.65, 0.48, 0.95);
      b.add(Label::kText, 0.52, 0.65, 0.8, 0.95);
      break;
    }
    default: {  // sparse page
      b.add(Label::kLogo, 0.4, 0.1, 0.6, 0.25);
      b.add(Label::kText, 0.3, 0.3, 0.7, 0.36);
      const Rect img = b.rect(0.35, 0.45, 0.65, 0.85);
      b.add(Label::kImage, img);
      b.face_in(img);
      break;
    }
  }
  return b.take();
}

bool in_face(const Face& f, double x, double y) {
  const double dx = (x - f.cx) / f.rx;
  const double dy = (y - f.cy) / f.ry;
  return dx * dx + dy * dy <= 1.0;
}

std::array<std::uint8_t, 3> base_color(Label label) {
  switch (label) {
    case Label::kImage: return {70, 120, 170};
    case Label::kText: return {255, 255, 255};
    case Label::kBanner: return {240, 170, 40};
    case Label::kLogo: return {200, 30, 40};
    default: return {238, 238, 238};
  }
}

RgbImage render_screenshot(const SegmentationMap& seg, const Layout& layout) {
  const int w = seg.width();
  const int h = seg.height();
  RgbImage img{w, h, std::vector<std::uint8_t>(static_cast<std::size_t>(w) * h * 3)};
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const Label label = seg(x, y);
      auto rgb = base_color(label);
      if (label == Label::kText && y % 8 < 3 && x % 53 < 48) rgb = {40, 40, 40};
      if (label == Label::kImage) {
        rgb[0] = static_cast<std::uint8_t>(60 + (x * 7 + y * 3) % 90);
        rgb[1] = static_cast<std::uint8_t>(110 + (y * 5) % 80);
      }
      for (const Face& f : layout.faces) {
        if (in_face(f, x, y)) rgb = {224, 172, 105};
      }
      std::uint8_t* p = &img.pixels[(static_cast<std::size_t>(y) * w + x) * 3];
      p[0] = rgb[0];
      p[1] = rgb[1];
      p[2] = rgb[2];
    }
  }
  return img;
}

Component component_of(Label label) {
  switch (label) {
    case Label::kText: return Component::kText;
    case Label::kLogo: return Component::kLogo;
    case Label::kBanner: return Component::kBanner;
    default: return Component::kImage;
  }
}

ComponentMaps planted_components(const SegmentationMap& seg, const Layout& layout) {
  const int w = seg.width();
  const int h = seg.height();
  const auto masks = component_masks(seg);
  std::array<DensityMap, kNumComponents> weight;
  for (auto& m : weight) m = DensityMap(w, h);

  const int image = static_cast<int>(Component::kImage);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      if (masks[image](x, y)) weight[image].at(x, y) = kBackgroundImageWeight;
    }
  }
  for (const Instance& inst : layout.instances) {
    const int c = static_cast<int>(component_of(inst.label));
    for (int y = inst.r.y0; y < inst.r.y1; ++y) {
      for (int x = inst.r.x0; x < inst.r.x1; ++x) {
        if (masks[c](x, y) && seg(x, y) == inst.label) {
          weight[c].at(x, y) = std::max(weight[c](x, y), inst.weight);
        }
      }
    }
  }
  const int face = static_cast<int>(Component::kFace);
  for (const Face& f : layout.faces) {
    for (int y = 0; y < h; ++y) {
      for (int x = 0; x < w; ++x) {
        if (masks[face](x, y) && in_face(f, x, y)) {
          weight[face].at(x, y) = std::max(weight[face](x, y), f.weight);
        }
      }
    }
  }
  ComponentMaps out;
  for (int c = 0; c < kNumComponents; ++c) {
    out[c] = normalized_or_zero(gaussian_blur(weight[c], kPlantedSigma));
  }
  return out;
}

}  // namespace

LinearModel planted_policy() {
  LinearModel m;
  // face, text, logo, banner, image, layout
  const std::array<double, 6> value = {3.0, 1.5, 4.0, -1.5, 0.8, 0.5};
  const std::array<double, 6> local = {1.0, 0.5, 1.0, 0.0, 0.0, 0.0};
  for (int i = 0; i < 6; ++i) {
    m.params[i] = value[i];
    m.params[6 + i] = local[i];
  }
  m.params[12] = -1.5;  // row
  m.params[13] = -1.0;  // column
  m.params[14] = -3.0;  // visited neighborhood
  return m;
}

SyntheticDocument make_document(int index, int layout_type, int width, int height,
                                std::uint64_t seed) {
  if (width < kGridCols || height < kGridRows) {
    throw ValidationError("synthetic documents must be at least 32 x 20 pixels");
  }
  Rng rng(seed);
  const Layout layout = make_layout(layout_type % kNumLayoutTypes, width, height, rng);

  SegmentationMap seg(width, height);
  for (const Instance& inst : layout.instances) {
    seg.paint_rect(inst.r.x0, inst.r.y0, inst.r.x1, inst.r.y1, inst.label);
  }
  Mask face(width, height);
  for (const Face& f : layout.faces) {
    for (int y = 0; y < height; ++y) {
      for (int x = 0; x < width; ++x) {
        if (in_face(f, x, y)) face.set(x, y, true);
      }
    }
  }
  seg.set_face_mask(face);

  SyntheticDocument doc;
  char id[32];
  std::snprintf(id, sizeof id, "doc%03d", index);
  doc.image_id = id;
  doc.layout_type = layout_type % kNumLayoutTypes;
  doc.screenshot = render_screenshot(seg, layout);
  doc.components = planted_components(seg, layout);
  doc.seg = std::move(seg);
  return doc;
}

BeliefInputs document_inputs(const SyntheticDocument& doc) {
  return make_belief_inputs(doc.components, doc.seg);
}

Scanpath sample_scanpath(const LinearModel& policy, const BeliefInputs& inputs, int width,
                         int height, int length, std::uint64_t seed) {
  RolloutOptions opts;
  opts.length = length;
  opts.seed = derive_seed(seed, 0);
  opts.image_width = width;
  opts.image_height = height;
  const Rollout r = rollout(LinearSoftmaxPolicy(policy), inputs.initial(), inputs.high, opts);

  Rng rng(derive_seed(seed, 1));
  const double cw = static_cast<double>(width) / kGridCols;
  const double ch = static_cast<double>(height) / kGridRows;
  Scanpath sp;
  for (std::size_t i = 0; i < r.actions.size(); ++i) {
    const int cell = r.actions[i];
    Fixation f;
    f.x = (cell_col(cell) + uniform(rng, 0.02, 0.98)) * cw;
    f.y = (cell_row(cell) + uniform(rng, 0.02, 0.98)) * ch;
    f.duration_ms = std::round(uniform(rng, 150.0, 400.0));
    f.index = static_cast<int>(i);
    sp.fixations.push_back(f);
  }
  return sp;
}

std::vector<SyntheticDocument> make_corpus(const SyntheticOptions& options,
                                           const LinearModel& policy) {
  if (options.num_documents < 1 || options.num_subjects < 1) {
    throw ValidationError("synthetic corpus needs at least one document and subject");
  }
  std::vector<SyntheticDocument> docs;
  for (int i = 0; i < options.num_documents; ++i) {
    SyntheticDocument doc = make_document(i, i % kNumLayoutTypes, options.width,
                                          options.height, derive_seed(options.seed, 2 * i));
    const BeliefInputs inputs = document_inputs(doc);
    const std::uint64_t scan_seed = derive_seed(options.seed, 2 * i + 1);
    for (int s = 0; s < options.num_subjects; ++s) {
      Scanpath sp = sample_scanpath(policy, inputs, options.width, options.height,
                                    options.fixations_per_scanpath, derive_seed(scan_seed, s));
      sp.image_id = doc.image_id;
      char sid[16];
      std::snprintf(sid, sizeof sid, "s%02d", s);
      sp.subject_id = sid;
      doc.scanpaths.push_back(std::move(sp));
    }
    docs.push_back(std::move(doc));
  }
  return docs;
}

std::vector<LayoutVector> make_blob_vectors(int per_blob, double spread, std::uint64_t seed) {
  static constexpr std::array<LayoutVector, kNumLayoutTypes> kArchetypes = {{
      {0.60, 0.20, 0.05, 0.15},
      {0.10, 0.70, 0.05, 0.15},
      {0.20, 0.20, 0.40, 0.20},
      {0.10, 0.15, 0.05, 0.70},
      {0.35, 0.45, 0.00, 0.20},
      {0.40, 0.05, 0.05, 0.50},
  }};
  Rng rng(seed);
  std::vector<LayoutVector> out;
  for (int b = 0; b < kNumLayoutTypes; ++b) {
    for (int i = 0; i < per_blob; ++i) {
      LayoutVector v = kArchetypes[b];
      for (double& x : v) x += spread * standard_normal(rng);
      out.push_back(v);
    }
  }
  return out;
}

}  // namespace gazedoc
