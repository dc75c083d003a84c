#ifndef GAZEDOC_SYNTHETIC_HPP_
#define GAZEDOC_SYNTHETIC_HPP_

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "gazedoc/imitation.hpp"
#include "gazedoc/kmeans.hpp"
#include "gazedoc/priors.hpp"
#include "gazedoc/scanpath.hpp"
#include "gazedoc/segmentation.hpp"

namespace gazedoc {

// Seeded generator for document-like test data: segmentations drawn from six
// layout archetypes, matching screenshots, planted component saliency maps
// and scanpaths sampled from a planted linear softmax policy.

inline constexpr int kNumLayoutTypes = 6;

struct RgbImage {
  int width = 0;
  int height = 0;
  // Interleaved RGB, row-major.
  std::vector<std::uint8_t> pixels;
};

struct SyntheticDocument {
  std::string image_id;
  int layout_type = 0;
  SegmentationMap seg;
  RgbImage screenshot;
  // Planted per-component saliency, each normalized (zero when absent).
  ComponentMaps components;
  std::vector<Scanpath> scanpaths;
};

struct SyntheticOptions {
  int num_documents = 12;
  int num_subjects = 4;
  int width = 640;
  int height = 400;
  int fixations_per_scanpath = 10;
  std::uint64_t seed = 0;
};

// Default planted policy over the imitation features: strong pulls towards
// logos and faces, then text, weak image pull, banner avoidance, a top-left
// bias and a penalty on revisiting neighborhoods.
LinearModel planted_policy();

SyntheticDocument make_document(int index, int layout_type, int width, int height,
                                std::uint64_t seed);

// Samples one scanpath from `policy`: cells drawn with inhibition of return
// on visited cells, positions jittered uniformly inside each cell,
// durations uniform in [150, 400] ms.
Scanpath sample_scanpath(const LinearModel& policy, const BeliefInputs& inputs,
                         int width, int height, int length, std::uint64_t seed);

BeliefInputs document_inputs(const SyntheticDocument& doc);

// Documents cycle through the layout archetypes; every document gets
// num_subjects scanpaths from `policy`.
std::vector<SyntheticDocument> make_corpus(const SyntheticOptions& options,
                                           const LinearModel& policy = planted_policy());

// Points around six well-separated layout archetypes in SegStats space.
std::vector<LayoutVector> make_blob_vectors(int per_blob, double spread,
                                            std::uint64_t seed);

}  // namespace gazedoc

#endif  // GAZEDOC_SYNTHETIC_HPP_
