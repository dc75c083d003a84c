#ifndef GAZEDOC_IO_MANIFEST_HPP_
#define GAZEDOC_IO_MANIFEST_HPP_

#include <array>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "gazedoc/priors.hpp"
#include "gazedoc/scanpath.hpp"
#include "gazedoc/segmentation.hpp"

namespace gazedoc::io {

struct ManifestEntry {
  std::string image_id;
  std::filesystem::path screenshot;
  std::filesystem::path segmentation;
  std::optional<std::filesystem::path> face_mask;
  std::filesystem::path fixations;
  // Optional precomputed component saliency, indexed by Component.
  std::array<std::optional<std::filesystem::path>, kNumComponents> component_saliency;
  std::string split = "train";
};

struct DatasetManifest {
  std::vector<ManifestEntry> entries;

  std::vector<const ManifestEntry*> split(std::string_view tag) const;
  const ManifestEntry* find(std::string_view image_id) const;
};

// JSON with "version" and "entries"; relative paths resolve against the
// manifest's directory. Checks that ids are unique and referenced files
// exist. This is the adapter point for other dataset layouts: convert them
// to this schema.
DatasetManifest load_manifest(const std::filesystem::path& path);
DatasetManifest parse_manifest(const std::string& text, const std::filesystem::path& base_dir,
                               bool check_files = true);

// Paths are written relative to base_dir when they lie below it.
std::string format_manifest(const DatasetManifest& manifest,
                            const std::filesystem::path& base_dir);

struct ImageRecord {
  const ManifestEntry* entry = nullptr;
  SegmentationMap seg;
  // Scanpaths of this image only; fixations are bounds-checked.
  std::vector<Scanpath> scanpaths;

  int width() const { return seg.width(); }
  int height() const { return seg.height(); }
  std::vector<Fixation> pooled_fixations() const;
};

ImageRecord load_record(const ManifestEntry& entry);

// Precomputed component maps when all five are listed, otherwise nullopt.
std::optional<ComponentMaps> load_component_saliency(const ManifestEntry& entry);

}  // namespace gazedoc::io

#endif  // GAZEDOC_IO_MANIFEST_HPP_
