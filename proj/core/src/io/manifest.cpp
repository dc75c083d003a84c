#include "gazedoc/io/manifest.hpp"

#include <set>

#include <json.hpp>

#include "gazedoc/error.hpp"
#include "gazedoc/io/atomic_file.hpp"
#include "gazedoc/io/fixations_csv.hpp"
#include "gazedoc/io/raster.hpp"

namespace gazedoc::io {
namespace {

using nlohmann::json;
namespace fs = std::filesystem;

constexpr int kManifestVersion = 1;

fs::path resolve(const fs::path& base, const std::string& p) {
  const fs::path path(p);
  return path.is_absolute() ? path : (base / path).lexically_normal();
}

std::string relative_to(const fs::path& p, const fs::path& base) {
  const fs::path rel = p.lexically_relative(base);
  if (!rel.empty() && *rel.begin() != "..") return rel.generic_string();
  return p.generic_string();
}

}  // namespace

std::vector<const ManifestEntry*> DatasetManifest::split(std::string_view tag) const {
  std::vector<const ManifestEntry*> out;
  for (const auto& e : entries) {
    if (tag.empty() || e.split == tag) out.push_back(&e);
  }
  return out;
}

const ManifestEntry* DatasetManifest::find(std::string_view image_id) const {
  for (const auto& e : entries) {
    if (e.image_id == image_id) return &e;
  }
  return nullptr;
}

DatasetManifest parse_manifest(const std::string& text, const fs::path& base_dir,
                               bool check_files) {
  DatasetManifest m;
  try {
    const json j = json::parse(text);
    if (j.at("version").get<int>() != kManifestVersion) {
      throw ValidationError("unsupported manifest version");
    }
    std::set<std::string> ids;
    for (const json& e : j.at("entries")) {
      ManifestEntry entry;
      entry.image_id = e.at("image_id").get<std::string>();
      if (!ids.insert(entry.image_id).second) {
        throw ValidationError("duplicate image id '" + entry.image_id + "' in manifest");
      }
      entry.screenshot = resolve(base_dir, e.at("screenshot").get<std::string>());
      entry.segmentation = resolve(base_dir, e.at("segmentation").get<std::string>());
      if (e.contains("face_mask") && !e["face_mask"].is_null()) {
        entry.face_mask = resolve(base_dir, e["face_mask"].get<std::string>());
      }
      entry.fixations = resolve(base_dir, e.at("fixations").get<std::string>());
      if (e.contains("component_saliency")) {
        for (const auto& [name, path] : e["component_saliency"].items()) {
          const auto c = parse_component(name);
          if (!c) throw ValidationError("unknown component '" + name + "' in manifest");
          entry.component_saliency[static_cast<int>(*c)] =
              resolve(base_dir, path.get<std::string>());
        }
      }
      if (e.contains("split")) entry.split = e["split"].get<std::string>();
      m.entries.push_back(std::move(entry));
    }
  } catch (const json::exception& e) {
    throw ValidationError(std::string("malformed manifest: ") + e.what());
  }
  if (check_files) {
    for (const auto& e : m.entries) {
      std::vector<fs::path> files = {e.screenshot, e.segmentation, e.fixations};
      if (e.face_mask) files.push_back(*e.face_mask);
      for (const auto& c : e.component_saliency) {
        if (c) files.push_back(*c);
      }
      for (const auto& f : files) {
        if (!fs::exists(f)) {
          throw IoError("manifest entry '" + e.image_id + "' references missing file " +
                        f.string());
        }
      }
    }
  }
  return m;
}

DatasetManifest load_manifest(const fs::path& path) {
  return parse_manifest(read_file(path), path.parent_path());
}

std::string format_manifest(const DatasetManifest& manifest, const fs::path& base_dir) {
  json entries = json::array();
  for (const auto& e : manifest.entries) {
    json j;
    j["image_id"] = e.image_id;
    j["screenshot"] = relative_to(e.screenshot, base_dir);
    j["segmentation"] = relative_to(e.segmentation, base_dir);
    if (e.face_mask) j["face_mask"] = relative_to(*e.face_mask, base_dir);
    j["fixations"] = relative_to(e.fixations, base_dir);
    json comps = json::object();
    for (int c = 0; c < kNumComponents; ++c) {
      if (e.component_saliency[c]) {
        comps[std::string(component_name(kAllComponents[c]))] =
            relative_to(*e.component_saliency[c], base_dir);
      }
    }
    if (!comps.empty()) j["component_saliency"] = comps;
    j["split"] = e.split;
    entries.push_back(std::move(j));
  }
  const json root = {{"version", kManifestVersion}, {"entries", entries}};
  return root.dump(2) + "\n";
}

std::vector<Fixation> ImageRecord::pooled_fixations() const {
  std::vector<Fixation> out;
  for (const auto& s : scanpaths) out.insert(out.end(), s.fixations.begin(), s.fixations.end());
  return out;
}

ImageRecord load_record(const ManifestEntry& entry) {
  ImageRecord r;
  r.entry = &entry;
  r.seg = load_segmentation(entry.segmentation, entry.face_mask);
  for (auto& s : load_fixations(entry.fixations)) {
    if (s.image_id != entry.image_id) continue;
    try {
      check_fixation_bounds(s.fixations, r.seg.width(), r.seg.height());
    } catch (const ValidationError& e) {
      throw ValidationError(entry.fixations.string() + ": image '" + entry.image_id +
                            "', subject '" + s.subject_id + "': " + e.what());
    }
    r.scanpaths.push_back(std::move(s));
  }
  return r;
}

std::optional<ComponentMaps> load_component_saliency(const ManifestEntry& entry) {
  ComponentMaps maps;
  for (int c = 0; c < kNumComponents; ++c) {
    if (!entry.component_saliency[c]) return std::nullopt;
    maps[c] = load_density_map(*entry.component_saliency[c]);
  }
  return maps;
}

}  // namespace gazedoc::io
