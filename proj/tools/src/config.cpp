#include "gazedoc_tools/config.hpp"

#include <functional>
#include <map>

#include <json.hpp>

#include "gazedoc/error.hpp"
#include "gazedoc/io/atomic_file.hpp"
#include "gazedoc/io/serialize.hpp"

namespace gazedoc::cli {
namespace {

using nlohmann::json;
using Setter = std::function<void(const json&)>;

void apply(const json& section, const char* name, const std::map<std::string, Setter>& keys) {
  if (!section.is_object()) {
    throw ValidationError(std::string("config section '") + name + "' must be an object");
  }
  for (const auto& [key, value] : section.items()) {
    const auto it = keys.find(key);
    if (it == keys.end()) {
      throw ValidationError(std::string("unknown config key '") + name + "." + key + "'");
    }
    it->second(value);
  }
}

}  // namespace

AppConfig parse_config(const std::string& json_text) {
  AppConfig c;
  try {
    const json root = json::parse(json_text);
    if (!root.is_object()) throw ValidationError("config must be a JSON object");
    for (const auto& [name, section] : root.items()) {
      if (name == "fdm") {
        apply(section, "fdm", {{"sigma", [&](const json& v) { c.fdm_sigma = v.get<double>(); }}});
      } else if (name == "belief") {
        apply(section, "belief",
              {{"low_res_sigma", [&](const json& v) { c.low_res_sigma = v.get<double>(); }},
               {"fovea_radius",
                [&](const json& v) { c.imitation.fovea_radius = v.get<double>(); }},
               {"ior_radius", [&](const json& v) { c.imitation.ior_radius = v.get<double>(); }}});
      } else if (name == "cluster") {
        apply(section, "cluster",
              {{"restarts", [&](const json& v) { c.kmeans.restarts = v.get<int>(); }},
               {"max_iters", [&](const json& v) { c.kmeans.max_iters = v.get<int>(); }},
               {"k_max", [&](const json& v) { c.k_max = v.get<int>(); }}});
      } else if (name == "priors") {
        apply(section, "priors", {{"objective", [&](const json& v) {
                                     const auto s = v.get<std::string>();
                                     if (s == "least_squares") {
                                       c.prior_objective = FitObjective::kLeastSquares;
                                     } else if (s == "total_loss") {
                                       c.prior_objective = FitObjective::kTotalLoss;
                                     } else {
                                       throw ValidationError("unknown priors.objective '" + s +
                                                             "'");
                                     }
                                   }}});
      } else if (name == "metrics") {
        apply(section, "metrics",
              {{"cluster_bandwidth",
                [&](const json& v) { c.cluster_bandwidth = v.get<double>(); }},
               {"max_fixations", [&](const json& v) { c.max_fixations = v.get<int>(); }},
               {"kl_epsilon", [&](const json& v) { c.kl_epsilon = v.get<double>(); }},
               {"match", [&](const json& v) { c.scoring.match = v.get<double>(); }},
               {"mismatch", [&](const json& v) { c.scoring.mismatch = v.get<double>(); }},
               {"gap", [&](const json& v) { c.scoring.gap = v.get<double>(); }}});
      } else if (name == "imitation") {
        c.imitation = io::parse_imitation_config(section.dump(), c.imitation);
      } else if (name == "render") {
        apply(section, "render",
              {{"colormap", [&](const json& v) { c.render.colormap = v.get<std::string>(); }},
               {"alpha", [&](const json& v) { c.render.alpha = v.get<double>(); }},
               {"marker_radius", [&](const json& v) { c.render.marker_radius = v.get<int>(); }},
               {"numbering", [&](const json& v) { c.render.numbering = v.get<bool>(); }}});
      } else {
        throw ValidationError("unknown config section '" + name + "'");
      }
    }
  } catch (const json::exception& e) {
    throw ValidationError(std::string("malformed config: ") + e.what());
  }
  if (!(c.fdm_sigma >= 0) || !(c.low_res_sigma >= 0) || c.kmeans.restarts < 1 ||
      c.kmeans.max_iters < 1 || c.k_max < 1 || !(c.cluster_bandwidth > 0) ||
      c.max_fixations < 0 || !(c.kl_epsilon > 0) || !(c.scoring.match > 0)) {
    throw ValidationError("config value out of range");
  }
  io::validate(c.render);
  return c;
}

AppConfig load_config(const std::filesystem::path& path) {
  return parse_config(io::read_file(path));
}

}  // namespace gazedoc::cli
