#include "gazedoc/io/serialize.hpp"

#include <cstdio>

#include <json.hpp>

#include "gazedoc/error.hpp"
#include "gazedoc/io/raster.hpp"

namespace gazedoc::io {
namespace {

using nlohmann::json;
namespace fs = std::filesystem;

constexpr int kClusterVersion = 1;
constexpr int kPriorsVersion = 1;
constexpr int kCheckpointVersion = 1;
constexpr int kReportVersion = 1;

template <typename F>
auto parse_or_throw(const std::string& text, const char* what, F&& f) {
  try {
    return f(json::parse(text));
  } catch (const json::exception& e) {
    throw ValidationError(std::string("malformed ") + what + ": " + e.what());
  }
}

void check_version(const json& j, int expected, const char* what) {
  if (j.at("version").get<int>() != expected) {
    throw ValidationError(std::string("unsupported ") + what + " version " +
                          j.at("version").dump());
  }
}

json params_json(const Params& p) { return json(std::vector<double>(p.begin(), p.end())); }

Params params_from(const json& j) {
  const auto v = j.get<std::vector<double>>();
  if (v.size() != kParamDim) {
    throw ValidationError("expected " + std::to_string(kParamDim) + " parameters, got " +
                          std::to_string(v.size()));
  }
  Params p{};
  std::copy(v.begin(), v.end(), p.begin());
  return p;
}

json adam_json(const AdamState& s) {
  return {{"m", params_json(s.m)}, {"v", params_json(s.v)}, {"step", s.step}};
}

AdamState adam_from(const json& j) {
  AdamState s;
  s.m = params_from(j.at("m"));
  s.v = params_from(j.at("v"));
  s.step = j.at("step").get<long>();
  return s;
}

json config_json(const ImitationConfig& c) {
  return {{"epochs", c.epochs},
          {"batch_size", c.batch_size},
          {"episode_length", c.episode_length},
          {"learning_rate", c.learning_rate},
          {"disc_learning_rate", c.disc_learning_rate},
          {"clip_eps", c.clip_eps},
          {"gamma", c.gamma},
          {"gae_lambda", c.gae_lambda},
          {"ppo_epochs", c.ppo_epochs},
          {"minibatch_size", c.minibatch_size},
          {"disc_steps", c.disc_steps},
          {"normalize_advantages", c.normalize_advantages},
          {"fovea_radius", c.fovea_radius},
          {"ior_radius", c.ior_radius},
          {"seed", c.seed}};
}

ImitationConfig config_from(const json& j, ImitationConfig c) {
  if (!j.is_object()) throw ValidationError("imitation config must be a JSON object");
  for (const auto& [key, value] : j.items()) {
    if (key == "epochs") c.epochs = value.get<int>();
    else if (key == "batch_size") c.batch_size = value.get<int>();
    else if (key == "episode_length") c.episode_length = value.get<int>();
    else if (key == "learning_rate") c.learning_rate = value.get<double>();
    else if (key == "disc_learning_rate") c.disc_learning_rate = value.get<double>();
    else if (key == "clip_eps") c.clip_eps = value.get<double>();
    else if (key == "gamma") c.gamma = value.get<double>();
    else if (key == "gae_lambda") c.gae_lambda = value.get<double>();
    else if (key == "ppo_epochs") c.ppo_epochs = value.get<int>();
    else if (key == "minibatch_size") c.minibatch_size = value.get<int>();
    else if (key == "disc_steps") c.disc_steps = value.get<int>();
    else if (key == "normalize_advantages") c.normalize_advantages = value.get<bool>();
    else if (key == "fovea_radius") c.fovea_radius = value.get<double>();
    else if (key == "ior_radius") c.ior_radius = value.get<double>();
    else if (key == "seed") c.seed = value.get<std::uint64_t>();
    else throw ValidationError("unknown imitation config key '" + key + "'");
  }
  if (c.epochs < 0 || c.batch_size < 1 || c.episode_length < 1 ||
      c.episode_length > kNumCells || c.ppo_epochs < 0 || c.minibatch_size < 1 ||
      c.disc_steps < 0 || !(c.clip_eps > 0) || c.gamma < 0 || c.gamma > 1 ||
      c.gae_lambda < 0 || c.gae_lambda > 1 || c.fovea_radius < 0 || c.ior_radius < 0) {
    throw ValidationError("imitation config value out of range");
  }
  return c;
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

json saliency_json(const SaliencyScores& s) {
  return {{"nss", s.nss}, {"cc", s.cc}, {"kl", s.kl}, {"auc_j", s.auc_j}, {"sauc", s.sauc}};
}

json scanpath_json(const ScanpathScores& s) {
  return {{"sequence_score", s.sequence_score},
          {"multimatch",
           {{"shape", s.shape},
            {"direction", s.direction},
            {"length", s.length},
            {"position", s.position}}},
          {"pairs", s.pairs}};
}

void csv_row(std::string& out, const std::string& id, const std::optional<SaliencyScores>& sal,
             const std::optional<ScanpathScores>& sp) {
  out += id;
  if (sal) {
    for (double v : {sal->nss, sal->cc, sal->kl, sal->auc_j, sal->sauc}) out += "," + fmt(v);
  } else {
    out += ",,,,,";
  }
  if (sp) {
    for (double v : {sp->sequence_score, sp->shape, sp->direction, sp->length, sp->position}) {
      out += "," + fmt(v);
    }
    out += "," + std::to_string(sp->pairs);
  } else {
    out += ",,,,,,";
  }
  out += "\n";
}

}  // namespace

std::string cluster_model_json(const ClusterModel& model) {
  json centers = json::array();
  for (const auto& c : model.centers) centers.push_back(std::vector<double>(c.begin(), c.end()));
  const json j = {{"version", kClusterVersion}, {"k", model.k},
                  {"seed", model.seed},         {"features", {"r_img", "r_text", "r_banner", "r_bg"}},
                  {"centers", centers},         {"wcss", model.wcss},
                  {"iterations", model.iterations}, {"assignments", model.assignments}};
  return j.dump(2) + "\n";
}

ClusterModel parse_cluster_model(const std::string& text) {
  return parse_or_throw(text, "cluster model", [](const json& j) {
    check_version(j, kClusterVersion, "cluster model");
    ClusterModel m;
    m.k = j.at("k").get<int>();
    m.seed = j.at("seed").get<std::uint64_t>();
    for (const auto& c : j.at("centers")) {
      const auto v = c.get<std::vector<double>>();
      if (v.size() != SegStats::kDim) throw ValidationError("cluster center must have 4 values");
      m.centers.push_back({v[0], v[1], v[2], v[3]});
    }
    if (static_cast<int>(m.centers.size()) != m.k || m.k < 1) {
      throw ValidationError("cluster model k does not match its centers");
    }
    m.wcss = j.value("wcss", 0.0);
    m.iterations = j.value("iterations", 0);
    m.assignments = j.value("assignments", std::vector<int>{});
    return m;
  });
}

ClusterModel load_cluster_model(const fs::path& path) {
  return parse_cluster_model(read_file(path));
}

std::vector<StagedFile> priors_files(const ComponentPriors& priors, const fs::path& json_path) {
  std::vector<StagedFile> files;
  json clusters = json::array();
  const fs::path dir = json_path.parent_path();
  for (std::size_t k = 0; k < priors.clusters.size(); ++k) {
    const ClusterPriors& cp = priors.clusters[k];
    json weights = json::object();
    json maps = json::object();
    for (int c = 0; c < kNumComponents; ++c) {
      const std::string name(component_name(kAllComponents[c]));
      weights[name] = cp.weights[c];
      const std::string rel = "priors/cluster" + std::to_string(k) + "_" + name + ".png";
      maps[name] = rel;
      auto png = density_map_files(cp.maps[c], dir / rel);
      files.insert(files.end(), png.begin(), png.end());
    }
    clusters.push_back({{"weights", weights}, {"maps", maps}});
  }
  const json j = {{"version", kPriorsVersion},
                  {"width", priors.width},
                  {"height", priors.height},
                  {"clusters", clusters}};
  files.push_back({json_path, j.dump(2) + "\n"});
  return files;
}

ComponentPriors load_priors(const fs::path& json_path) {
  const fs::path dir = json_path.parent_path();
  return parse_or_throw(read_file(json_path), "priors", [&](const json& j) {
    check_version(j, kPriorsVersion, "priors");
    ComponentPriors p;
    p.width = j.at("width").get<int>();
    p.height = j.at("height").get<int>();
    for (const auto& cj : j.at("clusters")) {
      ClusterPriors cp;
      for (int c = 0; c < kNumComponents; ++c) {
        const std::string name(component_name(kAllComponents[c]));
        cp.weights[c] = cj.at("weights").at(name).get<double>();
        cp.maps[c] = load_density_map(dir / cj.at("maps").at(name).get<std::string>());
        if (cp.maps[c].width() != p.width || cp.maps[c].height() != p.height) {
          throw ValidationError("prior map size does not match priors.json");
        }
      }
      p.clusters.push_back(std::move(cp));
    }
    return p;
  });
}

ImitationConfig parse_imitation_config(const std::string& json_text, ImitationConfig base) {
  return parse_or_throw(json_text, "imitation config",
                        [&](const json& j) { return config_from(j, base); });
}

std::string checkpoint_json(const ImitationModel& model) {
  const json j = {{"version", kCheckpointVersion},
                  {"epoch", model.epoch},
                  {"seed", model.config.seed},
                  {"feature_dim", kFeatureDim},
                  {"hyperparameters", config_json(model.config)},
                  {"policy", params_json(model.policy.params)},
                  {"critic", params_json(model.critic.params)},
                  {"discriminator", params_json(model.discriminator.params)},
                  {"optimizer",
                   {{"policy", adam_json(model.policy_opt)},
                    {"critic", adam_json(model.critic_opt)},
                    {"discriminator", adam_json(model.disc_opt)}}}};
  return j.dump(2) + "\n";
}

ImitationModel parse_checkpoint(const std::string& text) {
  return parse_or_throw(text, "checkpoint", [](const json& j) {
    check_version(j, kCheckpointVersion, "checkpoint");
    if (j.at("feature_dim").get<int>() != kFeatureDim) {
      throw ValidationError("checkpoint feature dimension does not match");
    }
    ImitationModel m;
    m.epoch = j.at("epoch").get<int>();
    m.config = config_from(j.at("hyperparameters"), {});
    m.policy.params = params_from(j.at("policy"));
    m.critic.params = params_from(j.at("critic"));
    m.discriminator.params = params_from(j.at("discriminator"));
    const json& opt = j.at("optimizer");
    m.policy_opt = adam_from(opt.at("policy"));
    m.critic_opt = adam_from(opt.at("critic"));
    m.disc_opt = adam_from(opt.at("discriminator"));
    return m;
  });
}

ImitationModel load_checkpoint(const fs::path& path) { return parse_checkpoint(read_file(path)); }

std::string training_log_csv(std::span<const EpochLog> log) {
  std::string out = "epoch,disc_loss,mean_reward,mean_seq_score_on_validation\n";
  for (const EpochLog& e : log) {
    out += std::to_string(e.epoch) + "," + fmt(e.disc_loss) + "," + fmt(e.mean_reward) + ",";
    if (e.validation_score) out += fmt(*e.validation_score);
    out += "\n";
  }
  return out;
}

std::string metric_report_json(const MetricReport& report) {
  json per = json::object();
  for (const auto& [id, r] : report.per_image) {
    json j = json::object();
    if (r.saliency) j["saliency"] = saliency_json(*r.saliency);
    if (r.scanpath) j["scanpath"] = scanpath_json(*r.scanpath);
    per[id] = j;
  }
  json agg = json::object();
  if (report.aggregate_saliency) agg["saliency"] = saliency_json(*report.aggregate_saliency);
  if (report.aggregate_scanpath) agg["scanpath"] = scanpath_json(*report.aggregate_scanpath);
  const json j = {{"version", kReportVersion}, {"per_image", per}, {"aggregate", agg}};
  return j.dump(2) + "\n";
}

std::string metric_report_csv(const MetricReport& report) {
  std::string out =
      "image_id,nss,cc,kl,auc_j,sauc,sequence_score,shape,direction,length,position,pairs\n";
  for (const auto& [id, r] : report.per_image) csv_row(out, id, r.saliency, r.scanpath);
  csv_row(out, "aggregate", report.aggregate_saliency, report.aggregate_scanpath);
  return out;
}

std::string seg_stats_csv(std::span<const std::string> image_ids,
                          std::span<const SegStats> stats) {
  if (image_ids.size() != stats.size()) throw ValidationError("id and stats counts differ");
  std::string out = "image_id,r_img,r_text,r_banner,r_bg\n";
  for (std::size_t i = 0; i < stats.size(); ++i) {
    out += image_ids[i];
    for (double v : stats[i].as_array()) out += "," + fmt(v);
    out += "\n";
  }
  return out;
}

}  // namespace gazedoc::io
