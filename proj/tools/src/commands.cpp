#include "commands.hpp"

#include <algorithm>
#include <cstdio>
#include <map>
#include <memory>
#include <numeric>
#include <optional>

#include <json.hpp>

#include "gazedoc/analysis.hpp"
#include "gazedoc/belief.hpp"
#include "gazedoc/density.hpp"
#include "gazedoc/error.hpp"
#include "gazedoc/imitation.hpp"
#include "gazedoc/io/atomic_file.hpp"
#include "gazedoc/io/fixations_csv.hpp"
#include "gazedoc/io/manifest.hpp"
#include "gazedoc/io/raster.hpp"
#include "gazedoc/io/render.hpp"
#include "gazedoc/io/serialize.hpp"
#include "gazedoc/kmeans.hpp"
#include "gazedoc/priors.hpp"
#include "gazedoc/resample.hpp"
#include "gazedoc/saliency_metrics.hpp"
#include "gazedoc/scanpath_metrics.hpp"
#include "gazedoc/synthetic.hpp"
#include "gazedoc_tools/parallel.hpp"

namespace gazedoc::cli {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

std::string name_of(int c) { return std::string(component_name(kAllComponents[c])); }

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

void require(bool ok, const std::string& message) {
  if (!ok) throw ValidationError(message);
}

fs::path out_dir(const Context& ctx) {
  require(!ctx.opt.out_dir.empty(), "--out-dir is required");
  return ctx.opt.out_dir;
}

std::uint64_t seed(const Context& ctx, const char* command) {
  require(ctx.opt.has_seed, std::string(command) + " is randomized and requires --seed");
  return ctx.opt.seed;
}

fs::path or_default(const std::string& value, const fs::path& fallback) {
  return value.empty() ? fallback : fs::path(value);
}

struct Dataset {
  io::DatasetManifest manifest;
  std::vector<const io::ManifestEntry*> entries;
};

Dataset dataset(const Context& ctx, std::string_view default_split) {
  require(!ctx.opt.manifest.empty(), "--manifest is required");
  Dataset d;
  d.manifest = io::load_manifest(ctx.opt.manifest);
  const std::string split = ctx.opt.split.empty() ? std::string(default_split) : ctx.opt.split;
  for (const auto* e : d.manifest.split(split == "all" ? "" : split)) d.entries.push_back(e);
  require(!d.entries.empty(), "manifest has no entries in split '" + split + "'");
  return d;
}

std::vector<io::ImageRecord> load_records(const Context& ctx, const Dataset& d) {
  std::vector<io::ImageRecord> recs(d.entries.size());
  parallel_for(d.entries.size(), ctx.opt.jobs,
               [&](std::size_t i) { recs[i] = io::load_record(*d.entries[i]); });
  return recs;
}

DensityMap gt_fdm(const Context& ctx, const io::ImageRecord& r) {
  const auto fix = r.pooled_fixations();
  require(!fix.empty(), "image '" + r.entry->image_id + "' has no fixations");
  return build_fdm(fix, r.width(), r.height(), ctx.cfg.fdm_sigma);
}

fs::path map_path(const fs::path& dir, const std::string& id, int component = -1) {
  return dir / (component < 0 ? id + ".png" : id + "_" + name_of(component) + ".png");
}

ComponentMaps load_components(const fs::path& dir, const std::string& id) {
  ComponentMaps maps;
  for (int c = 0; c < kNumComponents; ++c) maps[c] = io::load_density_map(map_path(dir, id, c));
  return maps;
}

// Component maps used as belief inputs, from predict's output or from the
// manifest's precomputed saliency.
ComponentMaps belief_components(const Context& ctx, const io::ImageRecord& r) {
  if (ctx.opt.belief_source == "manifest") {
    auto maps = io::load_component_saliency(*r.entry);
    require(maps.has_value(), "manifest entry '" + r.entry->image_id +
                                  "' does not list all five component saliency maps");
    return *maps;
  }
  require(ctx.opt.belief_source == "predictions",
          "--belief-source must be predictions or manifest");
  return load_components(or_default(ctx.opt.pred_dir, out_dir(ctx) / "predictions"),
                         r.entry->image_id);
}

void check_sizes(const ComponentMaps& maps, const io::ImageRecord& r) {
  for (const auto& m : maps) {
    require(m.width() == r.width() && m.height() == r.height(),
            "component maps of '" + r.entry->image_id + "' do not match the segmentation size");
  }
}

ImageScanpaths human_scanpaths(const io::ImageRecord& r) {
  return {r.entry->image_id, r.width(), r.height(), r.scanpaths};
}

}  // namespace

void cmd_build_fdm(Context& ctx) {
  const Dataset d = dataset(ctx, "all");
  const auto recs = load_records(ctx, d);
  const fs::path dir = out_dir(ctx) / "fdm";
  std::vector<std::vector<io::StagedFile>> files(recs.size());
  parallel_for(recs.size(), ctx.opt.jobs, [&](std::size_t i) {
    const auto& r = recs[i];
    const DensityMap gt = gt_fdm(ctx, r);
    files[i] = io::density_map_files(gt, map_path(dir, r.entry->image_id));
    const auto masks = component_masks(r.seg);
    for (int c = 0; c < kNumComponents; ++c) {
      auto f = io::density_map_files(component_fdm(gt, masks[c], ctx.cfg.fdm_sigma),
                                     map_path(dir, r.entry->image_id, c));
      files[i].insert(files[i].end(), f.begin(), f.end());
    }
  });
  io::OutputStage stage;
  for (auto& f : files) stage.add(std::move(f));
  stage.commit();
  ctx.out << "wrote FDMs for " << recs.size() << " image(s) to " << dir.string() << "\n";
}

void cmd_dwell_map(Context& ctx) {
  const Dataset d = dataset(ctx, "all");
  const auto recs = load_records(ctx, d);
  const fs::path dir = out_dir(ctx) / "dwell";
  std::vector<std::vector<io::StagedFile>> files(recs.size());
  std::vector<std::vector<std::optional<double>>> diffs(recs.size());
  parallel_for(recs.size(), ctx.opt.jobs, [&](std::size_t i) {
    const auto& r = recs[i];
    const auto fix = r.pooled_fixations();
    const DensityMap dwell = dwell_map(fix, r.width(), r.height(), ctx.cfg.fdm_sigma);
    files[i] = io::density_map_files(dwell, map_path(dir, r.entry->image_id));
    const auto masks = component_masks(r.seg);
    diffs[i] = fixation_dwell_difference(gt_fdm(ctx, r), normalized(dwell), masks);
  });
  std::string csv = "image_id";
  for (int c = 0; c < kNumComponents; ++c) csv += "," + name_of(c);
  csv += "\n";
  for (std::size_t i = 0; i < recs.size(); ++i) {
    csv += recs[i].entry->image_id;
    for (const auto& v : diffs[i]) csv += "," + (v ? fmt(*v) : std::string());
    csv += "\n";
  }
  io::OutputStage stage;
  for (auto& f : files) stage.add(std::move(f));
  stage.add(dir / "fixation_dwell_difference.csv", csv);
  stage.commit();
  ctx.out << "wrote dwell maps for " << recs.size() << " image(s) to " << dir.string() << "\n";
}

void cmd_seg_stats(Context& ctx) {
  const Dataset d = dataset(ctx, "all");
  std::vector<std::string> ids(d.entries.size());
  std::vector<SegStats> stats(d.entries.size());
  parallel_for(d.entries.size(), ctx.opt.jobs, [&](std::size_t i) {
    ids[i] = d.entries[i]->image_id;
    stats[i] = seg_stats(io::load_segmentation(d.entries[i]->segmentation, d.entries[i]->face_mask));
  });
  io::write_file_atomic(out_dir(ctx) / "seg_stats.csv", io::seg_stats_csv(ids, stats));
  ctx.out << "wrote seg_stats.csv for " << ids.size() << " image(s)\n";
}

void cmd_cluster(Context& ctx) {
  const std::uint64_t s = seed(ctx, "cluster");
  const Dataset d = dataset(ctx, "train");
  const fs::path dir = out_dir(ctx);
  std::vector<SegStats> stats(d.entries.size());
  parallel_for(d.entries.size(), ctx.opt.jobs, [&](std::size_t i) {
    stats[i] = seg_stats(io::load_segmentation(d.entries[i]->segmentation, d.entries[i]->face_mask));
  });
  const auto vectors = layout_vectors(stats);
  io::OutputStage stage;
  ClusterModel model;
  if (ctx.opt.k > 0) {
    model = kmeans_pp(vectors, ctx.opt.k, s, ctx.cfg.kmeans);
  } else {
    const int k_max = std::min<int>(ctx.cfg.k_max, static_cast<int>(vectors.size()));
    std::vector<int> ks;
    for (int k = 1; k <= k_max; ++k) ks.push_back(k);
    const auto curve = elbow_curve(vectors, ks, s, ctx.cfg.kmeans);
    const int best = elbow_k(curve);
    std::string csv = "k,wcss\n";
    for (const auto& p : curve) {
      csv += std::to_string(p.k) + "," + fmt(p.wcss) + "\n";
      if (p.k == best) model = p.model;
    }
    stage.add(dir / "elbow.csv", csv);
    ctx.out << "elbow selected k=" << best << "\n";
  }
  stage.add(dir / "cluster_model.json", io::cluster_model_json(model));
  stage.commit();
  ctx.out << "clustered " << vectors.size() << " layout(s) into k=" << model.k << "\n";
}

void cmd_fit_priors(Context& ctx) {
  const Dataset d = dataset(ctx, "train");
  const fs::path dir = out_dir(ctx);
  const ClusterModel model =
      io::load_cluster_model(or_default(ctx.opt.cluster_model, dir / "cluster_model.json"));
  const fs::path fdm_dir = or_default(ctx.opt.fdm_dir, dir / "fdm");
  auto recs = load_records(ctx, d);
  std::vector<PriorTrainingItem> items(recs.size());
  parallel_for(recs.size(), ctx.opt.jobs, [&](std::size_t i) {
    auto& r = recs[i];
    PriorTrainingItem& item = items[i];
    item.gt_fdm = io::load_density_map(map_path(fdm_dir, r.entry->image_id));
    item.component_fdms = load_components(fdm_dir, r.entry->image_id);
    check_sizes(item.component_fdms, r);
    item.cluster = assign_cluster(seg_stats(r.seg), model);
    item.fixations = r.pooled_fixations();
    item.seg = std::move(r.seg);
  });
  PriorFitOptions fit;
  fit.objective = ctx.cfg.prior_objective;
  const ComponentPriors priors = fit_component_priors(items, model.k, fit);
  io::OutputStage stage;
  stage.add(io::priors_files(priors, dir / "priors.json"));
  stage.commit();
  ctx.out << "fitted priors for " << priors.clusters.size() << " cluster(s) from "
          << items.size() << " image(s)\n";
}

void cmd_predict(Context& ctx) {
  const Dataset d = dataset(ctx, "all");
  const fs::path dir = out_dir(ctx);
  const ClusterModel model =
      io::load_cluster_model(or_default(ctx.opt.cluster_model, dir / "cluster_model.json"));
  const ComponentPriors priors = io::load_priors(or_default(ctx.opt.priors, dir / "priors.json"));
  const fs::path pred_dir = or_default(ctx.opt.pred_dir, dir / "predictions");
  std::vector<std::vector<io::StagedFile>> files(d.entries.size());
  std::vector<int> clusters(d.entries.size());
  std::vector<std::pair<int, int>> sizes(d.entries.size());
  parallel_for(d.entries.size(), ctx.opt.jobs, [&](std::size_t i) {
    const auto* e = d.entries[i];
    const SegmentationMap seg = io::load_segmentation(e->segmentation, e->face_mask);
    const SaliencyPrediction p = predict_saliency(seg, model, priors);
    clusters[i] = p.cluster;
    sizes[i] = {seg.width(), seg.height()};
    files[i] = io::density_map_files(p.final_map, map_path(pred_dir, e->image_id));
    for (int c = 0; c < kNumComponents; ++c) {
      auto f = io::density_map_files(p.components[c], map_path(pred_dir, e->image_id, c));
      files[i].insert(files[i].end(), f.begin(), f.end());
    }
  });
  io::OutputStage stage;
  for (auto& f : files) stage.add(std::move(f));
  stage.commit();
  for (std::size_t i = 0; i < d.entries.size(); ++i) {
    ctx.err << "note: " << d.entries[i]->image_id << ": cluster " << clusters[i]
            << " priors upsampled " << priors.width << "x" << priors.height << " -> "
            << sizes[i].first << "x" << sizes[i].second << "\n";
  }
  ctx.out << "wrote predictions for " << d.entries.size() << " image(s) to "
          << pred_dir.string() << "\n";
}

void cmd_simulate(Context& ctx) {
  const std::uint64_t s = seed(ctx, "simulate");
  const std::string& policy_name = ctx.opt.policy;
  require(policy_name == "wta" || policy_name == "irl" || policy_name == "uniform",
          "--policy must be wta, irl or uniform");
  require(ctx.opt.T >= 1 && ctx.opt.T <= kNumCells, "--T must lie in [1, 640]");
  require(ctx.opt.num_scanpaths >= 1, "--num-scanpaths must be positive");
  const Dataset d = dataset(ctx, "all");
  const fs::path dir = out_dir(ctx);
  std::optional<ImitationModel> irl;
  if (policy_name == "irl") {
    irl = io::load_checkpoint(or_default(ctx.opt.checkpoint, dir / "checkpoint.json"));
  }
  const double fovea = irl ? irl->config.fovea_radius : ctx.cfg.imitation.fovea_radius;
  const double ior = irl ? irl->config.ior_radius : ctx.cfg.imitation.ior_radius;
  const fs::path pred_dir = or_default(ctx.opt.pred_dir, dir / "predictions");

  std::vector<std::vector<Scanpath>> results(d.entries.size());
  parallel_for(d.entries.size(), ctx.opt.jobs, [&](std::size_t i) {
    const auto* e = d.entries[i];
    const SegmentationMap seg = io::load_segmentation(e->segmentation, e->face_mask);
    io::ImageRecord rec;
    rec.entry = e;
    rec.seg = seg;
    const ComponentMaps comps = belief_components(ctx, rec);
    check_sizes(comps, rec);
    const BeliefInputs inputs = make_belief_inputs(comps, seg, ctx.cfg.low_res_sigma);

    std::unique_ptr<Policy> policy;
    if (policy_name == "wta") {
      const DensityMap final_map =
          ctx.opt.belief_source == "manifest"
              ? combine_components(comps, {1, 1, 1, 1, 1}, seg.width(), seg.height())
              : io::load_density_map(map_path(pred_dir, e->image_id));
      policy = std::make_unique<WtaPolicy>(wta_policy(final_map));
    } else if (policy_name == "irl") {
      policy = std::make_unique<LinearSoftmaxPolicy>(irl->policy);
    } else {
      policy = std::make_unique<UniformPolicy>();
    }
    for (int n = 0; n < ctx.opt.num_scanpaths; ++n) {
      RolloutOptions ro;
      ro.length = ctx.opt.T;
      ro.fovea_radius = fovea;
      ro.ior_radius = ior;
      ro.seed = derive_seed(derive_seed(s, i), n);
      ro.image_width = seg.width();
      ro.image_height = seg.height();
      Scanpath sp = rollout(*policy, inputs.initial(), inputs.high, ro).scanpath;
      sp.image_id = e->image_id;
      char sid[32];
      std::snprintf(sid, sizeof sid, "%s%02d", policy_name.c_str(), n);
      sp.subject_id = sid;
      results[i].push_back(std::move(sp));
    }
  });
  std::vector<Scanpath> all;
  for (auto& r : results) all.insert(all.end(), r.begin(), r.end());
  const fs::path path = dir / "simulated" / (policy_name + ".csv");
  io::write_file_atomic(path, io::format_fixations(all));
  ctx.out << "wrote " << all.size() << " scanpath(s) to " << path.string() << "\n";
}

void cmd_train_irl(Context& ctx) {
  const std::uint64_t s = seed(ctx, "train-irl");
  const fs::path dir = out_dir(ctx);
  require(!ctx.opt.manifest.empty(), "--manifest is required");
  const io::DatasetManifest manifest = io::load_manifest(ctx.opt.manifest);
  const std::string split = ctx.opt.split.empty() ? "train" : ctx.opt.split;
  Dataset train_set{manifest, {}};
  Dataset val_set{manifest, {}};
  for (const auto* e : train_set.manifest.split(split)) train_set.entries.push_back(e);
  for (const auto* e : val_set.manifest.split("val")) val_set.entries.push_back(e);
  require(!train_set.entries.empty(), "manifest has no entries in split '" + split + "'");

  ImitationConfig cfg = ctx.cfg.imitation;
  cfg.seed = s;
  auto train_recs = load_records(ctx, train_set);
  auto val_recs = load_records(ctx, val_set);

  auto make_inputs = [&](std::vector<io::ImageRecord>& recs) {
    std::vector<BeliefInputs> inputs(recs.size());
    parallel_for(recs.size(), ctx.opt.jobs, [&](std::size_t i) {
      const ComponentMaps comps = belief_components(ctx, recs[i]);
      check_sizes(comps, recs[i]);
      inputs[i] = make_belief_inputs(comps, recs[i].seg, ctx.cfg.low_res_sigma);
    });
    return inputs;
  };
  const auto train_inputs = make_inputs(train_recs);
  const auto val_inputs = make_inputs(val_recs);

  std::vector<ImitationExample> examples;
  int collapsed_total = 0;
  for (std::size_t i = 0; i < train_recs.size(); ++i) {
    ImitationExample ex{train_inputs[i], {}};
    for (const Scanpath& sp : train_recs[i].scanpaths) {
      int collapsed = 0;
      ex.expert_actions.push_back(scanpath_to_actions(sp, train_recs[i].width(),
                                                      train_recs[i].height(),
                                                      cfg.episode_length, &collapsed));
      collapsed_total += collapsed;
    }
    examples.push_back(std::move(ex));
  }
  if (collapsed_total > 0) {
    ctx.err << "note: collapsed " << collapsed_total
            << " consecutive same-cell fixation(s) into single actions\n";
  }

  Validator validate;
  if (!val_recs.empty()) {
    validate = [&](const ImitationModel& m) {
      double sum = 0.0;
      for (std::size_t i = 0; i < val_recs.size(); ++i) {
        std::vector<Scanpath> preds;
        for (std::size_t n = 0; n < val_recs[i].scanpaths.size(); ++n) {
          RolloutOptions ro;
          ro.length = m.config.episode_length;
          ro.fovea_radius = m.config.fovea_radius;
          ro.ior_radius = m.config.ior_radius;
          ro.seed = derive_seed(derive_seed(s ^ 0x5eedULL, i), n);
          ro.image_width = val_recs[i].width();
          ro.image_height = val_recs[i].height();
          preds.push_back(rollout(LinearSoftmaxPolicy(m.policy), val_inputs[i].initial(),
                                  val_inputs[i].high, ro)
                              .scanpath);
        }
        sum += score_against_humans(preds, human_scanpaths(val_recs[i]),
                                    ctx.cfg.cluster_bandwidth, ctx.cfg.max_fixations,
                                    ctx.cfg.scoring)
                   .sequence_score;
      }
      return sum / static_cast<double>(val_recs.size());
    };
  }

  TrainResult result;
  if (!ctx.opt.resume.empty()) {
    ImitationModel model = io::load_checkpoint(ctx.opt.resume);
    model.config.epochs = cfg.epochs;
    result = train(examples, std::move(model), validate);
  } else {
    result = train(examples, cfg, validate);
  }
  io::OutputStage stage;
  stage.add(dir / "checkpoint.json", io::checkpoint_json(result.model));
  stage.add(dir / "training_log.csv", io::training_log_csv(result.log));
  stage.commit();
  ctx.out << "trained " << result.log.size() << " epoch(s) on " << examples.size()
          << " image(s); checkpoint at epoch " << result.model.epoch << "\n";
}

void cmd_evaluate(Context& ctx) {
  const Dataset d = dataset(ctx, "all");
  const fs::path dir = out_dir(ctx);
  require(!ctx.opt.pred_dir.empty() || !ctx.opt.scanpaths.empty(),
          "evaluate needs --pred-dir and/or --scanpaths");
  // sAUC subsampling is the only random step; without --seed it uses seed 0.
  const std::uint64_t s = ctx.opt.has_seed ? ctx.opt.seed : 0;
  auto recs = load_records(ctx, d);

  std::map<std::string, std::vector<Scanpath>> predicted;
  if (!ctx.opt.scanpaths.empty()) {
    for (auto& sp : io::load_fixations(ctx.opt.scanpaths)) {
      if (sp.fixations.empty()) continue;
      predicted[sp.image_id].push_back(std::move(sp));
    }
  }

  std::vector<std::optional<SaliencyScores>> sal(recs.size());
  std::vector<std::optional<ScanpathScores>> scan(recs.size());
  std::vector<std::string> notes(recs.size());
  parallel_for(recs.size(), ctx.opt.jobs, [&](std::size_t i) {
    const auto& r = recs[i];
    const std::string& id = r.entry->image_id;
    if (!ctx.opt.pred_dir.empty()) {
      const fs::path p = map_path(ctx.opt.pred_dir, id);
      if (!fs::exists(p)) {
        notes[i] = "warning: no prediction for '" + id + "', skipped\n";
      } else {
        DensityMap pred = io::load_density_map(p);
        if (pred.width() != r.width() || pred.height() != r.height()) {
          notes[i] = "note: resized prediction for '" + id + "' to the image size\n";
          pred = resize_bilinear(pred, r.width(), r.height());
        }
        std::vector<Fixation> pool;
        for (const auto& other : recs) {
          if (&other == &r) continue;
          const auto f = other.pooled_fixations();
          pool.insert(pool.end(), f.begin(), f.end());
        }
        sal[i] = evaluate_saliency(pred, gt_fdm(ctx, r), r.pooled_fixations(), pool,
                                   derive_seed(s, i), ctx.cfg.kl_epsilon);
      }
    }
    const auto it = predicted.find(id);
    if (it != predicted.end() && !r.scanpaths.empty()) {
      scan[i] = score_against_humans(it->second, human_scanpaths(r), ctx.cfg.cluster_bandwidth,
                                     ctx.cfg.max_fixations, ctx.cfg.scoring);
    }
  });
  MetricReport report;
  for (std::size_t i = 0; i < recs.size(); ++i) {
    ctx.err << notes[i];
    if (sal[i] || scan[i]) report.per_image[recs[i].entry->image_id] = {sal[i], scan[i]};
  }
  require(!report.per_image.empty(), "nothing to evaluate: no predictions matched the manifest");
  finalize_report(report);
  io::OutputStage stage;
  stage.add(dir / "metrics.json", io::metric_report_json(report));
  stage.add(dir / "metrics.csv", io::metric_report_csv(report));
  stage.commit();
  ctx.out << "evaluated " << report.per_image.size() << " image(s)\n";
}

void cmd_io_score(Context& ctx) {
  const Dataset d = dataset(ctx, "all");
  const fs::path dir = out_dir(ctx);
  const auto recs = load_records(ctx, d);
  std::vector<ImageScanpaths> images;
  for (const auto& r : recs) images.push_back(human_scanpaths(r));
  const InterObserverResult io_result = inter_observer(images, ctx.cfg.cluster_bandwidth,
                                                       ctx.cfg.max_fixations, ctx.cfg.scoring);
  for (const auto& id : io_result.skipped_images) {
    ctx.err << "warning: '" << id << "' has fewer than two subjects, skipped\n";
  }
  MetricReport report;
  for (const auto& [id, scores] : io_result.per_image) report.per_image[id].scanpath = scores;
  finalize_report(report);
  io::OutputStage stage;
  stage.add(dir / "inter_observer.json", io::metric_report_json(report));
  stage.add(dir / "inter_observer.csv", io::metric_report_csv(report));
  if (ctx.opt.has_seed) {
    // Uniform-policy baseline: as many random scanpaths as human ones.
    MetricReport baseline;
    std::vector<std::optional<ScanpathScores>> scores(recs.size());
    parallel_for(recs.size(), ctx.opt.jobs, [&](std::size_t i) {
      const auto& r = recs[i];
      if (r.scanpaths.empty()) return;
      std::vector<Scanpath> preds;
      const int length = ctx.cfg.max_fixations > 0 ? ctx.cfg.max_fixations : kEvaluatedFixations;
      for (std::size_t n = 0; n < r.scanpaths.size(); ++n) {
        RolloutOptions ro;
        ro.length = length;
        ro.seed = derive_seed(derive_seed(ctx.opt.seed, i), n);
        ro.image_width = r.width();
        ro.image_height = r.height();
        BeliefState b0 = init_belief(std::vector<GridChannel>(kNumChannels, GridChannel{}));
        preds.push_back(rollout(UniformPolicy(), b0, ComponentChannels{}, ro).scanpath);
      }
      scores[i] = score_against_humans(preds, human_scanpaths(r), ctx.cfg.cluster_bandwidth,
                                       ctx.cfg.max_fixations, ctx.cfg.scoring);
    });
    for (std::size_t i = 0; i < recs.size(); ++i) {
      if (scores[i]) baseline.per_image[recs[i].entry->image_id].scanpath = scores[i];
    }
    finalize_report(baseline);
    stage.add(dir / "uniform_baseline.json", io::metric_report_json(baseline));
    stage.add(dir / "uniform_baseline.csv", io::metric_report_csv(baseline));
  }
  stage.commit();
  ctx.out << "inter-observer sequence score " << fmt(io_result.aggregate.sequence_score)
          << " over " << io_result.per_image.size() << " image(s)\n";
}

void cmd_analyze(Context& ctx) {
  const Dataset d = dataset(ctx, "all");
  const fs::path dir = out_dir(ctx) / "analysis";
  const auto recs = load_records(ctx, d);
  const int T = ctx.cfg.max_fixations > 0 ? ctx.cfg.max_fixations : kEvaluatedFixations;

  std::vector<ProportionMatrix> props(recs.size());
  std::vector<double> entropy(recs.size());
  parallel_for(recs.size(), ctx.opt.jobs, [&](std::size_t i) {
    props[i] = component_fixation_proportions(recs[i].scanpaths, recs[i].seg, T, true);
    entropy[i] = fdm_entropy(gt_fdm(ctx, recs[i]));
  });
  ProportionMatrix mean;
  std::string prop_csv = "component";
  for (int t = 1; t <= T; ++t) prop_csv += ",t" + std::to_string(t);
  prop_csv += "\n";
  for (int c = 0; c < kNumComponents; ++c) {
    mean[c].assign(T, std::nullopt);
    prop_csv += name_of(c);
    for (int t = 0; t < T; ++t) {
      double sum = 0.0;
      int n = 0;
      for (const auto& p : props) {
        if (p[c][t]) {
          sum += *p[c][t];
          ++n;
        }
      }
      if (n > 0) mean[c][t] = sum / n;
      prop_csv += "," + (n > 0 ? fmt(sum / n) : std::string());
    }
    prop_csv += "\n";
  }
  std::string ent_csv = "image_id,entropy_bits\n";
  for (std::size_t i = 0; i < recs.size(); ++i) {
    ent_csv += recs[i].entry->image_id + "," + fmt(entropy[i]) + "\n";
  }
  json ranking = json::array();
  for (Component c : rank_components(mean)) ranking.push_back(std::string(component_name(c)));
  json summary = {{"component_ranking", ranking},
                  {"entropy_bits",
                   {{"mean", entropy.empty() ? 0.0
                                             : std::accumulate(entropy.begin(), entropy.end(), 0.0) /
                                                   entropy.size()},
                    {"min", *std::min_element(entropy.begin(), entropy.end())},
                    {"max", *std::max_element(entropy.begin(), entropy.end())}}}};

  io::OutputStage stage;
  if (ctx.opt.ablation) {
    const fs::path out = out_dir(ctx);
    const ClusterModel model =
        io::load_cluster_model(or_default(ctx.opt.cluster_model, out / "cluster_model.json"));
    const ComponentPriors priors = io::load_priors(or_default(ctx.opt.priors, out / "priors.json"));
    const std::uint64_t s = ctx.opt.has_seed ? ctx.opt.seed : 0;
    std::vector<std::map<std::string, SaliencyScores>> rows(recs.size());
    parallel_for(recs.size(), ctx.opt.jobs, [&](std::size_t i) {
      const auto& r = recs[i];
      const SaliencyPrediction p = predict_saliency(r.seg, model, priors);
      std::vector<Fixation> pool;
      for (const auto& other : recs) {
        if (&other == &r) continue;
        const auto f = other.pooled_fixations();
        pool.insert(pool.end(), f.begin(), f.end());
      }
      rows[i] = component_ablation(p.components, priors.clusters[p.cluster].weights,
                                   gt_fdm(ctx, r), r.pooled_fixations(), pool,
                                   derive_seed(s, i));
    });
    std::map<std::string, std::vector<SaliencyScores>> by_variant;
    std::string csv = "image_id,variant,nss,cc,kl,auc_j,sauc\n";
    for (std::size_t i = 0; i < recs.size(); ++i) {
      for (const auto& [variant, sc] : rows[i]) {
        by_variant[variant].push_back(sc);
        csv += recs[i].entry->image_id + "," + variant + "," + fmt(sc.nss) + "," + fmt(sc.cc) +
               "," + fmt(sc.kl) + "," + fmt(sc.auc_j) + "," + fmt(sc.sauc) + "\n";
      }
    }
    for (const auto& [variant, list] : by_variant) {
      const SaliencyScores m = mean_scores(list);
      csv += "mean," + variant + "," + fmt(m.nss) + "," + fmt(m.cc) + "," + fmt(m.kl) + "," +
             fmt(m.auc_j) + "," + fmt(m.sauc) + "\n";
    }
    stage.add(dir / "component_ablation.csv", csv);
  }
  stage.add(dir / "fixation_proportions.csv", prop_csv);
  stage.add(dir / "fixation_entropy.csv", ent_csv);
  stage.add(dir / "summary.json", summary.dump(2) + "\n");
  stage.commit();
  ctx.out << "component ranking:";
  for (const auto& r : ranking) ctx.out << " " << r.get<std::string>();
  ctx.out << "\n";
}

void cmd_render(Context& ctx) {
  const Dataset d = dataset(ctx, "all");
  const fs::path dir = out_dir(ctx) / "render";
  const std::string map_dir = !ctx.opt.map_dir.empty() ? ctx.opt.map_dir : ctx.opt.pred_dir;
  require(!map_dir.empty() || !ctx.opt.scanpaths.empty(),
          "render needs --pred-dir/--map-dir and/or --scanpaths");
  io::validate(ctx.cfg.render);
  std::map<std::string, std::vector<Scanpath>> scanpaths;
  if (!ctx.opt.scanpaths.empty()) {
    for (auto& sp : io::load_fixations(ctx.opt.scanpaths)) {
      scanpaths[sp.image_id].push_back(std::move(sp));
    }
  }
  std::vector<const io::ManifestEntry*> entries;
  for (const auto* e : d.entries) {
    if (ctx.opt.image_id.empty() || e->image_id == ctx.opt.image_id) entries.push_back(e);
  }
  require(!entries.empty(), "no manifest entry matches --image-id '" + ctx.opt.image_id + "'");
  std::vector<std::vector<io::StagedFile>> files(entries.size());
  parallel_for(entries.size(), ctx.opt.jobs, [&](std::size_t i) {
    const auto* e = entries[i];
    const RgbImage shot = io::load_rgb(e->screenshot);
    if (!map_dir.empty()) {
      const DensityMap map = io::load_density_map(map_path(map_dir, e->image_id));
      files[i].push_back({dir / (e->image_id + "_heatmap.png"),
                          io::encode_rgb_png(io::render_heatmap(shot, map, ctx.cfg.render))});
    }
    const auto it = scanpaths.find(e->image_id);
    if (it != scanpaths.end()) {
      for (const Scanpath& sp : it->second) {
        files[i].push_back({dir / (e->image_id + "_" + sp.subject_id + "_scanpath.png"),
                            io::encode_rgb_png(io::render_scanpath(shot, sp, ctx.cfg.render))});
      }
    }
  });
  io::OutputStage stage;
  std::size_t n = 0;
  for (auto& f : files) {
    n += f.size();
    stage.add(std::move(f));
  }
  stage.commit();
  ctx.out << "rendered " << n << " figure(s) to " << dir.string() << "\n";
}

void cmd_synth_corpus(Context& ctx) {
  const std::uint64_t s = seed(ctx, "synth-corpus");
  const fs::path dir = out_dir(ctx);
  SyntheticOptions o;
  o.num_documents = ctx.opt.documents;
  o.num_subjects = ctx.opt.subjects;
  o.width = ctx.opt.width;
  o.height = ctx.opt.height;
  o.fixations_per_scanpath = ctx.opt.fixations;
  o.seed = s;
  require(o.fixations_per_scanpath >= 1 && o.fixations_per_scanpath <= kNumCells,
          "--fixations must lie in [1, 640]");
  const auto docs = make_corpus(o);

  // Splits: the last sixth is test, the sixth before it validation.
  const int n = static_cast<int>(docs.size());
  const int held = n / 6;
  io::DatasetManifest manifest;
  io::OutputStage stage;
  for (int i = 0; i < n; ++i) {
    const SyntheticDocument& doc = docs[i];
    io::ManifestEntry e;
    e.image_id = doc.image_id;
    e.screenshot = dir / "images" / (doc.image_id + ".png");
    e.segmentation = dir / "seg" / (doc.image_id + ".png");
    e.face_mask = dir / "seg" / (doc.image_id + "_face.png");
    e.fixations = dir / "fixations" / (doc.image_id + ".csv");
    e.split = i >= n - held ? "test" : (i >= n - 2 * held ? "val" : "train");
    stage.add(e.screenshot, io::encode_rgb_png(doc.screenshot));
    stage.add(e.segmentation, io::encode_segmentation_png(doc.seg));
    stage.add(*e.face_mask, io::encode_mask_png(*doc.seg.face_mask()));
    stage.add(e.fixations, io::format_fixations(doc.scanpaths));
    for (int c = 0; c < kNumComponents; ++c) {
      const fs::path p = map_path(dir / "components", doc.image_id, c);
      e.component_saliency[c] = p;
      stage.add(io::density_map_files(doc.components[c], p));
    }
    manifest.entries.push_back(std::move(e));
  }
  stage.add(dir / "manifest.json", io::format_manifest(manifest, dir));
  stage.commit();
  ctx.out << "wrote " << n << " document(s) with " << o.num_subjects << " subject(s) each to "
          << dir.string() << "\n";
}

}  // namespace gazedoc::cli
