#include "gazedoc_tools/cli.hpp"

#include <filesystem>
#include <functional>
#include <map>

#include <CLI11.hpp>

#include "commands.hpp"
#include "gazedoc/error.hpp"

namespace gazedoc::cli {
namespace {

struct Subcommand {
  const char* name;
  const char* help;
  void (*run)(Context&);
};

constexpr Subcommand kSubcommands[] = {
    {"build-fdm", "Ground-truth and component fixation density maps", cmd_build_fdm},
    {"dwell-map", "Duration-weighted dwell maps and fixation-dwell differences", cmd_dwell_map},
    {"seg-stats", "Layout statistics of each segmentation", cmd_seg_stats},
    {"cluster", "K-means++ over layout statistics (elbow selection without --k)", cmd_cluster},
    {"fit-priors", "Per-cluster component priors and combination weights", cmd_fit_priors},
    {"predict", "Saliency prediction from segmentations, clusters and priors", cmd_predict},
    {"simulate", "Scanpath rollouts from a wta, irl or uniform policy", cmd_simulate},
    {"train-irl", "Adversarial imitation training of the scanpath policy", cmd_train_irl},
    {"evaluate", "Saliency and scanpath metrics against human data", cmd_evaluate},
    {"io-score", "Inter-observer scanpath agreement", cmd_io_score},
    {"analyze", "Fixation proportions, entropy and component ablation", cmd_analyze},
    {"render", "Heatmap and scanpath overlays", cmd_render},
    {"synth-corpus", "Generate a seeded synthetic corpus with a manifest", cmd_synth_corpus},
};

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"gazedoc: saliency and scanpath modelling for document images", "gazedoc"};
  app.require_subcommand(1, 1);
  app.fallthrough();
  Options opt;
  auto* seed_opt = app.add_option("--seed", opt.seed, "Random seed (required by randomized commands)");
  app.add_option("--manifest", opt.manifest, "Dataset manifest JSON");
  app.add_option("--config", opt.config, "Configuration JSON");
  app.add_option("--out-dir", opt.out_dir, "Output directory");
  app.add_option("--jobs", opt.jobs, "Worker threads for per-image work")->check(CLI::Range(1, 256));

  std::map<std::string, CLI::App*> subs;
  for (const Subcommand& s : kSubcommands) subs[s.name] = app.add_subcommand(s.name, s.help);

  subs["build-fdm"]->add_option("--split", opt.split, "Manifest split (default: all)");
  subs["dwell-map"]->add_option("--split", opt.split, "Manifest split (default: all)");
  subs["seg-stats"]->add_option("--split", opt.split, "Manifest split (default: all)");

  auto* cluster = subs["cluster"];
  cluster->add_option("--k", opt.k, "Number of clusters")->check(CLI::PositiveNumber);
  cluster->add_option("--split", opt.split, "Manifest split (default: train)");

  auto* fit = subs["fit-priors"];
  fit->add_option("--split", opt.split, "Manifest split (default: train)");
  fit->add_option("--fdm-dir", opt.fdm_dir, "build-fdm output (default: OUT/fdm)");
  fit->add_option("--cluster-model", opt.cluster_model, "Default: OUT/cluster_model.json");

  auto* predict = subs["predict"];
  predict->add_option("--split", opt.split, "Manifest split (default: all)");
  predict->add_option("--cluster-model", opt.cluster_model, "Default: OUT/cluster_model.json");
  predict->add_option("--priors", opt.priors, "Default: OUT/priors.json");
  predict->add_option("--pred-dir", opt.pred_dir, "Default: OUT/predictions");

  auto* sim = subs["simulate"];
  sim->add_option("--policy", opt.policy, "wta, irl or uniform")
      ->check(CLI::IsMember({"wta", "irl", "uniform"}));
  sim->add_option("--T", opt.T, "Fixations per scanpath");
  sim->add_option("--num-scanpaths", opt.num_scanpaths, "Scanpaths per image");
  sim->add_option("--split", opt.split, "Manifest split (default: all)");
  sim->add_option("--pred-dir", opt.pred_dir, "predict output (default: OUT/predictions)");
  sim->add_option("--belief-source", opt.belief_source, "predictions or manifest")
      ->check(CLI::IsMember({"predictions", "manifest"}));
  sim->add_option("--checkpoint", opt.checkpoint, "irl checkpoint (default: OUT/checkpoint.json)");

  auto* irl = subs["train-irl"];
  irl->add_option("--split", opt.split, "Training split (default: train)");
  irl->add_option("--pred-dir", opt.pred_dir, "predict output (default: OUT/predictions)");
  irl->add_option("--belief-source", opt.belief_source, "predictions or manifest")
      ->check(CLI::IsMember({"predictions", "manifest"}));
  irl->add_option("--resume", opt.resume, "Checkpoint to continue from");

  auto* eval = subs["evaluate"];
  eval->add_option("--pred-dir", opt.pred_dir, "Directory of predicted maps <id>.png");
  eval->add_option("--scanpaths", opt.scanpaths, "Predicted scanpaths CSV");
  eval->add_option("--split", opt.split, "Manifest split (default: all)");

  subs["io-score"]->add_option("--split", opt.split, "Manifest split (default: all)");

  auto* analyze = subs["analyze"];
  analyze->add_option("--split", opt.split, "Manifest split (default: all)");
  analyze->add_flag("--ablation", opt.ablation, "Also score component ablations");
  analyze->add_option("--cluster-model", opt.cluster_model, "Default: OUT/cluster_model.json");
  analyze->add_option("--priors", opt.priors, "Default: OUT/priors.json");

  auto* render = subs["render"];
  render->add_option("--pred-dir", opt.pred_dir, "Maps to overlay as heatmaps");
  render->add_option("--map-dir", opt.map_dir, "Alternative map directory");
  render->add_option("--scanpaths", opt.scanpaths, "Scanpaths CSV to draw");
  render->add_option("--image-id", opt.image_id, "Render one image only");
  render->add_option("--split", opt.split, "Manifest split (default: all)");
  std::string colormap;
  double alpha = -1.0;
  int marker_radius = 0;
  bool no_numbers = false;
  render->add_option("--colormap", colormap, "jet, inferno, viridis, hot or turbo");
  render->add_option("--alpha", alpha, "Overlay opacity in [0, 1]");
  render->add_option("--marker-radius", marker_radius, "Marker radius in pixels");
  render->add_flag("--no-numbers", no_numbers, "Omit fixation numbers");

  auto* synth = subs["synth-corpus"];
  synth->add_option("--documents", opt.documents, "Number of documents")->check(CLI::PositiveNumber);
  synth->add_option("--subjects", opt.subjects, "Scanpaths per document")->check(CLI::PositiveNumber);
  synth->add_option("--width", opt.width, "Page width in pixels");
  synth->add_option("--height", opt.height, "Page height in pixels");
  synth->add_option("--fixations", opt.fixations, "Fixations per scanpath");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return kExitOk;
    }
    err << "error: " << e.what() << "\n\n" << app.help();
    return kExitValidation;
  }
  opt.has_seed = seed_opt->count() > 0;

  try {
    Context ctx{opt, {}, out, err};
    if (!opt.config.empty()) ctx.cfg = load_config(opt.config);
    if (!colormap.empty()) ctx.cfg.render.colormap = colormap;
    if (alpha >= 0.0) ctx.cfg.render.alpha = alpha;
    if (marker_radius > 0) ctx.cfg.render.marker_radius = marker_radius;
    if (no_numbers) ctx.cfg.render.numbering = false;
    for (const Subcommand& s : kSubcommands) {
      if (subs[s.name]->parsed()) s.run(ctx);
    }
    return kExitOk;
  } catch (const IoError& e) {
    err << "I/O error: " << e.what() << "\n";
    return kExitIo;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "I/O error: " << e.what() << "\n";
    return kExitIo;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitValidation;
  }
}

}  // namespace gazedoc::cli
