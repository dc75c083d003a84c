#ifndef GAZEDOC_TOOLS_COMMANDS_HPP_
#define GAZEDOC_TOOLS_COMMANDS_HPP_

#include <cstdint>
#include <filesystem>
#include <ostream>
#include <string>

#include "gazedoc_tools/config.hpp"

namespace gazedoc::cli {

struct Options {
  std::string manifest;
  std::string out_dir;
  std::string config;
  std::uint64_t seed = 0;
  bool has_seed = false;
  int jobs = 1;

  std::string split;
  int k = 0;
  std::string fdm_dir;
  std::string cluster_model;
  std::string priors;
  std::string pred_dir;
  std::string checkpoint;
  std::string resume;
  std::string scanpaths;
  std::string map_dir;
  std::string image_id;
  std::string policy = "wta";
  std::string belief_source = "predictions";
  int T = 7;
  int num_scanpaths = 1;
  bool ablation = false;

  int documents = 12;
  int subjects = 4;
  int width = 640;
  int height = 400;
  int fixations = 10;
};

struct Context {
  Options opt;
  AppConfig cfg;
  std::ostream& out;
  std::ostream& err;
};

void cmd_build_fdm(Context& ctx);
void cmd_dwell_map(Context& ctx);
void cmd_seg_stats(Context& ctx);
void cmd_cluster(Context& ctx);
void cmd_fit_priors(Context& ctx);
void cmd_predict(Context& ctx);
void cmd_simulate(Context& ctx);
void cmd_train_irl(Context& ctx);
void cmd_evaluate(Context& ctx);
void cmd_io_score(Context& ctx);
void cmd_analyze(Context& ctx);
void cmd_render(Context& ctx);
void cmd_synth_corpus(Context& ctx);

}  // namespace gazedoc::cli

#endif  // GAZEDOC_TOOLS_COMMANDS_HPP_
