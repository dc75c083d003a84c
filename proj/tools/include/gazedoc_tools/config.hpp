#ifndef GAZEDOC_TOOLS_CONFIG_HPP_
#define GAZEDOC_TOOLS_CONFIG_HPP_

#include <filesystem>
#include <string>

#include "gazedoc/imitation.hpp"
#include "gazedoc/io/render.hpp"
#include "gazedoc/kmeans.hpp"
#include "gazedoc/priors.hpp"
#include "gazedoc/scanpath_metrics.hpp"

namespace gazedoc::cli {

// Settings read from the --config JSON file. Sections: fdm, belief,
// cluster, priors, metrics, imitation, render. Unknown keys are errors.
struct AppConfig {
  double fdm_sigma = 25.0;
  double low_res_sigma = kDefaultLowResSigma;
  KMeansOptions kmeans;
  int k_max = 8;
  FitObjective prior_objective = FitObjective::kLeastSquares;
  double cluster_bandwidth = kDefaultClusterBandwidth;
  int max_fixations = kEvaluatedFixations;
  AlignmentScoring scoring;
  double kl_epsilon = 2.2e-16;
  ImitationConfig imitation;
  io::RenderSpec render;
};

AppConfig parse_config(const std::string& json_text);
AppConfig load_config(const std::filesystem::path& path);

}  // namespace gazedoc::cli

#endif  // GAZEDOC_TOOLS_CONFIG_HPP_
