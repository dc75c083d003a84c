#ifndef GAZEDOC_IO_SERIALIZE_HPP_
#define GAZEDOC_IO_SERIALIZE_HPP_

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "gazedoc/analysis.hpp"
#include "gazedoc/imitation.hpp"
#include "gazedoc/io/atomic_file.hpp"
#include "gazedoc/kmeans.hpp"
#include "gazedoc/priors.hpp"

namespace gazedoc::io {

// All JSON documents carry a "version" field. Doubles round-trip exactly.

std::string cluster_model_json(const ClusterModel& model);
ClusterModel parse_cluster_model(const std::string& text);
ClusterModel load_cluster_model(const std::filesystem::path& path);

// priors.json plus one density-map PNG (and sidecar) per cluster and
// component, referenced relative to the JSON file.
std::vector<StagedFile> priors_files(const ComponentPriors& priors,
                                     const std::filesystem::path& json_path);
ComponentPriors load_priors(const std::filesystem::path& json_path);

ImitationConfig parse_imitation_config(const std::string& json_text,
                                       ImitationConfig base = {});
std::string checkpoint_json(const ImitationModel& model);
ImitationModel parse_checkpoint(const std::string& text);
ImitationModel load_checkpoint(const std::filesystem::path& path);

// epoch,disc_loss,mean_reward,mean_seq_score_on_validation
std::string training_log_csv(std::span<const EpochLog> log);

std::string metric_report_json(const MetricReport& report);
// One row per image followed by an "aggregate" row; absent values are empty.
std::string metric_report_csv(const MetricReport& report);

std::string seg_stats_csv(std::span<const std::string> image_ids,
                          std::span<const SegStats> stats);

}  // namespace gazedoc::io

#endif  // GAZEDOC_IO_SERIALIZE_HPP_
