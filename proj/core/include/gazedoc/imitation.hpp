#ifndef GAZEDOC_IMITATION_HPP_
#define GAZEDOC_IMITATION_HPP_

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "gazedoc/belief.hpp"

namespace gazedoc {

// State-action features: 6 channel values at the cell, 6 channel means over
// the in-bounds 3x3 neighborhood, row / 19, col / 31, and the visited
// fraction of the 3x3 neighborhood.
inline constexpr int kFeatureDim = 15;
// Linear parameters: kFeatureDim weights followed by a bias.
inline constexpr int kParamDim = kFeatureDim + 1;

using Features = std::array<double, kFeatureDim>;
using Params = std::array<double, kParamDim>;

// Precomputes the neighborhood statistics of one belief state.
class FeatureGrid {
 public:
  explicit FeatureGrid(const BeliefState& belief);
  Features at(int cell) const;
  // Mean of the features of every non-inhibited cell; the critic's input.
  Features state_summary() const;

 private:
  std::array<GridChannel, kNumChannels> value_{};
  std::array<GridChannel, kNumChannels> local_mean_{};
  CellSet inhibited_;
  GridChannel visited_fraction_{};
};

Features state_action_features(const BeliefState& belief, int cell);
Features state_features(const BeliefState& belief);

struct LinearModel {
  Params params{};

  double score(const Features& f) const;
};

struct AdamState {
  Params m{};
  Params v{};
  long step = 0;
};

// One Adam descent step on `grad` (the gradient of a loss).
void adam_step(LinearModel& model, AdamState& state, const Params& grad, double lr);

struct ImitationConfig {
  int epochs = 15;
  int batch_size = 32;
  int episode_length = 7;
  double learning_rate = 1e-2;
  double disc_learning_rate = 1e-2;
  double clip_eps = 0.2;
  double gamma = 0.99;
  double gae_lambda = 0.95;
  int ppo_epochs = 4;
  int minibatch_size = 64;
  int disc_steps = 1;
  bool normalize_advantages = true;
  double fovea_radius = kDefaultFoveaRadius;
  double ior_radius = kDefaultIorRadius;
  std::uint64_t seed = 0;
};

struct ImitationModel {
  LinearModel policy;
  LinearModel critic;
  LinearModel discriminator;
  AdamState policy_opt;
  AdamState critic_opt;
  AdamState disc_opt;
  ImitationConfig config;
  int epoch = 0;
};

ImitationModel make_model(const ImitationConfig& config);

// Softmax over theta . phi(B, cell), zero on inhibited cells.
class LinearSoftmaxPolicy : public Policy {
 public:
  explicit LinearSoftmaxPolicy(LinearModel model) : model_(model) {}
  GridChannel action_distribution(const BeliefState& belief) const override;

 private:
  LinearModel model_;
};

// Throws ValidationError when every cell is inhibited.
GridChannel policy_distribution(const ImitationModel& model, const BeliefState& belief);

inline constexpr double kDiscriminatorClamp = 1e-6;

// sigmoid(w . phi + b), clamped to [1e-6, 1 - 1e-6].
double discriminator_probability(const LinearModel& discriminator, const Features& f);
// -log(1 - D(s, a)).
double gail_reward(const ImitationModel& model, const Features& f);

struct LossGrad {
  double value = 0.0;
  Params grad{};
};

// Class-balanced binary cross-entropy, real -> 1 and fake -> 0 (unclamped):
// the average of the mean real and mean fake terms, ln 2 at D = 0.5.
LossGrad discriminator_loss(const LinearModel& discriminator,
                            std::span<const Features> real,
                            std::span<const Features> fake);
// Fraction of samples on the correct side of 0.5.
double discriminator_accuracy(const LinearModel& discriminator,
                              std::span<const Features> real,
                              std::span<const Features> fake);

// One Adam step on the cross-entropy; returns the loss before the step.
double discriminator_update(ImitationModel& model, std::span<const Features> real,
                            std::span<const Features> fake, double lr);

struct StepRecord {
  // Features of every selectable cell, in increasing cell order.
  std::vector<Features> candidates;
  int chosen = 0;  // index into candidates
  int action = 0;  // cell id
  Features state{};
  double log_prob = 0.0;
  double value = 0.0;
  double reward = 0.0;
  double advantage = 0.0;
  double ret = 0.0;

  const Features& chosen_features() const { return candidates[chosen]; }
};

struct Episode {
  std::vector<StepRecord> steps;
};

struct TrajectoryBuffer {
  std::vector<Episode> episodes;

  std::size_t num_steps() const;
};

// log pi(chosen | state) and its parameter gradient.
LossGrad log_probability(const LinearModel& policy, const StepRecord& step);

// Mean clipped surrogate min(r A, clip(r, 1 - eps, 1 + eps) A) with
// r = exp(log pi - log pi_old), and its gradient (to be maximized).
LossGrad ppo_surrogate(const LinearModel& policy, std::span<const StepRecord* const> steps,
                       double clip_eps);

// Mean squared error of the critic against the stored returns.
LossGrad critic_loss(const LinearModel& critic, std::span<const StepRecord* const> steps);

// Refreshes value estimates with the critic and computes GAE advantages and
// returns. The value after the final step is taken as zero.
void compute_advantages(TrajectoryBuffer& buffer, const LinearModel& critic,
                        double gamma, double lambda);

struct PpoOptions {
  double clip_eps = 0.2;
  int epochs = 4;
  double lr = 1e-2;
  int minibatch_size = 64;
  double gamma = 0.99;
  double gae_lambda = 0.95;
  bool recompute_advantages = true;
  bool normalize_advantages = true;
  std::uint64_t seed = 0;
};

struct PpoDiagnostics {
  double surrogate = 0.0;
  double critic_loss = 0.0;
  double clip_fraction = 0.0;
  int updates = 0;
};

// Clipped-surrogate policy steps and squared-error critic steps over
// shuffled minibatches. Throws NumericError on a non-finite gradient.
PpoDiagnostics ppo_update(ImitationModel& model, TrajectoryBuffer& buffer,
                          const PpoOptions& options);

// Samples an episode from the linear policy, recording what PPO needs.
Episode generate_episode(const LinearModel& policy, const LinearModel& critic,
                         const BeliefInputs& inputs, int length, double fovea_radius,
                         double ior_radius, std::uint64_t seed);

// Replays an expert action sequence through the belief dynamics and returns
// the state-action features of each step.
std::vector<Features> expert_features(const BeliefInputs& inputs,
                                      std::span<const int> actions,
                                      double fovea_radius, double ior_radius);

struct ImitationExample {
  BeliefInputs inputs;
  // One action sequence per human scanpath.
  std::vector<std::vector<int>> expert_actions;
};

struct EpochLog {
  int epoch = 0;
  double disc_loss = 0.0;
  double mean_reward = 0.0;
  std::optional<double> validation_score;
};

struct TrainResult {
  ImitationModel model;
  std::vector<EpochLog> log;
};

using Validator = std::function<double(const ImitationModel&)>;

// Alternates generator rollouts, discriminator updates and PPO updates over
// batches of expert sequences. Bitwise reproducible for a fixed config.
TrainResult train(std::span<const ImitationExample> dataset,
                  const ImitationConfig& config, const Validator& validate = {});

// Continues training an existing model for config.epochs more epochs.
TrainResult train(std::span<const ImitationExample> dataset, ImitationModel model,
                  const Validator& validate = {});

}  // namespace gazedoc

#endif  // GAZEDOC_IMITATION_HPP_
