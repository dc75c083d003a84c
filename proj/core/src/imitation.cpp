#include "gazedoc/imitation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "gazedoc/error.hpp"
#include "gazedoc/rng.hpp"

namespace gazedoc {
namespace {

constexpr double kAdamBeta1 = 0.9;
constexpr double kAdamBeta2 = 0.999;
constexpr double kAdamEps = 1e-8;

double softplus(double z) {
  return z > 0.0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z));
}

double sigmoid(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

void check_finite(const Params& p, const char* what) {
  for (double v : p) {
    if (!std::isfinite(v)) {
      throw NumericError(std::string("non-finite value in ") + what);
    }
  }
}

// Softmax over candidate scores; returns log-probabilities.
std::vector<double> log_softmax(const LinearModel& policy,
                                const std::vector<Features>& candidates) {
  std::vector<double> s(candidates.size());
  double peak = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    s[i] = policy.score(candidates[i]);
    peak = std::max(peak, s[i]);
  }
  double z = 0.0;
  for (double v : s) z += std::exp(v - peak);
  const double log_z = peak + std::log(z);
  for (double& v : s) v -= log_z;
  return s;
}

void accumulate(Params& grad, const Features& f, double scale, bool with_bias) {
  for (int i = 0; i < kFeatureDim; ++i) grad[i] += scale * f[i];
  if (with_bias) grad[kFeatureDim] += scale;
}

struct Candidates {
  std::vector<Features> features;
  std::vector<int> cells;
};

Candidates allowed_candidates(const BeliefState& belief) {
  if (belief.inhibited.all()) throw ValidationError("every cell is inhibited");
  const FeatureGrid grid(belief);
  Candidates c;
  for (int cell = 0; cell < kNumCells; ++cell) {
    if (belief.inhibited.test(cell)) continue;
    c.features.push_back(grid.at(cell));
    c.cells.push_back(cell);
  }
  return c;
}

}  // namespace

FeatureGrid::FeatureGrid(const BeliefState& belief)
    : value_(belief.channels), inhibited_(belief.inhibited) {
  for (int r = 0; r < kGridRows; ++r) {
    for (int c = 0; c < kGridCols; ++c) {
      const int cell = cell_id(r, c);
      std::array<double, kNumChannels> sums{};
      int n = 0;
      int visited = 0;
      for (int dr = -1; dr <= 1; ++dr) {
        for (int dc = -1; dc <= 1; ++dc) {
          const int rr = r + dr;
          const int cc = c + dc;
          if (rr < 0 || rr >= kGridRows || cc < 0 || cc >= kGridCols) continue;
          const int nb = cell_id(rr, cc);
          for (int ch = 0; ch < kNumChannels; ++ch) sums[ch] += value_[ch][nb];
          ++n;
          visited += belief.visited.test(nb) ? 1 : 0;
        }
      }
      for (int ch = 0; ch < kNumChannels; ++ch) local_mean_[ch][cell] = sums[ch] / n;
      visited_fraction_[cell] = static_cast<double>(visited) / n;
    }
  }
}

Features FeatureGrid::at(int cell) const {
  Features f{};
  for (int ch = 0; ch < kNumChannels; ++ch) {
    f[ch] = value_[ch][cell];
    f[kNumChannels + ch] = local_mean_[ch][cell];
  }
  f[12] = static_cast<double>(cell_row(cell)) / (kGridRows - 1);
  f[13] = static_cast<double>(cell_col(cell)) / (kGridCols - 1);
  f[14] = visited_fraction_[cell];
  return f;
}

Features FeatureGrid::state_summary() const {
  Features mean{};
  int n = 0;
  for (int cell = 0; cell < kNumCells; ++cell) {
    if (inhibited_.test(cell)) continue;
    const Features f = at(cell);
    for (int i = 0; i < kFeatureDim; ++i) mean[i] += f[i];
    ++n;
  }
  if (n > 0) {
    for (double& v : mean) v /= n;
  }
  return mean;
}

Features state_action_features(const BeliefState& belief, int cell) {
  if (cell < 0 || cell >= kNumCells) throw ValidationError("cell id out of range");
  return FeatureGrid(belief).at(cell);
}

Features state_features(const BeliefState& belief) {
  return FeatureGrid(belief).state_summary();
}

double LinearModel::score(const Features& f) const {
  double s = params[kFeatureDim];
  for (int i = 0; i < kFeatureDim; ++i) s += params[i] * f[i];
  return s;
}

void adam_step(LinearModel& model, AdamState& state, const Params& grad, double lr) {
  check_finite(grad, "gradient");
  ++state.step;
  const double c1 = 1.0 - std::pow(kAdamBeta1, static_cast<double>(state.step));
  const double c2 = 1.0 - std::pow(kAdamBeta2, static_cast<double>(state.step));
  for (int i = 0; i < kParamDim; ++i) {
    state.m[i] = kAdamBeta1 * state.m[i] + (1.0 - kAdamBeta1) * grad[i];
    state.v[i] = kAdamBeta2 * state.v[i] + (1.0 - kAdamBeta2) * grad[i] * grad[i];
    const double m_hat = state.m[i] / c1;
    const double v_hat = state.v[i] / c2;
    model.params[i] -= lr * m_hat / (std::sqrt(v_hat) + kAdamEps);
  }
  check_finite(model.params, "model parameters");
}

ImitationModel make_model(const ImitationConfig& config) {
  ImitationModel m;
  m.config = config;
  return m;
}

GridChannel LinearSoftmaxPolicy::action_distribution(const BeliefState& belief) const {
  const Candidates c = allowed_candidates(belief);
  const std::vector<double> logp = log_softmax(model_, c.features);
  GridChannel out{};
  double total = 0.0;
  for (std::size_t i = 0; i < c.cells.size(); ++i) {
    out[c.cells[i]] = std::exp(logp[i]);
    total += out[c.cells[i]];
  }
  for (double& v : out) v /= total;
  return out;
}

GridChannel policy_distribution(const ImitationModel& model, const BeliefState& belief) {
  return LinearSoftmaxPolicy(model.policy).action_distribution(belief);
}

double discriminator_probability(const LinearModel& discriminator, const Features& f) {
  return std::clamp(sigmoid(discriminator.score(f)), kDiscriminatorClamp,
                    1.0 - kDiscriminatorClamp);
}

double gail_reward(const ImitationModel& model, const Features& f) {
  return -std::log(1.0 - discriminator_probability(model.discriminator, f));
}

LossGrad discriminator_loss(const LinearModel& discriminator,
                            std::span<const Features> real,
                            std::span<const Features> fake) {
  if (real.empty() || fake.empty()) {
    throw ValidationError("discriminator needs non-empty real and fake batches");
  }
  LossGrad out;
  const double wr = 0.5 / static_cast<double>(real.size());
  const double wf = 0.5 / static_cast<double>(fake.size());
  for (const Features& f : real) {
    const double z = discriminator.score(f);
    out.value += wr * softplus(-z);                   // -log sigmoid(z)
    accumulate(out.grad, f, -wr * sigmoid(-z), true);  // d/dz = -(1 - D)
  }
  for (const Features& f : fake) {
    const double z = discriminator.score(f);
    out.value += wf * softplus(z);                   // -log(1 - sigmoid(z))
    accumulate(out.grad, f, wf * sigmoid(z), true);  // d/dz = D
  }
  return out;
}

double discriminator_accuracy(const LinearModel& discriminator,
                              std::span<const Features> real,
                              std::span<const Features> fake) {
  std::size_t correct = 0;
  for (const Features& f : real) correct += discriminator.score(f) > 0.0 ? 1 : 0;
  for (const Features& f : fake) correct += discriminator.score(f) <= 0.0 ? 1 : 0;
  return static_cast<double>(correct) / static_cast<double>(real.size() + fake.size());
}

double discriminator_update(ImitationModel& model, std::span<const Features> real,
                            std::span<const Features> fake, double lr) {
  const LossGrad lg = discriminator_loss(model.discriminator, real, fake);
  adam_step(model.discriminator, model.disc_opt, lg.grad, lr);
  return lg.value;
}

std::size_t TrajectoryBuffer::num_steps() const {
  std::size_t n = 0;
  for (const auto& e : episodes) n += e.steps.size();
  return n;
}

LossGrad log_probability(const LinearModel& policy, const StepRecord& step) {
  const std::vector<double> logp = log_softmax(policy, step.candidates);
  LossGrad out;
  out.value = logp[step.chosen];
  // grad log pi(a) = phi_a - E_pi[phi]; the bias cancels in the softmax.
  accumulate(out.grad, step.candidates[step.chosen], 1.0, false);
  for (std::size_t i = 0; i < step.candidates.size(); ++i) {
    accumulate(out.grad, step.candidates[i], -std::exp(logp[i]), false);
  }
  return out;
}

LossGrad ppo_surrogate(const LinearModel& policy, std::span<const StepRecord* const> steps,
                       double clip_eps) {
  LossGrad out;
  if (steps.empty()) return out;
  const double w = 1.0 / static_cast<double>(steps.size());
  for (const StepRecord* s : steps) {
    const LossGrad lp = log_probability(policy, *s);
    const double ratio = std::exp(lp.value - s->log_prob);
    const double clipped = std::clamp(ratio, 1.0 - clip_eps, 1.0 + clip_eps);
    const double unclipped_obj = ratio * s->advantage;
    const double clipped_obj = clipped * s->advantage;
    if (unclipped_obj <= clipped_obj) {
      out.value += w * unclipped_obj;
      for (int i = 0; i < kParamDim; ++i) {
        out.grad[i] += w * s->advantage * ratio * lp.grad[i];
      }
    } else {
      // The clipped branch is constant in the parameters.
      out.value += w * clipped_obj;
    }
  }
  return out;
}

LossGrad critic_loss(const LinearModel& critic, std::span<const StepRecord* const> steps) {
  LossGrad out;
  if (steps.empty()) return out;
  const double w = 1.0 / static_cast<double>(steps.size());
  for (const StepRecord* s : steps) {
    const double err = critic.score(s->state) - s->ret;
    out.value += w * err * err;
    accumulate(out.grad, s->state, 2.0 * w * err, true);
  }
  return out;
}

void compute_advantages(TrajectoryBuffer& buffer, const LinearModel& critic,
                        double gamma, double lambda) {
  for (Episode& e : buffer.episodes) {
    for (StepRecord& s : e.steps) s.value = critic.score(s.state);
    double gae = 0.0;
    for (std::size_t i = e.steps.size(); i-- > 0;) {
      StepRecord& s = e.steps[i];
      const double next_value = i + 1 < e.steps.size() ? e.steps[i + 1].value : 0.0;
      const double delta = s.reward + gamma * next_value - s.value;
      gae = delta + gamma * lambda * gae;
      s.advantage = gae;
      s.ret = gae + s.value;
    }
  }
}

PpoDiagnostics ppo_update(ImitationModel& model, TrajectoryBuffer& buffer,
                          const PpoOptions& options) {
  if (buffer.num_steps() == 0) throw ValidationError("PPO update needs a non-empty buffer");
  std::vector<StepRecord*> steps;
  for (Episode& e : buffer.episodes) {
    for (StepRecord& s : e.steps) steps.push_back(&s);
  }
  Rng rng(options.seed);
  PpoDiagnostics diag;
  const std::size_t mb = options.minibatch_size > 0
                             ? static_cast<std::size_t>(options.minibatch_size)
                             : steps.size();
  double surrogate_sum = 0.0;
  double critic_sum = 0.0;
  std::size_t clipped = 0;
  std::size_t seen = 0;
  for (int epoch = 0; epoch < options.epochs; ++epoch) {
    if (options.recompute_advantages) {
      compute_advantages(buffer, model.critic, options.gamma, options.gae_lambda);
    }
    // Normalized advantages live in a side array so the stored ones stay raw.
    std::vector<double> raw(steps.size());
    for (std::size_t i = 0; i < steps.size(); ++i) raw[i] = steps[i]->advantage;
    if (options.normalize_advantages && steps.size() > 1) {
      const double mean = std::accumulate(raw.begin(), raw.end(), 0.0) / raw.size();
      double var = 0.0;
      for (double a : raw) var += (a - mean) * (a - mean);
      const double sd = std::sqrt(var / raw.size());
      if (sd > 1e-12) {
        for (std::size_t i = 0; i < steps.size(); ++i) {
          steps[i]->advantage = (raw[i] - mean) / sd;
        }
      }
    }
    std::vector<StepRecord*> order = steps;
    shuffle(order, rng);
    for (std::size_t start = 0; start < order.size(); start += mb) {
      const std::size_t end = std::min(order.size(), start + mb);
      const std::span<const StepRecord* const> batch(order.data() + start, end - start);
      const LossGrad surr = ppo_surrogate(model.policy, batch, options.clip_eps);
      const LossGrad crit = critic_loss(model.critic, batch);
      for (const StepRecord* s : batch) {
        const double ratio = std::exp(log_probability(model.policy, *s).value - s->log_prob);
        if (std::abs(ratio - 1.0) > options.clip_eps) ++clipped;
      }
      Params ascent{};
      for (int i = 0; i < kParamDim; ++i) ascent[i] = -surr.grad[i];
      check_finite(ascent, "policy gradient");
      check_finite(crit.grad, "critic gradient");
      adam_step(model.policy, model.policy_opt, ascent, options.lr);
      adam_step(model.critic, model.critic_opt, crit.grad, options.lr);
      surrogate_sum += surr.value * batch.size();
      critic_sum += crit.value * batch.size();
      seen += batch.size();
      ++diag.updates;
    }
    for (std::size_t i = 0; i < steps.size(); ++i) steps[i]->advantage = raw[i];
  }
  if (seen > 0) {
    diag.surrogate = surrogate_sum / seen;
    diag.critic_loss = critic_sum / seen;
    diag.clip_fraction = static_cast<double>(clipped) / seen;
  }
  return diag;
}

Episode generate_episode(const LinearModel& policy, const LinearModel& critic,
                         const BeliefInputs& inputs, int length, double fovea_radius,
                         double ior_radius, std::uint64_t seed) {
  if (length < 1 || length > kNumCells) {
    throw ValidationError("episode length must be in [1, 640]");
  }
  Rng rng(seed);
  Episode ep;
  BeliefState state = inputs.initial();
  for (int t = 0; t < length; ++t) {
    const Candidates c = allowed_candidates(state);
    const std::vector<double> logp = log_softmax(policy, c.features);
    const double u = uniform01(rng);
    double acc = 0.0;
    std::size_t pick = logp.size() - 1;
    for (std::size_t i = 0; i < logp.size(); ++i) {
      acc += std::exp(logp[i]);
      if (acc > u) {
        pick = i;
        break;
      }
    }
    StepRecord s;
    s.state = FeatureGrid(state).state_summary();
    s.value = critic.score(s.state);
    s.candidates = c.features;
    s.chosen = static_cast<int>(pick);
    s.action = c.cells[pick];
    s.log_prob = logp[pick];
    ep.steps.push_back(std::move(s));
    state = foveate_update(state, c.cells[pick], fovea_radius, inputs.high, ior_radius);
  }
  return ep;
}

std::vector<Features> expert_features(const BeliefInputs& inputs,
                                      std::span<const int> actions,
                                      double fovea_radius, double ior_radius) {
  std::vector<Features> out;
  BeliefState state = inputs.initial();
  for (int a : actions) {
    out.push_back(state_action_features(state, a));
    state = foveate_update(state, a, fovea_radius, inputs.high, ior_radius);
  }
  return out;
}

TrainResult train(std::span<const ImitationExample> dataset,
                  const ImitationConfig& config, const Validator& validate) {
  return train(dataset, make_model(config), validate);
}

TrainResult train(std::span<const ImitationExample> dataset, ImitationModel model,
                  const Validator& validate) {
  const ImitationConfig& cfg = model.config;
  if (cfg.batch_size < 1) throw ValidationError("batch size must be positive");
  struct ExpertRef {
    std::size_t example;
    std::size_t sequence;
  };
  std::vector<ExpertRef> pool;
  for (std::size_t e = 0; e < dataset.size(); ++e) {
    for (std::size_t s = 0; s < dataset[e].expert_actions.size(); ++s) {
      if (!dataset[e].expert_actions[s].empty()) pool.push_back({e, s});
    }
  }
  TrainResult result;
  if (cfg.epochs > 0 && pool.empty()) {
    throw ValidationError("training set has no expert action sequences");
  }
  Rng rng(derive_seed(cfg.seed, static_cast<std::uint64_t>(model.epoch)));
  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    shuffle(pool, rng);
    double disc_loss_sum = 0.0;
    int disc_loss_count = 0;
    double reward_sum = 0.0;
    std::size_t reward_count = 0;
    for (std::size_t start = 0; start < pool.size(); start += cfg.batch_size) {
      const std::size_t end = std::min(pool.size(), start + cfg.batch_size);
      std::vector<Features> real;
      TrajectoryBuffer buffer;
      for (std::size_t i = start; i < end; ++i) {
        const ImitationExample& ex = dataset[pool[i].example];
        const auto& actions = ex.expert_actions[pool[i].sequence];
        const std::size_t n = std::min(actions.size(),
                                       static_cast<std::size_t>(cfg.episode_length));
        const auto feats = expert_features(ex.inputs, std::span<const int>(actions.data(), n),
                                           cfg.fovea_radius, cfg.ior_radius);
        real.insert(real.end(), feats.begin(), feats.end());
        buffer.episodes.push_back(generate_episode(model.policy, model.critic, ex.inputs,
                                                   cfg.episode_length, cfg.fovea_radius,
                                                   cfg.ior_radius, rng()));
      }
      std::vector<Features> fake;
      for (const Episode& e : buffer.episodes) {
        for (const StepRecord& s : e.steps) fake.push_back(s.chosen_features());
      }
      for (int k = 0; k < std::max(1, cfg.disc_steps); ++k) {
        disc_loss_sum += discriminator_update(model, real, fake, cfg.disc_learning_rate);
        ++disc_loss_count;
      }
      for (Episode& e : buffer.episodes) {
        for (StepRecord& s : e.steps) {
          s.reward = gail_reward(model, s.chosen_features());
          reward_sum += s.reward;
          ++reward_count;
        }
      }
      PpoOptions ppo;
      ppo.clip_eps = cfg.clip_eps;
      ppo.epochs = cfg.ppo_epochs;
      ppo.lr = cfg.learning_rate;
      ppo.minibatch_size = cfg.minibatch_size;
      ppo.gamma = cfg.gamma;
      ppo.gae_lambda = cfg.gae_lambda;
      ppo.normalize_advantages = cfg.normalize_advantages;
      ppo.seed = rng();
      ppo_update(model, buffer, ppo);
    }
    ++model.epoch;
    EpochLog log;
    log.epoch = model.epoch;
    log.disc_loss = disc_loss_count > 0 ? disc_loss_sum / disc_loss_count : 0.0;
    log.mean_reward = reward_count > 0 ? reward_sum / reward_count : 0.0;
    if (validate) log.validation_score = validate(model);
    result.log.push_back(log);
  }
  result.model = std::move(model);
  return result;
}

}  // namespace gazedoc
