#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace docreward::grpo {

// G sampled responses for one input.
struct RolloutGroup {
  std::string input_id;
  std::vector<double> rewards;
  std::optional<std::vector<double>> old_logp;  // sequence log-probabilities
  std::optional<std::vector<double>> new_logp;
};

struct AdvantageSet {
  std::vector<double> advantages;
  double mu = 0.0;
  double sigma = 0.0;  // population standard deviation
  bool degenerate = false;
};

inline constexpr double kDefaultSigmaGuard = 1e-8;

// A_i = (R_i - mean) / population std. When the std is below `sigma_guard`
// every advantage is exactly 0 and the set is flagged degenerate.
// Throws ContractError for fewer than two rewards.
AdvantageSet group_advantages(const std::vector<double>& rewards,
                              double sigma_guard = kDefaultSigmaGuard);

// Clipped surrogate: mean over i of min(rho_i A_i, clip(rho_i, 1-eps, 1+eps) A_i)
// with rho_i = exp(new_logp_i - old_logp_i). Throws ContractError when the
// log-probabilities are missing or sizes disagree, or eps is outside (0, 1).
double clipped_objective(const RolloutGroup& group, const AdvantageSet& adv, double epsilon);

// Same average without the clip, i.e. mean of rho_i A_i.
double unclipped_objective(const RolloutGroup& group, const AdvantageSet& adv);

// Shannon entropy of the reward histogram over `bins` equal-width bins on
// [0, 1], divided by log(bins). Rewards outside [0, 1] land in the end bins.
// With a single bin the result is 0.
double normalized_reward_entropy(const std::vector<double>& rewards, int bins);

struct FilteredGroup {
  std::string input_id;
  double entropy = 0.0;
};

// Groups whose normalized reward entropy is at least `threshold`, sorted by
// entropy descending and then id ascending. Entropies within 1e-12 of the
// threshold count as meeting it. Throws ContractError for groups with fewer
// than two rewards or non-positive `bins`.
std::vector<FilteredGroup> entropy_filter_scored(const std::vector<RolloutGroup>& groups,
                                                 int bins, double threshold);

std::vector<std::string> entropy_filter(const std::vector<RolloutGroup>& groups, int bins,
                                        double threshold);

// Toy policy optimization on a string-matching task.
struct ToyPolicyOptions {
  std::string target = "ab";
  int group_size = 8;
  int iterations = 300;
  double step_size = 0.05;
  double epsilon = 0.2;
  int inner_steps = 4;  // optimization steps per sampled group
  std::uint64_t seed = 7;
  double sigma_guard = kDefaultSigmaGuard;
};

struct TrajectoryPoint {
  int iteration = 0;
  double mean_reward = 0.0;
  double max_reward = 0.0;
};

// A per-position categorical policy over a fixed alphabet (a-z plus any other
// characters of the target) emits strings as long as the target. Each
// iteration samples a group, scores each sample with text_edit_reward,
// standardizes the rewards within the group and takes `inner_steps`
// gradient-ascent steps on the clipped surrogate w.r.t. the logits.
// Deterministic for a given seed on every platform.
std::vector<TrajectoryPoint> simulate_toy_policy(const ToyPolicyOptions& options);

// CSV with header iteration,mean_reward,max_reward.
std::string trajectory_csv(const std::vector<TrajectoryPoint>& trajectory);

}  // namespace docreward::grpo
