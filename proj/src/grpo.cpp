#include "docreward/grpo.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "docreward/errors.hpp"
#include "docreward/text_reward.hpp"
#include "docreward/utf8.hpp"

namespace docreward::grpo {

AdvantageSet group_advantages(const std::vector<double>& rewards, double sigma_guard) {
  if (rewards.size() < 2) throw ContractError("group_advantages: need at least 2 rewards");
  const double n = static_cast<double>(rewards.size());
  AdvantageSet out;
  for (double r : rewards) out.mu += r;
  out.mu /= n;
  double var = 0.0;
  for (double r : rewards) var += (r - out.mu) * (r - out.mu);
  out.sigma = std::sqrt(var / n);

  out.advantages.assign(rewards.size(), 0.0);
  if (!(out.sigma >= sigma_guard)) {
    out.degenerate = true;
    return out;
  }
  for (std::size_t i = 0; i < rewards.size(); ++i)
    out.advantages[i] = (rewards[i] - out.mu) / out.sigma;
  return out;
}

namespace {

void check_logps(const RolloutGroup& group, const AdvantageSet& adv) {
  if (!group.old_logp || !group.new_logp)
    throw ContractError("objective for '" + group.input_id + "' needs old and new log-probabilities");
  const std::size_t g = adv.advantages.size();
  if (g == 0 || group.old_logp->size() != g || group.new_logp->size() != g)
    throw ContractError("objective for '" + group.input_id + "': size mismatch");
}

}  // namespace

double clipped_objective(const RolloutGroup& group, const AdvantageSet& adv, double epsilon) {
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw ContractError("epsilon must lie in (0, 1)");
  check_logps(group, adv);
  double sum = 0.0;
  for (std::size_t i = 0; i < adv.advantages.size(); ++i) {
    const double rho = std::exp((*group.new_logp)[i] - (*group.old_logp)[i]);
    const double a = adv.advantages[i];
    sum += std::min(rho * a, std::clamp(rho, 1.0 - epsilon, 1.0 + epsilon) * a);
  }
  return sum / static_cast<double>(adv.advantages.size());
}

double unclipped_objective(const RolloutGroup& group, const AdvantageSet& adv) {
  check_logps(group, adv);
  double sum = 0.0;
  for (std::size_t i = 0; i < adv.advantages.size(); ++i)
    sum += std::exp((*group.new_logp)[i] - (*group.old_logp)[i]) * adv.advantages[i];
  return sum / static_cast<double>(adv.advantages.size());
}

double normalized_reward_entropy(const std::vector<double>& rewards, int bins) {
  if (bins <= 0) throw ContractError("reward bins must be positive");
  if (rewards.empty() || bins == 1) return 0.0;
  std::vector<std::size_t> counts(static_cast<std::size_t>(bins), 0);
  for (double r : rewards) {
    const double pos = std::floor(std::clamp(r, 0.0, 1.0) * bins);
    ++counts[static_cast<std::size_t>(std::clamp(pos, 0.0, static_cast<double>(bins - 1)))];
  }
  const double n = static_cast<double>(rewards.size());
  double h = 0.0;
  for (std::size_t c : counts) {
    if (c == 0) continue;
    const double p = static_cast<double>(c) / n;
    h -= p * std::log(p);
  }
  return std::clamp(h / std::log(static_cast<double>(bins)), 0.0, 1.0);
}

std::vector<FilteredGroup> entropy_filter_scored(const std::vector<RolloutGroup>& groups,
                                                 int bins, double threshold) {
  constexpr double kTolerance = 1e-12;
  if (bins <= 0) throw ContractError("reward bins must be positive");
  std::vector<FilteredGroup> kept;
  for (const RolloutGroup& g : groups) {
    if (g.rewards.size() < 2)
      throw ContractError("group '" + g.input_id + "' has fewer than 2 rewards");
    const double h = normalized_reward_entropy(g.rewards, bins);
    if (h >= threshold || (h > 0.0 && h >= threshold - kTolerance)) kept.push_back({g.input_id, h});
  }
  std::sort(kept.begin(), kept.end(), [](const FilteredGroup& a, const FilteredGroup& b) {
    if (a.entropy != b.entropy) return a.entropy > b.entropy;
    return a.input_id < b.input_id;
  });
  return kept;
}

std::vector<std::string> entropy_filter(const std::vector<RolloutGroup>& groups, int bins,
                                        double threshold) {
  std::vector<std::string> ids;
  for (auto& g : entropy_filter_scored(groups, bins, threshold)) ids.push_back(std::move(g.input_id));
  return ids;
}

namespace {

// Platform-independent uniform double in [0, 1).
double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

std::vector<double> softmax(const std::vector<double>& logits) {
  const double top = *std::max_element(logits.begin(), logits.end());
  std::vector<double> p(logits.size());
  double z = 0.0;
  for (std::size_t k = 0; k < logits.size(); ++k) z += p[k] = std::exp(logits[k] - top);
  for (double& x : p) x /= z;
  return p;
}

std::size_t sample(const std::vector<double>& probs, std::mt19937_64& rng) {
  const double u = uniform01(rng);
  double acc = 0.0;
  for (std::size_t k = 0; k < probs.size(); ++k) {
    acc += probs[k];
    if (u < acc) return k;
  }
  return probs.size() - 1;
}

using Logits = std::vector<std::vector<double>>;  // [position][symbol]

double log_prob(const Logits& logits, const std::vector<std::size_t>& seq) {
  double lp = 0.0;
  for (std::size_t p = 0; p < seq.size(); ++p) lp += std::log(softmax(logits[p])[seq[p]]);
  return lp;
}

}  // namespace

std::vector<TrajectoryPoint> simulate_toy_policy(const ToyPolicyOptions& o) {
  const std::u32string target = utf8::decode(o.target);
  if (target.empty()) throw ContractError("simulate_toy_policy: target must be non-empty");
  if (o.group_size < 2) throw ContractError("simulate_toy_policy: group size must be >= 2");
  if (o.iterations < 0 || o.inner_steps < 1)
    throw ContractError("simulate_toy_policy: iterations >= 0 and inner_steps >= 1 required");
  if (!(o.epsilon > 0.0 && o.epsilon < 1.0))
    throw ContractError("simulate_toy_policy: epsilon must lie in (0, 1)");

  std::u32string alphabet;
  for (char32_t c = U'a'; c <= U'z'; ++c) alphabet.push_back(c);
  for (char32_t c : target)
    if (alphabet.find(c) == std::u32string::npos) alphabet.push_back(c);

  const std::size_t len = target.size();
  const std::size_t g = static_cast<std::size_t>(o.group_size);
  Logits logits(len, std::vector<double>(alphabet.size(), 0.0));
  std::mt19937_64 rng(o.seed);

  std::vector<TrajectoryPoint> trajectory;
  trajectory.reserve(static_cast<std::size_t>(o.iterations));
  for (int it = 0; it < o.iterations; ++it) {
    std::vector<std::vector<std::size_t>> samples(g, std::vector<std::size_t>(len));
    std::vector<double> rewards(g);
    std::vector<double> old_logp(g);
    for (std::size_t i = 0; i < g; ++i) {
      std::u32string text(len, U' ');
      for (std::size_t p = 0; p < len; ++p) {
        samples[i][p] = sample(softmax(logits[p]), rng);
        text[p] = alphabet[samples[i][p]];
      }
      rewards[i] = text_edit_reward(utf8::encode(text), o.target);
      old_logp[i] = log_prob(logits, samples[i]);
    }

    TrajectoryPoint point{it + 1, 0.0, 0.0};
    for (double r : rewards) point.mean_reward += r;
    point.mean_reward /= static_cast<double>(g);
    point.max_reward = *std::max_element(rewards.begin(), rewards.end());
    trajectory.push_back(point);

    const AdvantageSet adv = group_advantages(rewards, o.sigma_guard);
    if (adv.degenerate || o.step_size == 0.0) continue;

    for (int step = 0; step < o.inner_steps; ++step) {
      Logits grad(len, std::vector<double>(alphabet.size(), 0.0));
      std::vector<std::vector<double>> probs(len);
      for (std::size_t p = 0; p < len; ++p) probs[p] = softmax(logits[p]);
      for (std::size_t i = 0; i < g; ++i) {
        const double a = adv.advantages[i];
        double lp = 0.0;
        for (std::size_t p = 0; p < len; ++p) lp += std::log(probs[p][samples[i][p]]);
        const double rho = std::exp(lp - old_logp[i]);
        // The min() selects the constant clipped branch here: zero gradient.
        if ((a > 0 && rho > 1.0 + o.epsilon) || (a < 0 && rho < 1.0 - o.epsilon)) continue;
        const double w = a * rho / static_cast<double>(g);
        for (std::size_t p = 0; p < len; ++p)
          for (std::size_t k = 0; k < alphabet.size(); ++k)
            grad[p][k] += w * ((k == samples[i][p] ? 1.0 : 0.0) - probs[p][k]);
      }
      for (std::size_t p = 0; p < len; ++p)
        for (std::size_t k = 0; k < alphabet.size(); ++k) logits[p][k] += o.step_size * grad[p][k];
    }
  }
  return trajectory;
}

std::string trajectory_csv(const std::vector<TrajectoryPoint>& trajectory) {
  std::ostringstream out;
  out.precision(17);
  out << "iteration,mean_reward,max_reward\n";
  for (const auto& p : trajectory)
    out << p.iteration << ',' << p.mean_reward << ',' << p.max_reward << '\n';
  return out.str();
}

}  // namespace docreward::grpo
