#pragma once

#include <chrono>
#include <filesystem>
#include <map>
#include <optional>
#include <string>

#include "docreward/embedding.hpp"
#include "docreward/grpo.hpp"
#include "docreward/render.hpp"
#include "docreward/vision_reward.hpp"

namespace docreward {

enum class BackendKind { stub, remote };

struct BackendConfig {
  BackendKind kind = BackendKind::stub;
  RemoteBackendOptions remote;
};

struct RenderConfig {
  bool enabled = true;
  std::filesystem::path workdir;  // empty: system temp directory
  int max_concurrent = 2;
  std::map<CodeFormat, RendererSpec> renderers;
};

struct GrpoConfig {
  int group_size = 8;
  double epsilon = 0.2;
  double sigma_guard = grpo::kDefaultSigmaGuard;
  int entropy_bins = 10;
  double entropy_threshold = 0.3;
  std::string sim_target = "ab";
  double sim_step_size = grpo::ToyPolicyOptions{}.step_size;
  int sim_iterations = 300;
  int sim_inner_steps = grpo::ToyPolicyOptions{}.inner_steps;
  std::uint64_t sim_seed = 7;
};

struct RunConfig {
  std::filesystem::path dataset_path;
  std::filesystem::path output_path;
  std::filesystem::path table_output_path;  // optional human-readable report
  int workers = 1;
  bool vision_enabled = true;
  VisionRewardConfig vision;
  BackendConfig backend;
  RenderConfig render;
  GrpoConfig grpo;
};

// Values read from the environment that override the config file.
struct EnvOverrides {
  std::optional<std::string> endpoint;  // DOCREWARD_ENDPOINT, selects the remote backend
  std::optional<int> workers;           // DOCREWARD_WORKERS

  static EnvOverrides from_environment();
};

// Parses a JSON config. Relative paths resolve against `base_dir`. Unknown
// keys are rejected. Throws ConfigError.
RunConfig parse_config(std::string_view json_text, const std::filesystem::path& base_dir);
RunConfig load_config(const std::filesystem::path& path);

void apply_env(RunConfig& cfg, const EnvOverrides& env);

// Range and weight checks shared by every subcommand. Throws ConfigError.
void validate_config(const RunConfig& cfg);

// Extra checks for `score`: the dataset exists and the output directory is
// writable. Throws ConfigError.
void validate_score_paths(const RunConfig& cfg);

// Effective configuration as JSON (used by validate-config).
std::string config_to_json(const RunConfig& cfg);

}  // namespace docreward
