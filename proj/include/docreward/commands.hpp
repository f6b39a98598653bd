#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "docreward/bench.hpp"
#include "docreward/config.hpp"
#include "docreward/grpo.hpp"

namespace docreward {

enum class ExitCode : int { ok = 0, config = 2, dataset = 3, transport = 4, internal = 5 };

// Maps an in-flight exception to its documented exit code.
ExitCode exit_code_for(const std::exception& e);

// Loads, scores and aggregates the configured dataset, then writes the JSON
// report (and the optional table) atomically. Returns the report.
BenchReport cmd_score(const RunConfig& cfg);

// CSV trajectory of the toy policy run described by cfg.grpo.
std::string cmd_grpo_sim(const RunConfig& cfg);

// Rollout groups, one JSON object per line:
// {"id": str, "rewards": [num, ...], "old_logp": [...], "new_logp": [...]}.
// Throws DatasetError naming the line or group on bad input.
std::vector<grpo::RolloutGroup> load_rollouts(const std::filesystem::path& path);

// Ids kept by the entropy filter, one per line.
std::string cmd_filter(const RunConfig& cfg, const std::filesystem::path& rollouts);

// Entry point behind the docreward executable.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace docreward
