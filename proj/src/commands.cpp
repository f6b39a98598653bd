#include "docreward/commands.hpp"

#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <memory>
#include <nlohmann/json.hpp>
#include <unordered_set>

#include "docreward/errors.hpp"
#include "docreward/scoring.hpp"

namespace docreward {

ExitCode exit_code_for(const std::exception& e) {
  if (dynamic_cast<const ConfigError*>(&e)) return ExitCode::config;
  if (dynamic_cast<const TransportError*>(&e)) return ExitCode::transport;
  if (dynamic_cast<const DatasetError*>(&e) || dynamic_cast<const ParseError*>(&e) ||
      dynamic_cast<const ReportError*>(&e) || dynamic_cast<const ImageError*>(&e))
    return ExitCode::dataset;
  return ExitCode::internal;
}

namespace {

void write_atomically(const std::filesystem::path& path, const std::string& data) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    out << data;
    out.close();
    if (!out) throw ConfigError("cannot write '" + tmp.string() + "'");
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw ConfigError("cannot move report into '" + path.string() + "': " + ec.message());
}

std::unique_ptr<EmbeddingBackend> make_backend(const RunConfig& cfg) {
  if (cfg.backend.kind == BackendKind::stub) return std::make_unique<StubBackend>();
  auto remote = std::make_unique<RemoteBackend>(cfg.backend.remote);
  remote->probe();
  return remote;
}

std::string_view kind_name(ExitCode c) {
  switch (c) {
    case ExitCode::ok: return "ok";
    case ExitCode::config: return "config";
    case ExitCode::dataset: return "dataset";
    case ExitCode::transport: return "transport";
    case ExitCode::internal: return "internal";
  }
  return "internal";
}

int report_error(std::ostream& err, ExitCode code, const std::string& message) {
  nlohmann::ordered_json j;
  j["error"] = {{"kind", kind_name(code)}, {"exit_code", static_cast<int>(code)},
                {"message", message}};
  err << j.dump() << "\n";
  return static_cast<int>(code);
}

}  // namespace

BenchReport cmd_score(const RunConfig& cfg) {
  validate_config(cfg);
  validate_score_paths(cfg);

  const std::vector<EvalRecord> records = load_dataset(cfg.dataset_path);
  check_vision_requirements(records, cfg.vision_enabled);

  std::unique_ptr<EmbeddingBackend> backend;
  bool needs_vision = false;
  for (const auto& r : records) needs_vision |= is_vision_domain(r.domain);
  if (cfg.vision_enabled && needs_vision) backend = make_backend(cfg);

  std::unique_ptr<Renderer> renderer;
  if (cfg.render.enabled && !cfg.render.renderers.empty()) {
    auto workdir = cfg.render.workdir.empty() ? std::filesystem::temp_directory_path()
                                              : cfg.render.workdir;
    renderer = std::make_unique<Renderer>(cfg.render.renderers, workdir, cfg.render.max_concurrent);
  }

  ScoringContext ctx;
  ctx.vision = cfg.vision;
  ctx.vision_enabled = cfg.vision_enabled;
  ctx.backend = backend.get();
  ctx.renderer = renderer.get();
  ctx.image_root = cfg.dataset_path.parent_path();

  BenchReport report = aggregate_report(score_records(records, ctx, cfg.workers));
  write_atomically(cfg.output_path, report_to_json(report));
  if (!cfg.table_output_path.empty()) write_atomically(cfg.table_output_path, report_to_table(report));
  return report;
}

std::string cmd_grpo_sim(const RunConfig& cfg) {
  validate_config(cfg);
  grpo::ToyPolicyOptions o;
  o.target = cfg.grpo.sim_target;
  o.group_size = cfg.grpo.group_size;
  o.iterations = cfg.grpo.sim_iterations;
  o.step_size = cfg.grpo.sim_step_size;
  o.epsilon = cfg.grpo.epsilon;
  o.inner_steps = cfg.grpo.sim_inner_steps;
  o.seed = cfg.grpo.sim_seed;
  o.sigma_guard = cfg.grpo.sigma_guard;
  return grpo::trajectory_csv(grpo::simulate_toy_policy(o));
}

std::vector<grpo::RolloutGroup> load_rollouts(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DatasetError("cannot open rollouts '" + path.string() + "'");
  std::vector<grpo::RolloutGroup> groups;
  std::unordered_set<std::string> seen;
  std::string line;
  std::size_t n = 0;
  auto numbers = [&](const nlohmann::json& j, const char* key) {
    if (!j.is_array()) throw DatasetError("line " + std::to_string(n) + ": '" + key + "' must be an array");
    std::vector<double> v;
    for (const auto& x : j) {
      if (!x.is_number())
        throw DatasetError("line " + std::to_string(n) + ": '" + key + "' must hold numbers");
      v.push_back(x.get<double>());
    }
    return v;
  };
  while (std::getline(in, line)) {
    ++n;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
      throw ParseError(n, std::string("malformed JSON: ") + e.what());
    }
    if (!j.is_object() || !j.contains("id") || !j["id"].is_string())
      throw SchemaError(n, "id", "rollout group needs a string 'id'");
    grpo::RolloutGroup g;
    g.input_id = j["id"].get<std::string>();
    if (!seen.insert(g.input_id).second)
      throw DatasetError("line " + std::to_string(n) + ": duplicate group id '" + g.input_id + "'");
    if (!j.contains("rewards")) throw SchemaError(n, "rewards", "group '" + g.input_id + "' has no rewards");
    g.rewards = numbers(j["rewards"], "rewards");
    if (g.rewards.size() < 2)
      throw DatasetError("group '" + g.input_id + "' (line " + std::to_string(n) +
                         ") has fewer than 2 rewards");
    if (j.contains("old_logp")) g.old_logp = numbers(j["old_logp"], "old_logp");
    if (j.contains("new_logp")) g.new_logp = numbers(j["new_logp"], "new_logp");
    groups.push_back(std::move(g));
  }
  return groups;
}

std::string cmd_filter(const RunConfig& cfg, const std::filesystem::path& rollouts) {
  validate_config(cfg);
  std::string out;
  for (const auto& id : grpo::entropy_filter(load_rollouts(rollouts), cfg.grpo.entropy_bins,
                                             cfg.grpo.entropy_threshold))
    out += id + "\n";
  return out;
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Reward computation and benchmark scoring for OCR model outputs"};
  app.require_subcommand(1);

  std::string config_path;
  app.add_option("-c,--config", config_path, "JSON run configuration");

  // score
  auto* score = app.add_subcommand("score", "score a JSONL dataset and write a report");
  std::string dataset, output, table_output, endpoint, backend;
  int workers = 0;
  score->add_option("--dataset", dataset, "JSONL dataset (overrides config)");
  score->add_option("-o,--output", output, "report JSON path (overrides config)");
  score->add_option("--table", table_output, "also write a human-readable table here");
  score->add_option("-j,--workers", workers, "worker threads")->check(CLI::PositiveNumber);
  score->add_option("--endpoint", endpoint, "remote embedding endpoint (selects remote backend)");
  score->add_option("--backend", backend, "embedding backend")->check(CLI::IsMember({"stub", "remote"}));
  bool no_vision = false;
  score->add_flag("--no-vision", no_vision, "skip the visual reward");

  // grpo-sim
  auto* sim = app.add_subcommand("grpo-sim", "run the toy policy-optimization simulation");
  std::string sim_target, sim_output;
  int sim_group = 0, sim_iterations = -1;
  double sim_step = -1.0;
  long long sim_seed = -1;
  sim->add_option("--target", sim_target, "target string");
  sim->add_option("-G,--group-size", sim_group, "samples per group")->check(CLI::Range(2, 1 << 20));
  sim->add_option("--iterations", sim_iterations, "iterations")->check(CLI::NonNegativeNumber);
  sim->add_option("--step-size", sim_step, "gradient step size")->check(CLI::NonNegativeNumber);
  sim->add_option("--seed", sim_seed, "random seed")->check(CLI::NonNegativeNumber);
  sim->add_option("-o,--output", sim_output, "CSV output path (default stdout)");

  // filter
  auto* filter = app.add_subcommand("filter", "select challenging inputs by reward entropy");
  std::string rollouts, filter_output;
  int bins = 0;
  double threshold = -1.0;
  filter->add_option("--input", rollouts, "rollout groups JSONL")->required();
  filter->add_option("--bins", bins, "histogram bins")->check(CLI::PositiveNumber);
  filter->add_option("--threshold", threshold, "normalized entropy threshold")->check(CLI::Range(0.0, 1.0));
  filter->add_option("-o,--output", filter_output, "id list output path (default stdout)");

  auto* validate = app.add_subcommand("validate-config", "check a configuration and print it");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      app.exit(e, out, err);
      return 0;
    }
    return report_error(err, ExitCode::config, e.what());
  }

  try {
    RunConfig cfg = config_path.empty() ? RunConfig{} : load_config(config_path);
    apply_env(cfg, EnvOverrides::from_environment());

    if (*score) {
      if (!dataset.empty()) cfg.dataset_path = dataset;
      if (!output.empty()) cfg.output_path = output;
      if (!table_output.empty()) cfg.table_output_path = table_output;
      if (workers > 0) cfg.workers = workers;
      if (backend == "stub") cfg.backend.kind = BackendKind::stub;
      if (backend == "remote") cfg.backend.kind = BackendKind::remote;
      if (!endpoint.empty()) {
        cfg.backend.kind = BackendKind::remote;
        cfg.backend.remote.endpoint = endpoint;
      }
      if (no_vision) cfg.vision_enabled = false;
      const BenchReport report = cmd_score(cfg);
      out << report_to_table(report);
    } else if (*sim) {
      if (!sim_target.empty()) cfg.grpo.sim_target = sim_target;
      if (sim_group > 0) cfg.grpo.group_size = sim_group;
      if (sim_iterations >= 0) cfg.grpo.sim_iterations = sim_iterations;
      if (sim_step >= 0) cfg.grpo.sim_step_size = sim_step;
      if (sim_seed >= 0) cfg.grpo.sim_seed = static_cast<std::uint64_t>(sim_seed);
      const std::string csv = cmd_grpo_sim(cfg);
      if (sim_output.empty()) out << csv;
      else write_atomically(sim_output, csv);
    } else if (*filter) {
      if (bins > 0) cfg.grpo.entropy_bins = bins;
      if (threshold >= 0) cfg.grpo.entropy_threshold = threshold;
      const std::string ids = cmd_filter(cfg, rollouts);
      if (filter_output.empty()) out << ids;
      else write_atomically(filter_output, ids);
    } else if (*validate) {
      validate_config(cfg);
      out << config_to_json(cfg);
    }
  } catch (const std::exception& e) {
    return report_error(err, exit_code_for(e), e.what());
  }
  return 0;
}

}  // namespace docreward
