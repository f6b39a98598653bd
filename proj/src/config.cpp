#include "docreward/config.hpp"

#include <cstdlib>
#include <fstream>
#include <nlohmann/json.hpp>
#include <set>
#include <sstream>

#include "docreward/errors.hpp"

namespace docreward {

namespace {

using Json = nlohmann::json;

// Typed access to one JSON object; rejects keys outside `allowed`.
class Section {
 public:
  Section(const Json& j, std::string name, std::set<std::string> allowed)
      : j_(j), name_(std::move(name)) {
    if (!j_.is_object()) throw ConfigError(name_ + ": expected an object");
    for (const auto& [key, _] : j_.items())
      if (!allowed.count(key)) throw ConfigError(name_ + ": unknown key '" + key + "'");
  }

  bool has(const char* key) const { return j_.contains(key) && !j_.at(key).is_null(); }
  const Json& raw(const char* key) const { return j_.at(key); }

  template <typename T>
  void get(const char* key, T& out) const {
    if (!has(key)) return;
    try {
      out = j_.at(key).get<T>();
    } catch (const Json::exception&) {
      throw ConfigError(name_ + "." + key + ": wrong type");
    }
  }

  void get_path(const char* key, std::filesystem::path& out, const std::filesystem::path& base) const {
    std::string s;
    get(key, s);
    if (s.empty()) return;
    std::filesystem::path p(s);
    out = p.is_absolute() ? p : base / p;
  }

 private:
  const Json& j_;
  std::string name_;
};

std::chrono::milliseconds seconds_to_ms(double s, const std::string& what) {
  if (!(s > 0)) throw ConfigError(what + " must be positive");
  return std::chrono::milliseconds(static_cast<long long>(s * 1000.0));
}

}  // namespace

EnvOverrides EnvOverrides::from_environment() {
  EnvOverrides env;
  if (const char* e = std::getenv("DOCREWARD_ENDPOINT"); e && *e) env.endpoint = e;
  if (const char* w = std::getenv("DOCREWARD_WORKERS"); w && *w) {
    char* end = nullptr;
    const long v = std::strtol(w, &end, 10);
    if (*end != '\0' || v <= 0) throw ConfigError("DOCREWARD_WORKERS must be a positive integer");
    env.workers = static_cast<int>(v);
  }
  return env;
}

RunConfig parse_config(std::string_view text, const std::filesystem::path& base) {
  Json root;
  try {
    root = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }

  RunConfig cfg;
  Section top(root, "config",
              {"dataset_path", "output_path", "table_output_path", "workers", "vision", "render",
               "renderers", "grpo"});
  top.get_path("dataset_path", cfg.dataset_path, base);
  top.get_path("output_path", cfg.output_path, base);
  top.get_path("table_output_path", cfg.table_output_path, base);
  top.get("workers", cfg.workers);

  if (top.has("vision")) {
    Section v(top.raw("vision"), "vision",
              {"enabled", "omega_global", "omega_local", "grid_rows", "grid_cols",
               "thumbnail_size", "backend"});
    v.get("enabled", cfg.vision_enabled);
    v.get("omega_global", cfg.vision.omega_global);
    v.get("omega_local", cfg.vision.omega_local);
    v.get("grid_rows", cfg.vision.grid_rows);
    v.get("grid_cols", cfg.vision.grid_cols);
    v.get("thumbnail_size", cfg.vision.thumbnail_size);
    if (v.has("backend")) {
      Section b(v.raw("backend"), "vision.backend",
                {"kind", "endpoint", "embed_path", "health_path", "timeout_seconds", "retries",
                 "max_in_flight"});
      std::string kind = "stub";
      b.get("kind", kind);
      if (kind == "stub") cfg.backend.kind = BackendKind::stub;
      else if (kind == "remote") cfg.backend.kind = BackendKind::remote;
      else throw ConfigError("vision.backend.kind must be 'stub' or 'remote'");
      b.get("endpoint", cfg.backend.remote.endpoint);
      b.get("embed_path", cfg.backend.remote.embed_path);
      b.get("health_path", cfg.backend.remote.health_path);
      double timeout = 10.0;
      b.get("timeout_seconds", timeout);
      cfg.backend.remote.timeout = seconds_to_ms(timeout, "vision.backend.timeout_seconds");
      b.get("retries", cfg.backend.remote.retries);
      b.get("max_in_flight", cfg.backend.remote.max_in_flight);
    }
  }

  if (top.has("render")) {
    Section r(top.raw("render"), "render", {"enabled", "workdir", "max_concurrent"});
    r.get("enabled", cfg.render.enabled);
    r.get_path("workdir", cfg.render.workdir, base);
    r.get("max_concurrent", cfg.render.max_concurrent);
  }

  if (top.has("renderers")) {
    const Json& rs = top.raw("renderers");
    if (!rs.is_object()) throw ConfigError("renderers: expected an object");
    for (const auto& [name, spec_json] : rs.items()) {
      auto fmt = code_format_from_string(name);
      if (!fmt) throw ConfigError("renderers: unknown format '" + name + "'");
      Section s(spec_json, "renderers." + name, {"command", "timeout_seconds"});
      RendererSpec spec;
      s.get("command", spec.command);
      if (spec.command.empty()) throw ConfigError("renderers." + name + ".command is empty");
      double timeout = 30.0;
      s.get("timeout_seconds", timeout);
      spec.timeout = seconds_to_ms(timeout, "renderers." + name + ".timeout_seconds");
      cfg.render.renderers[*fmt] = spec;
    }
  }

  if (top.has("grpo")) {
    Section g(top.raw("grpo"), "grpo",
              {"group_size", "epsilon", "sigma_guard", "entropy_bins", "entropy_threshold",
               "sim_target", "sim_step_size", "sim_iterations", "sim_inner_steps", "sim_seed"});
    g.get("group_size", cfg.grpo.group_size);
    g.get("epsilon", cfg.grpo.epsilon);
    g.get("sigma_guard", cfg.grpo.sigma_guard);
    g.get("entropy_bins", cfg.grpo.entropy_bins);
    g.get("entropy_threshold", cfg.grpo.entropy_threshold);
    g.get("sim_target", cfg.grpo.sim_target);
    g.get("sim_step_size", cfg.grpo.sim_step_size);
    g.get("sim_iterations", cfg.grpo.sim_iterations);
    g.get("sim_inner_steps", cfg.grpo.sim_inner_steps);
    g.get("sim_seed", cfg.grpo.sim_seed);
  }
  return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read config '" + path.string() + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str(), path.parent_path().empty() ? "." : path.parent_path());
}

void apply_env(RunConfig& cfg, const EnvOverrides& env) {
  if (env.endpoint) {
    cfg.backend.kind = BackendKind::remote;
    cfg.backend.remote.endpoint = *env.endpoint;
  }
  if (env.workers) cfg.workers = *env.workers;
}

void validate_config(const RunConfig& cfg) {
  if (cfg.workers < 1) throw ConfigError("workers must be >= 1");
  cfg.vision.validate();
  if (cfg.backend.kind == BackendKind::remote) {
    if (cfg.backend.remote.endpoint.empty())
      throw ConfigError("remote backend selected but no endpoint configured");
    if (cfg.backend.remote.retries < 0) throw ConfigError("vision.backend.retries must be >= 0");
    if (cfg.backend.remote.max_in_flight < 1)
      throw ConfigError("vision.backend.max_in_flight must be >= 1");
  }
  if (cfg.render.max_concurrent < 1) throw ConfigError("render.max_concurrent must be >= 1");
  if (!cfg.render.workdir.empty() && !std::filesystem::is_directory(cfg.render.workdir))
    throw ConfigError("render.workdir '" + cfg.render.workdir.string() + "' is not a directory");

  const GrpoConfig& g = cfg.grpo;
  if (g.group_size < 2) throw ConfigError("grpo.group_size must be >= 2");
  if (!(g.epsilon > 0 && g.epsilon < 1)) throw ConfigError("grpo.epsilon must lie in (0, 1)");
  if (!(g.sigma_guard > 0)) throw ConfigError("grpo.sigma_guard must be positive");
  if (g.entropy_bins < 1) throw ConfigError("grpo.entropy_bins must be >= 1");
  if (!(g.entropy_threshold >= 0 && g.entropy_threshold <= 1))
    throw ConfigError("grpo.entropy_threshold must lie in [0, 1]");
  if (g.sim_target.empty()) throw ConfigError("grpo.sim_target must be non-empty");
  if (!(g.sim_step_size >= 0)) throw ConfigError("grpo.sim_step_size must be >= 0");
  if (g.sim_iterations < 0) throw ConfigError("grpo.sim_iterations must be >= 0");
  if (g.sim_inner_steps < 1) throw ConfigError("grpo.sim_inner_steps must be >= 1");
}

void validate_score_paths(const RunConfig& cfg) {
  if (cfg.dataset_path.empty()) throw ConfigError("dataset_path is not set");
  if (!std::filesystem::is_regular_file(cfg.dataset_path))
    throw ConfigError("dataset '" + cfg.dataset_path.string() + "' does not exist");
  if (cfg.output_path.empty()) throw ConfigError("output_path is not set");
  for (const auto& out : {cfg.output_path, cfg.table_output_path}) {
    if (out.empty()) continue;
    const auto dir = out.parent_path().empty() ? std::filesystem::path(".") : out.parent_path();
    if (!std::filesystem::is_directory(dir))
      throw ConfigError("output directory '" + dir.string() + "' does not exist");
  }
}

std::string config_to_json(const RunConfig& cfg) {
  nlohmann::ordered_json j;
  j["dataset_path"] = cfg.dataset_path.string();
  j["output_path"] = cfg.output_path.string();
  j["table_output_path"] = cfg.table_output_path.string();
  j["workers"] = cfg.workers;
  nlohmann::ordered_json backend;
  backend["kind"] = cfg.backend.kind == BackendKind::stub ? "stub" : "remote";
  if (cfg.backend.kind == BackendKind::remote) {
    backend["endpoint"] = cfg.backend.remote.endpoint;
    backend["embed_path"] = cfg.backend.remote.embed_path;
    backend["health_path"] = cfg.backend.remote.health_path;
    backend["timeout_seconds"] = static_cast<double>(cfg.backend.remote.timeout.count()) / 1000.0;
    backend["retries"] = cfg.backend.remote.retries;
    backend["max_in_flight"] = cfg.backend.remote.max_in_flight;
  }
  j["vision"] = {{"enabled", cfg.vision_enabled},
                 {"omega_global", cfg.vision.omega_global},
                 {"omega_local", cfg.vision.omega_local},
                 {"grid_rows", cfg.vision.grid_rows},
                 {"grid_cols", cfg.vision.grid_cols},
                 {"thumbnail_size", cfg.vision.thumbnail_size},
                 {"backend", backend}};
  j["render"] = {{"enabled", cfg.render.enabled},
                 {"workdir", cfg.render.workdir.string()},
                 {"max_concurrent", cfg.render.max_concurrent}};
  nlohmann::ordered_json renderers = nlohmann::ordered_json::object();
  for (const auto& [fmt, spec] : cfg.render.renderers)
    renderers[std::string(to_string(fmt))] = {
        {"command", spec.command},
        {"timeout_seconds", static_cast<double>(spec.timeout.count()) / 1000.0}};
  j["renderers"] = renderers;
  const GrpoConfig& g = cfg.grpo;
  j["grpo"] = {{"group_size", g.group_size},
               {"epsilon", g.epsilon},
               {"sigma_guard", g.sigma_guard},
               {"entropy_bins", g.entropy_bins},
               {"entropy_threshold", g.entropy_threshold},
               {"sim_target", g.sim_target},
               {"sim_step_size", g.sim_step_size},
               {"sim_iterations", g.sim_iterations},
               {"sim_inner_steps", g.sim_inner_steps},
               {"sim_seed", g.sim_seed}};
  return j.dump(2) + "\n";
}

}  // namespace docreward
