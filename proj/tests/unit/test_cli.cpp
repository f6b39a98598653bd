#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <nlohmann/json.hpp>
#include <sstream>

#include "../oracles.hpp"
#include "docreward/commands.hpp"
#include "docreward/config.hpp"
#include "docreward/errors.hpp"
#include "docreward/image.hpp"
#include "docreward/scoring.hpp"

using namespace docreward;
namespace fs = std::filesystem;

namespace {

const fs::path kFixtures = DOCREWARD_FIXTURE_DIR;

fs::path scratch(const std::string& name) {
  auto dir = fs::temp_directory_path() / "docreward-cli-tests";
  fs::create_directories(dir);
  return dir / name;
}

fs::path write(const std::string& name, const std::string& content) {
  auto p = scratch(name);
  std::ofstream(p, std::ios::binary) << content;
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

struct Run {
  int code;
  std::string out, err;
};

Run cli(std::vector<std::string> args) {
  args.insert(args.begin(), "docreward");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

nlohmann::json error_of(const Run& r) {
  return nlohmann::json::parse(r.err)["error"];
}

const char* kText3 =
    R"({"id":"a","domain":"text_doc","prediction":"hello","ground_truth":"hello"})" "\n"
    R"({"id":"b","domain":"formula","prediction":"x+1","ground_truth":"x+2"})" "\n"
    R"({"id":"c","domain":"table","prediction":"<table><tr><td>1</td></tr></table>","ground_truth":"<table><tr><td>1</td></tr></table>"})" "\n";

}  // namespace

TEST_CASE("parse_config") {
  auto cfg = parse_config(R"({"dataset_path":"d.jsonl","output_path":"r.json","workers":3,
      "vision":{"omega_global":0.25,"omega_local":0.75,"backend":{"kind":"remote","endpoint":"http://h:1"}},
      "renderers":{"svg":{"command":"r {input} {output}","timeout_seconds":2}},
      "grpo":{"entropy_bins":5}})",
                          "/base");
  CHECK(cfg.dataset_path == "/base/d.jsonl");
  CHECK(cfg.workers == 3);
  CHECK(cfg.vision.omega_local == 0.75);
  CHECK(cfg.backend.kind == BackendKind::remote);
  CHECK(cfg.render.renderers.at(CodeFormat::svg).timeout == std::chrono::seconds(2));
  CHECK(cfg.grpo.entropy_bins == 5);

  CHECK_THROWS_AS(parse_config(R"({"unknown":1})", "."), ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"vision":{"grid":2}})", "."), ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"workers":"many"})", "."), ConfigError);
  CHECK_THROWS_AS(parse_config("{", "."), ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"renderers":{"pdf":{"command":"x"}}})", "."), ConfigError);
  cfg = parse_config(R"({"vision":{"omega_global":0.6,"omega_local":0.6}})", ".");
  CHECK_THROWS_AS(validate_config(cfg), ConfigError);
}

TEST_CASE("environment overrides the file, flags override the environment") {
  RunConfig cfg;
  EnvOverrides env;
  env.endpoint = "http://env:9";
  env.workers = 6;
  apply_env(cfg, env);
  CHECK(cfg.backend.kind == BackendKind::remote);
  CHECK(cfg.backend.remote.endpoint == "http://env:9");
  CHECK(cfg.workers == 6);

  const auto ds = write("env.jsonl", kText3);
  const auto out = scratch("env-report.json");
  ::setenv("DOCREWARD_WORKERS", "0", 1);
  auto r = cli({"score", "--dataset", ds.string(), "-o", out.string()});
  CHECK(r.code == 2);  // a malformed environment value is reported, not ignored
  ::unsetenv("DOCREWARD_WORKERS");

  // the environment selects an unreachable remote encoder; the flag wins
  const auto vision_ds = write("env-vision.jsonl",
      R"({"id":"v","domain":"svg","prediction":"<svg/>","ground_truth":"<svg/>","gt_image_path":")" +
      (kFixtures / "images" / "gt_101.png").string() + "\"}\n");
  ::setenv("DOCREWARD_ENDPOINT", "http://127.0.0.1:1", 1);
  r = cli({"score", "--dataset", vision_ds.string(), "-o", out.string()});
  CHECK(r.code == 4);
  r = cli({"score", "--dataset", vision_ds.string(), "-o", out.string(), "--backend", "stub"});
  CHECK(r.code == 0);
  ::unsetenv("DOCREWARD_ENDPOINT");
}

TEST_CASE("score a 3-record text fixture") {
  const auto ds = write("text3.jsonl", kText3);
  const auto out = scratch("text3-report.json");
  const auto table = scratch("text3-report.txt");
  auto r = cli({"score", "--dataset", ds.string(), "-o", out.string(), "--table", table.string()});
  REQUIRE(r.code == 0);
  const auto j = nlohmann::json::parse(slurp(out));
  CHECK(j["records"].size() == 3);
  CHECK(j["records"][0]["id"] == "a");
  CHECK(j["records"][0]["text"]["aggregate"] == 1.0);
  CHECK(j["corpus"]["overall"].is_number());
  CHECK(slurp(table).find("Overall") != std::string::npos);
  CHECK_FALSE(fs::exists(out.string() + ".tmp"));
}

TEST_CASE("score failure paths map to exit codes") {
  const auto out = scratch("fail-report.json");
  const auto bad = write("malformed.jsonl", std::string(kText3) + "{broken\n");
  auto r = cli({"score", "--dataset", bad.string(), "-o", out.string()});
  CHECK(r.code == 3);
  auto e = error_of(r);
  CHECK(e["kind"] == "dataset");
  CHECK(e["exit_code"] == 3);
  CHECK(e["message"].get<std::string>().find("line 4") != std::string::npos);

  r = cli({"score", "--dataset", scratch("missing.jsonl").string(), "-o", out.string()});
  CHECK(r.code == 2);
  CHECK(error_of(r)["kind"] == "config");

  r = cli({"score", "--bogus-flag"});
  CHECK(r.code == 2);

  const auto cfg = write("bad-config.json", R"({"vision":{"omega_global":2}})");
  r = cli({"-c", cfg.string(), "validate-config"});
  CHECK(r.code == 2);

  const auto vision_ds = write("vision.jsonl",
      R"({"id":"v","domain":"svg","prediction":"<svg/>","ground_truth":"<svg/>","gt_image_path":")" +
      (kFixtures / "images" / "gt_101.png").string() + "\"}\n");
  r = cli({"score", "--dataset", vision_ds.string(), "-o", out.string(), "--endpoint",
           "http://127.0.0.1:1"});
  CHECK(r.code == 4);
  CHECK(error_of(r)["kind"] == "transport");

  const auto no_image = write("noimage.jsonl",
      R"({"id":"v","domain":"chart","prediction":"x","ground_truth":"y"})" "\n");
  r = cli({"score", "--dataset", no_image.string(), "-o", out.string()});
  CHECK(r.code == 3);
  r = cli({"score", "--dataset", no_image.string(), "-o", out.string(), "--no-vision"});
  CHECK(r.code == 0);
}

TEST_CASE("vision record under the stub backend matches the stub oracle") {
  // block colors read back from the fixture at block centers
  auto blocks_of = [](const fs::path& p) {
    const auto img = load_image(p);
    oracle::Blocks b(8, std::vector<std::array<int, 3>>(8));
    for (int y = 0; y < 8; ++y)
      for (int x = 0; x < 8; ++x) {
        const auto* px = img.at(28 * x + 14, 28 * y + 14);
        b[y][x] = {px[0], px[1], px[2]};
      }
    return b;
  };
  const auto gt = kFixtures / "images" / "gt_102.png";
  const auto pred = kFixtures / "images" / "gt_103.png";
  const double expected = oracle::block_vision_reward(blocks_of(pred), blocks_of(gt), 0.5, 0.5);

  const auto cfg = load_config(kFixtures / "score_config.json");
  const auto out = scratch("stub-report.json");
  auto r = cli({"-c", (kFixtures / "score_config.json").string(), "score", "-o", out.string()});
  REQUIRE(r.code == 0);
  const auto j = nlohmann::json::parse(slurp(out));
  bool found = false;
  for (const auto& rec : j["records"]) {
    if (rec["id"] != "v02") continue;
    found = true;
    CHECK(rec["vision"]["visual"].get<double>() == doctest::Approx(expected).epsilon(1e-9));
    CHECK(rec["vision"]["format_alignment"] == 0.0);
  }
  CHECK(found);
  CHECK(cfg.vision.grid_rows == 2);
}

TEST_CASE("grpo-sim") {
  auto a = cli({"grpo-sim", "--iterations", "20", "--seed", "4"});
  auto b = cli({"grpo-sim", "--iterations", "20", "--seed", "4"});
  REQUIRE(a.code == 0);
  CHECK(a.out == b.out);
  CHECK(std::count(a.out.begin(), a.out.end(), '\n') == 21);
  const auto out = scratch("traj.csv");
  CHECK(cli({"grpo-sim", "--iterations", "5", "-o", out.string()}).code == 0);
  CHECK(slurp(out).rfind("iteration,mean_reward,max_reward", 0) == 0);
  CHECK(cli({"grpo-sim", "--group-size", "1"}).code == 2);
  CHECK(cli({"grpo-sim", "--target", "xyz", "--iterations", "3"}).code == 0);
}

TEST_CASE("filter") {
  const auto groups = write("groups.jsonl",
      R"({"id":"alpha","rewards":[0,0,1,1]})" "\n"
      R"({"id":"beta","rewards":[0.05,0.15,0.25,0.35]})" "\n"
      R"({"id":"gamma","rewards":[0.5,0.5,0.5,0.9]})" "\n");
  auto r = cli({"filter", "--input", groups.string()});
  REQUIRE(r.code == 0);
  CHECK(r.out == "beta\nalpha\n");
  r = cli({"filter", "--input", groups.string(), "--threshold", "0.2"});
  CHECK(r.out == "beta\nalpha\ngamma\n");
  const auto out = scratch("ids.txt");
  CHECK(cli({"filter", "--input", groups.string(), "--threshold", "0.5", "-o", out.string()}).code == 0);
  CHECK(slurp(out) == "beta\n");

  const auto short_group = write("short.jsonl",
      R"({"id":"ok","rewards":[0,1]})" "\n" R"({"id":"lonely","rewards":[0.5]})" "\n");
  r = cli({"filter", "--input", short_group.string()});
  CHECK(r.code == 3);
  CHECK(error_of(r)["message"].get<std::string>().find("lonely") != std::string::npos);
  CHECK(cli({"filter", "--input", scratch("nope.jsonl").string()}).code == 3);
}

TEST_CASE("score_records is independent of the worker count") {
  const auto records = load_dataset(kFixtures / "corpus20.jsonl");
  auto cfg = load_config(kFixtures / "score_config.json");
  StubBackend stub;
  ScoringContext ctx;
  ctx.vision = cfg.vision;
  ctx.backend = &stub;
  ctx.image_root = kFixtures;
  const auto one = report_to_json(aggregate_report(score_records(records, ctx, 1)));
  const auto many = report_to_json(aggregate_report(score_records(records, ctx, 7)));
  CHECK(one == many);
}
