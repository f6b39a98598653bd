#pragma once

#include <chrono>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <semaphore>
#include <string>

#include "docreward/format_detect.hpp"
#include "docreward/image.hpp"

namespace docreward {

struct RendererSpec {
  // Shell command with {input} and {output} placeholders; both are replaced
  // by single-quoted absolute paths.
  std::string command;
  std::chrono::milliseconds timeout{30000};
};

enum class RenderStatus { success, nonzero_exit, timeout, bad_output };

std::string_view to_string(RenderStatus s);

struct RenderOutcome {
  RenderStatus status = RenderStatus::bad_output;
  int exit_code = 0;
  std::optional<RasterImage> image;
  std::string message;

  bool ok() const { return status == RenderStatus::success; }
};

// Writes `code` to a temporary file in `workdir`, runs the renderer through
// /bin/sh and decodes the image it wrote. Every returned outcome counts as
// an execution attempt. Configuration problems (empty template, missing
// placeholder, renderer program not found, shell exit status 127) throw
// ConfigError instead, since they say nothing about the code under test.
RenderOutcome render_via_command(std::string_view code, CodeFormat format,
                                 const RendererSpec& spec,
                                 const std::filesystem::path& workdir);

// Per-format renderer table with a cap on concurrent child processes.
class Renderer {
 public:
  Renderer(std::map<CodeFormat, RendererSpec> specs, std::filesystem::path workdir,
           int max_concurrent);

  bool has(CodeFormat f) const { return specs_.count(f) != 0; }

  // Throws ConfigError when no template is configured for `format`.
  RenderOutcome render(std::string_view code, CodeFormat format);

 private:
  std::map<CodeFormat, RendererSpec> specs_;
  std::filesystem::path workdir_;
  std::unique_ptr<std::counting_semaphore<>> slots_;
};

}  // namespace docreward
