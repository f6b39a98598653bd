#include "docreward/render.hpp"

#include <fcntl.h>
#include <signal.h>
#include <spawn.h>
#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <atomic>
#include <cerrno>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <sstream>
#include <thread>

#include "docreward/errors.hpp"

extern char** environ;

namespace docreward {

namespace {

std::string shell_quote(const std::string& s) {
  std::string out = "'";
  for (char c : s) {
    if (c == '\'') out += "'\\''";
    else out.push_back(c);
  }
  out.push_back('\'');
  return out;
}

std::string replace_all(std::string s, std::string_view from, const std::string& to) {
  for (std::size_t pos = s.find(from); pos != std::string::npos; pos = s.find(from, pos + to.size()))
    s.replace(pos, from.size(), to);
  return s;
}

bool program_exists(const std::string& program) {
  if (program.find('/') != std::string::npos) return ::access(program.c_str(), X_OK) == 0;
  const char* path = std::getenv("PATH");
  std::stringstream dirs(path ? path : "/usr/bin:/bin");
  std::string dir;
  while (std::getline(dirs, dir, ':')) {
    if (dir.empty()) dir = ".";
    if (::access((std::filesystem::path(dir) / program).c_str(), X_OK) == 0) return true;
  }
  return false;
}

std::string first_word(const std::string& command) {
  std::istringstream in(command);
  std::string word;
  in >> word;
  return word;
}

std::string_view extension(CodeFormat f) {
  switch (f) {
    case CodeFormat::python_plot: return ".py";
    case CodeFormat::html: return ".html";
    case CodeFormat::svg: return ".svg";
    case CodeFormat::latex_tikz: return ".tex";
    case CodeFormat::molecule_code: return ".py";
  }
  return ".txt";
}

std::string read_head(const std::filesystem::path& p, std::size_t limit) {
  std::ifstream in(p, std::ios::binary);
  std::string s(limit, '\0');
  in.read(s.data(), static_cast<std::streamsize>(limit));
  s.resize(static_cast<std::size_t>(in.gcount()));
  return s;
}

struct TempFiles {
  std::filesystem::path input, output, errlog;
  ~TempFiles() {
    std::error_code ec;
    for (const auto& p : {input, output, errlog}) std::filesystem::remove(p, ec);
  }
};

}  // namespace

std::string_view to_string(RenderStatus s) {
  switch (s) {
    case RenderStatus::success: return "success";
    case RenderStatus::nonzero_exit: return "nonzero_exit";
    case RenderStatus::timeout: return "timeout";
    case RenderStatus::bad_output: return "bad_output";
  }
  return "?";
}

RenderOutcome render_via_command(std::string_view code, CodeFormat format,
                                 const RendererSpec& spec,
                                 const std::filesystem::path& workdir) {
  const std::string fmt(to_string(format));
  if (spec.command.empty()) throw ConfigError("no renderer command configured for " + fmt);
  if (spec.command.find("{input}") == std::string::npos ||
      spec.command.find("{output}") == std::string::npos)
    throw ConfigError("renderer command for " + fmt + " needs {input} and {output} placeholders");
  const std::string program = first_word(spec.command);
  if (!program_exists(program))
    throw ConfigError("renderer program '" + program + "' for " + fmt + " not found");

  static std::atomic<unsigned long> counter{0};
  std::error_code ec;
  const auto dir = std::filesystem::absolute(workdir, ec);
  if (ec || !std::filesystem::is_directory(dir))
    throw ConfigError("render workdir '" + workdir.string() + "' is not a directory");
  const std::string stem = "render-" + std::to_string(::getpid()) + "-" + std::to_string(counter++);
  TempFiles files{dir / (stem + std::string(extension(format))), dir / (stem + ".png"),
                  dir / (stem + ".err")};
  {
    std::ofstream out(files.input, std::ios::binary);
    out.write(code.data(), static_cast<std::streamsize>(code.size()));
    if (!out) throw ConfigError("cannot write render input in '" + dir.string() + "'");
  }

  const std::string command =
      replace_all(replace_all(spec.command, "{input}", shell_quote(files.input.string())),
                  "{output}", shell_quote(files.output.string()));

  posix_spawn_file_actions_t actions;
  posix_spawnattr_t attr;
  posix_spawn_file_actions_init(&actions);
  posix_spawn_file_actions_addopen(&actions, STDIN_FILENO, "/dev/null", O_RDONLY, 0);
  posix_spawn_file_actions_addopen(&actions, STDOUT_FILENO, "/dev/null", O_WRONLY, 0);
  posix_spawn_file_actions_addopen(&actions, STDERR_FILENO, files.errlog.c_str(),
                                   O_WRONLY | O_CREAT | O_TRUNC, 0644);
  posix_spawnattr_init(&attr);
  posix_spawnattr_setflags(&attr, POSIX_SPAWN_SETPGROUP);
  posix_spawnattr_setpgroup(&attr, 0);

  const char* argv[] = {"sh", "-c", command.c_str(), nullptr};
  pid_t pid = 0;
  const int rc = posix_spawn(&pid, "/bin/sh", &actions, &attr, const_cast<char* const*>(argv), environ);
  posix_spawn_file_actions_destroy(&actions);
  posix_spawnattr_destroy(&attr);
  if (rc != 0) throw ConfigError("cannot spawn /bin/sh: " + std::string(std::strerror(rc)));

  RenderOutcome outcome;
  const auto deadline = std::chrono::steady_clock::now() + spec.timeout;
  int status = 0;
  while (true) {
    const pid_t done = ::waitpid(pid, &status, WNOHANG);
    if (done == pid) break;
    if (done < 0 && errno != EINTR) throw Error("waitpid failed");
    if (std::chrono::steady_clock::now() >= deadline) {
      ::kill(-pid, SIGKILL);
      ::waitpid(pid, &status, 0);
      outcome.status = RenderStatus::timeout;
      outcome.message = "renderer timed out after " + std::to_string(spec.timeout.count()) + " ms";
      return outcome;
    }
    std::this_thread::sleep_for(std::chrono::milliseconds(2));
  }

  if (WIFEXITED(status)) {
    outcome.exit_code = WEXITSTATUS(status);
  } else {
    outcome.exit_code = 128 + (WIFSIGNALED(status) ? WTERMSIG(status) : 0);
  }
  if (outcome.exit_code == 127)
    throw ConfigError("renderer for " + fmt + " could not run a command (exit 127): " +
                      read_head(files.errlog, 300));
  if (outcome.exit_code != 0) {
    outcome.status = RenderStatus::nonzero_exit;
    outcome.message = "renderer exited with status " + std::to_string(outcome.exit_code);
    if (std::string err = read_head(files.errlog, 300); !err.empty()) outcome.message += ": " + err;
    return outcome;
  }
  try {
    outcome.image = load_image(files.output);
    outcome.status = RenderStatus::success;
  } catch (const ImageError& e) {
    outcome.status = RenderStatus::bad_output;
    outcome.message = e.what();
  }
  return outcome;
}

Renderer::Renderer(std::map<CodeFormat, RendererSpec> specs, std::filesystem::path workdir,
                   int max_concurrent)
    : specs_(std::move(specs)),
      workdir_(std::move(workdir)),
      slots_(std::make_unique<std::counting_semaphore<>>(std::max(1, max_concurrent))) {}

RenderOutcome Renderer::render(std::string_view code, CodeFormat format) {
  auto it = specs_.find(format);
  if (it == specs_.end())
    throw ConfigError("no renderer command configured for " + std::string(to_string(format)));
  slots_->acquire();
  struct Release {
    std::counting_semaphore<>* s;
    ~Release() { s->release(); }
  } release{slots_.get()};
  return render_via_command(code, format, it->second, workdir_);
}

}  // namespace docreward
