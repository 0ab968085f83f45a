/*
 * Copyright 2026 The FALE Plots Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

// Child-process oracle transport. One request in flight at a time; every
// read and write runs against a poll() deadline so a wedged child turns
// into a transport error instead of a hang. The child's stderr is captured
// to a temp file and its tail is attached to error messages.

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cerrno>
#include <chrono>
#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>
#include <vector>

#include "json.hpp"

#include "fale/error.hpp"
#include "fale/log.hpp"
#include "fale/oracle.hpp"

namespace fale {
namespace {

using nlohmann::json;
using Clock = std::chrono::steady_clock;

void ignore_sigpipe_once() {
  static const bool done = [] {
    ::signal(SIGPIPE, SIG_IGN);
    return true;
  }();
  (void)done;
}

int remaining_ms(Clock::time_point deadline) {
  const auto left = std::chrono::duration_cast<std::chrono::milliseconds>(
      deadline - Clock::now());
  if (left.count() <= 0) return 0;
  return static_cast<int>(std::min<long long>(left.count(), 60000));
}

std::string quote_command(const std::vector<std::string>& argv) {
  std::string out;
  for (const auto& a : argv) {
    if (!out.empty()) out += ' ';
    out += a;
  }
  return out;
}

}  // namespace

struct ExternalOracle::Child {
  pid_t pid = -1;
  int to_child = -1;    // our write end of the child's stdin
  int from_child = -1;  // our read end of the child's stdout
  std::string stderr_path;
  std::string command;
  std::string read_buffer;
  bool reaped = false;
  int exit_status = 0;

  ~Child() {
    if (to_child >= 0) ::close(to_child);
    if (from_child >= 0) ::close(from_child);
    if (pid > 0 && !reaped) {
      // Closing stdin asks the child to exit; give it a moment, then kill.
      for (int i = 0; i < 20 && !reaped; ++i) {
        if (::waitpid(pid, &exit_status, WNOHANG) == pid) {
          reaped = true;
          break;
        }
        ::usleep(25000);
      }
      if (!reaped) {
        ::kill(pid, SIGKILL);
        ::waitpid(pid, &exit_status, 0);
        reaped = true;
      }
    }
    if (!stderr_path.empty()) ::unlink(stderr_path.c_str());
  }

  // Non-throwing status probe for diagnostics. Only called on the failure
  // path, so it may wait briefly: a child that just died needs a moment to
  // become reapable after we see EOF on its pipe.
  std::string describe_exit() {
    for (int i = 0; pid > 0 && !reaped && i < 40; ++i) {
      if (::waitpid(pid, &exit_status, WNOHANG) == pid) {
        reaped = true;
        break;
      }
      ::usleep(5000);
    }
    if (!reaped) return "still running";
    if (WIFEXITED(exit_status)) {
      return "exited with status " + std::to_string(WEXITSTATUS(exit_status));
    }
    if (WIFSIGNALED(exit_status)) {
      return std::string("killed by signal ") +
             std::to_string(WTERMSIG(exit_status));
    }
    return "stopped";
  }

  std::string stderr_tail() {
    std::ifstream in(stderr_path, std::ios::binary);
    if (!in) return "";
    std::ostringstream ss;
    ss << in.rdbuf();
    std::string text = ss.str();
    constexpr std::size_t kTail = 512;
    if (text.size() > kTail) text = "..." + text.substr(text.size() - kTail);
    while (!text.empty() && (text.back() == '\n' || text.back() == '\r')) {
      text.pop_back();
    }
    return text;
  }

  [[noreturn]] void fail(const std::string& what) {
    std::string message = "oracle '" + command + "': " + what + " (child " +
                          describe_exit() + ")";
    const std::string tail = stderr_tail();
    if (!tail.empty()) message += "; child stderr: " + tail;
    throw OracleError(message);
  }

  void write_line(const std::string& line, Clock::time_point deadline) {
    std::string payload = line;
    payload += '\n';
    std::size_t written = 0;
    while (written < payload.size()) {
      struct pollfd pfd = {to_child, POLLOUT, 0};
      const int rc = ::poll(&pfd, 1, remaining_ms(deadline));
      if (rc == 0) fail("timed out writing request");
      if (rc < 0) {
        if (errno == EINTR) continue;
        fail(std::string("poll failed: ") + std::strerror(errno));
      }
      const ssize_t n = ::write(to_child, payload.data() + written,
                                payload.size() - written);
      if (n < 0) {
        if (errno == EINTR) continue;
        fail(std::string("write failed: ") + std::strerror(errno));
      }
      written += static_cast<std::size_t>(n);
    }
  }

  std::string read_line(Clock::time_point deadline) {
    constexpr std::size_t kMaxLine = 64ull << 20;
    for (;;) {
      const std::size_t pos = read_buffer.find('\n');
      if (pos != std::string::npos) {
        std::string line = read_buffer.substr(0, pos);
        read_buffer.erase(0, pos + 1);
        if (!line.empty() && line.back() == '\r') line.pop_back();
        return line;
      }
      if (read_buffer.size() > kMaxLine) fail("response line too long");
      struct pollfd pfd = {from_child, POLLIN, 0};
      const int rc = ::poll(&pfd, 1, remaining_ms(deadline));
      if (rc == 0) fail("timed out waiting for response");
      if (rc < 0) {
        if (errno == EINTR) continue;
        fail(std::string("poll failed: ") + std::strerror(errno));
      }
      char chunk[4096];
      const ssize_t n = ::read(from_child, chunk, sizeof(chunk));
      if (n == 0) fail("child closed its output");
      if (n < 0) {
        if (errno == EINTR) continue;
        fail(std::string("read failed: ") + std::strerror(errno));
      }
      read_buffer.append(chunk, static_cast<std::size_t>(n));
    }
  }
};

ExternalOracle::ExternalOracle(std::vector<std::string> command,
                               ExternalOracleOptions options)
    : child_(std::make_unique<Child>()), options_(options) {
  if (command.empty()) throw ConfigError("empty oracle command");
  ignore_sigpipe_once();
  child_->command = quote_command(command);

  int in_pipe[2];   // engine -> child
  int out_pipe[2];  // child -> engine
  int status_pipe[2];  // exec failure reporting, CLOEXEC
  if (::pipe(in_pipe) != 0 || ::pipe(out_pipe) != 0 ||
      ::pipe(status_pipe) != 0) {
    throw OracleError(std::string("pipe failed: ") + std::strerror(errno));
  }
  ::fcntl(status_pipe[0], F_SETFD, FD_CLOEXEC);
  ::fcntl(status_pipe[1], F_SETFD, FD_CLOEXEC);

  char stderr_template[] = "/tmp/fale-oracle-stderr-XXXXXX";
  const int stderr_fd = ::mkstemp(stderr_template);
  if (stderr_fd < 0) {
    throw OracleError(std::string("mkstemp failed: ") + std::strerror(errno));
  }
  child_->stderr_path = stderr_template;

  std::vector<char*> argv;
  argv.reserve(command.size() + 1);
  for (auto& a : command) argv.push_back(a.data());
  argv.push_back(nullptr);

  const pid_t pid = ::fork();
  if (pid < 0) {
    ::close(stderr_fd);
    throw OracleError(std::string("fork failed: ") + std::strerror(errno));
  }
  if (pid == 0) {
    ::dup2(in_pipe[0], STDIN_FILENO);
    ::dup2(out_pipe[1], STDOUT_FILENO);
    ::dup2(stderr_fd, STDERR_FILENO);
    ::close(in_pipe[0]);
    ::close(in_pipe[1]);
    ::close(out_pipe[0]);
    ::close(out_pipe[1]);
    ::close(stderr_fd);
    ::execvp(argv[0], argv.data());
    const int err = errno;
    ssize_t ignored = ::write(status_pipe[1], &err, sizeof(err));
    (void)ignored;
    ::_exit(127);
  }

  ::close(in_pipe[0]);
  ::close(out_pipe[1]);
  ::close(stderr_fd);
  ::close(status_pipe[1]);
  child_->pid = pid;
  child_->to_child = in_pipe[1];
  child_->from_child = out_pipe[0];

  // The status pipe reports exec failure; EOF means exec succeeded.
  int exec_errno = 0;
  const ssize_t n = ::read(status_pipe[0], &exec_errno, sizeof(exec_errno));
  ::close(status_pipe[0]);
  if (n > 0) {
    std::string cmd = child_->command;
    child_.reset();
    throw OracleError("cannot spawn oracle '" + cmd +
                      "': " + std::strerror(exec_errno));
  }
  FALE_DEBUG("spawned oracle pid " << pid << ": " << child_->command);
}

ExternalOracle::~ExternalOracle() = default;

void ExternalOracle::bind(const Dataset& ds) {
  bound_ = &ds;
  input_cols_ = ds.model_input_columns();

  json schema = json::array();
  for (std::size_t c : input_cols_) {
    schema.push_back({{"name", ds.schema()[c].name},
                      {"kind", to_string(ds.schema()[c].kind)}});
  }
  const json hello = {{"type", "hello"}, {"schema", schema}};
  const auto deadline =
      Clock::now() + std::chrono::duration_cast<Clock::duration>(
                         std::chrono::duration<double>(
                             options_.handshake_timeout_s));
  child_->write_line(hello.dump(), deadline);
  const std::string reply = child_->read_line(deadline);
  json doc;
  try {
    doc = json::parse(reply);
  } catch (const json::exception&) {
    child_->fail("handshake reply is not valid JSON: " + reply);
  }
  if (doc.value("type", std::string()) != "ready") {
    child_->fail("expected handshake type 'ready', got: " + reply);
  }
}

std::vector<double> ExternalOracle::predict_chunk(
    const std::vector<Row>& batch, std::size_t begin, std::size_t end) {
  const std::uint64_t id = next_id_++;
  json instances = json::array();
  for (std::size_t r = begin; r < end; ++r) {
    const Row& row = batch[r];
    if (row.size() != bound_->column_count()) {
      throw OracleError("batch row arity does not match bound schema");
    }
    json values = json::array();
    for (std::size_t c : input_cols_) {
      if (bound_->schema()[c].kind == FeatureKind::kNumeric) {
        values.push_back(row[c]);
      } else {
        values.push_back(
            bound_->categories(c)[static_cast<std::size_t>(row[c])]);
      }
    }
    instances.push_back(std::move(values));
  }
  const json request = {
      {"type", "predict"}, {"id", id}, {"instances", instances}};

  const auto deadline =
      Clock::now() + std::chrono::duration_cast<Clock::duration>(
                         std::chrono::duration<double>(
                             options_.response_timeout_s));
  child_->write_line(request.dump(), deadline);
  const std::string reply = child_->read_line(deadline);

  json doc;
  try {
    doc = json::parse(reply);
  } catch (const json::exception&) {
    child_->fail("response is not valid JSON: " + reply);
  }
  if (doc.value("type", std::string()) != "predictions") {
    child_->fail("expected response type 'predictions', got: " + reply);
  }
  if (!doc.contains("id") || !doc["id"].is_number_unsigned() ||
      doc["id"].get<std::uint64_t>() != id) {
    child_->fail("response id mismatch: expected " + std::to_string(id) +
                 ", got " +
                 (doc.contains("id") ? doc["id"].dump() : "none"));
  }
  if (!doc.contains("scores") || !doc["scores"].is_array() ||
      doc["scores"].size() != end - begin) {
    child_->fail("expected " + std::to_string(end - begin) +
                 " scores, got " +
                 (doc.contains("scores")
                      ? std::to_string(doc["scores"].size())
                      : std::string("none")));
  }
  std::vector<double> scores;
  scores.reserve(end - begin);
  for (const auto& s : doc["scores"]) {
    if (!s.is_number()) child_->fail("non-numeric score in response");
    const double v = s.get<double>();
    if (!std::isfinite(v)) child_->fail("non-finite score in response");
    scores.push_back(v);
  }
  return scores;
}

std::vector<double> ExternalOracle::predict_batch(
    const std::vector<Row>& batch) {
  if (bound_ == nullptr) {
    throw OracleError("external oracle used before bind()");
  }
  std::vector<double> scores;
  scores.reserve(batch.size());
  const std::size_t limit = options_.batch_limit > 0 ? options_.batch_limit
                                                     : batch.size();
  for (std::size_t begin = 0; begin < batch.size(); begin += limit) {
    const std::size_t end = std::min(batch.size(), begin + limit);
    std::vector<double> chunk = predict_chunk(batch, begin, end);
    scores.insert(scores.end(), chunk.begin(), chunk.end());
  }
  return scores;
}

}  // namespace fale
