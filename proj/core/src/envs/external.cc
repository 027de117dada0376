// Copyright 2026 The PolicyForge Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "policyforge/envs/external.h"

#include <fcntl.h>
#include <netdb.h>
#include <poll.h>
#include <signal.h>
#include <sys/socket.h>
#include <sys/types.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cerrno>
#include <chrono>
#include <cmath>
#include <cstring>
#include <mutex>

#include <nlohmann/json.hpp>

#include "policyforge/common/errors.h"

namespace policyforge::envs {
namespace {

using nlohmann::json;

void IgnoreSigpipeOnce() {
  static std::once_flag once;
  std::call_once(once, [] { ::signal(SIGPIPE, SIG_IGN); });
}

std::string ErrnoText(const std::string& what) {
  return what + ": " + std::strerror(errno);
}

}  // namespace

// A bidirectional line stream over file descriptors.
class ExternalEnv::Channel {
 public:
  Channel(int read_fd, int write_fd, pid_t child, int timeout_ms)
      : read_fd_(read_fd), write_fd_(write_fd), child_(child), timeout_ms_(timeout_ms) {}

  ~Channel() {
    if (write_fd_ >= 0 && write_fd_ != read_fd_) ::close(write_fd_);
    if (read_fd_ >= 0) ::close(read_fd_);
    if (child_ > 0) {
      ::kill(child_, SIGTERM);
      ::waitpid(child_, nullptr, 0);
    }
  }

  static std::unique_ptr<Channel> Spawn(const std::string& command, int timeout_ms) {
    IgnoreSigpipeOnce();
    int to_child[2];
    int from_child[2];
    if (::pipe2(to_child, O_CLOEXEC) != 0) throw IoError(ErrnoText("pipe"));
    if (::pipe2(from_child, O_CLOEXEC) != 0) {
      ::close(to_child[0]);
      ::close(to_child[1]);
      throw IoError(ErrnoText("pipe"));
    }
    const pid_t pid = ::fork();
    if (pid < 0) throw IoError(ErrnoText("fork"));
    if (pid == 0) {
      ::dup2(to_child[0], STDIN_FILENO);
      ::dup2(from_child[1], STDOUT_FILENO);
      ::execl("/bin/sh", "sh", "-c", command.c_str(), static_cast<char*>(nullptr));
      ::_exit(127);
    }
    ::close(to_child[0]);
    ::close(from_child[1]);
    return std::make_unique<Channel>(from_child[0], to_child[1], pid, timeout_ms);
  }

  static std::unique_ptr<Channel> Dial(const std::string& host, int port, int timeout_ms) {
    IgnoreSigpipeOnce();
    addrinfo hints{};
    hints.ai_family = AF_UNSPEC;
    hints.ai_socktype = SOCK_STREAM;
    addrinfo* found = nullptr;
    const std::string service = std::to_string(port);
    if (const int rc = ::getaddrinfo(host.c_str(), service.c_str(), &hints, &found); rc != 0) {
      throw IoError("resolve " + host + ": " + ::gai_strerror(rc));
    }
    int fd = -1;
    for (addrinfo* a = found; a != nullptr; a = a->ai_next) {
      fd = ::socket(a->ai_family, a->ai_socktype | SOCK_CLOEXEC, a->ai_protocol);
      if (fd < 0) continue;
      if (::connect(fd, a->ai_addr, a->ai_addrlen) == 0) break;
      ::close(fd);
      fd = -1;
    }
    ::freeaddrinfo(found);
    if (fd < 0) throw IoError("connect " + host + ":" + service + " failed");
    return std::make_unique<Channel>(fd, fd, 0, timeout_ms);
  }

  void WriteLine(const std::string& line) {
    std::string data = line + "\n";
    std::size_t sent = 0;
    while (sent < data.size()) {
      const ssize_t n = ::write(write_fd_, data.data() + sent, data.size() - sent);
      if (n < 0) {
        if (errno == EINTR) continue;
        throw IoError(ErrnoText("external environment write"));
      }
      sent += static_cast<std::size_t>(n);
    }
  }

  std::string ReadLine() {
    const auto deadline =
        std::chrono::steady_clock::now() + std::chrono::milliseconds(timeout_ms_);
    while (true) {
      const std::size_t newline = buffer_.find('\n');
      if (newline != std::string::npos) {
        std::string line = buffer_.substr(0, newline);
        buffer_.erase(0, newline + 1);
        return line;
      }
      const auto left = std::chrono::duration_cast<std::chrono::milliseconds>(
          deadline - std::chrono::steady_clock::now());
      if (left.count() <= 0) throw TimeoutError("external environment did not reply in time");
      pollfd p{read_fd_, POLLIN, 0};
      const int rc = ::poll(&p, 1, static_cast<int>(left.count()));
      if (rc < 0) {
        if (errno == EINTR) continue;
        throw IoError(ErrnoText("poll"));
      }
      if (rc == 0) continue;
      char chunk[4096];
      const ssize_t n = ::read(read_fd_, chunk, sizeof(chunk));
      if (n < 0) {
        if (errno == EINTR) continue;
        throw IoError(ErrnoText("external environment read"));
      }
      if (n == 0) throw IoError("external environment closed the connection");
      buffer_.append(chunk, static_cast<std::size_t>(n));
      if (buffer_.size() > (std::size_t{64} << 20)) {
        throw ProtocolError("line", "reply exceeds 64 MiB");
      }
    }
  }

  json Request(const json& request) {
    WriteLine(request.dump());
    const std::string line = ReadLine();
    json reply = json::parse(line, nullptr, false);
    if (reply.is_discarded()) throw ProtocolError("line", "not valid JSON: " + line.substr(0, 80));
    if (!reply.is_object()) throw ProtocolError("line", "reply is not a JSON object");
    return reply;
  }

 private:
  int read_fd_;
  int write_fd_;
  pid_t child_;
  int timeout_ms_;
  std::string buffer_;
};

namespace {

const json& Field(const json& reply, const char* name) {
  const auto it = reply.find(name);
  if (it == reply.end()) throw ProtocolError(name, "missing");
  return *it;
}

std::size_t ReadCount(const json& reply, const char* name) {
  const json& v = Field(reply, name);
  if (!v.is_number_integer() || v.get<long long>() < 0) {
    throw ProtocolError(name, "expected a non-negative integer");
  }
  return v.get<std::size_t>();
}

double ReadNumber(const json& reply, const char* name) {
  const json& v = Field(reply, name);
  if (!v.is_number()) throw ProtocolError(name, "expected a number");
  const double d = v.get<double>();
  if (!std::isfinite(d)) throw ProtocolError(name, "expected a finite number");
  return d;
}

void ReadVector(const json& reply, const char* name, std::size_t expected,
                std::vector<double>& out) {
  const json& v = Field(reply, name);
  if (!v.is_array()) throw ProtocolError(name, "expected an array");
  if (v.size() != expected) {
    throw ProtocolError(name, "expected " + std::to_string(expected) + " values, got " +
                                  std::to_string(v.size()));
  }
  out.resize(expected);
  for (std::size_t i = 0; i < expected; ++i) {
    if (!v[i].is_number()) throw ProtocolError(name, "element " + std::to_string(i) + " is not a number");
    out[i] = v[i].get<double>();
    if (!std::isfinite(out[i])) {
      throw ProtocolError(name, "element " + std::to_string(i) + " is not finite");
    }
  }
}

}  // namespace

ExternalEnv::ExternalEnv(const ExternalConfig& config) {
  if (!config.command.empty()) {
    channel_ = Channel::Spawn(config.command, config.timeout_ms);
  } else if (!config.host.empty() && config.port > 0) {
    channel_ = Channel::Dial(config.host, config.port, config.timeout_ms);
  } else {
    throw ConfigError("external environment needs a command or a host and port");
  }
  const json reply = channel_->Request({{"cmd", "spec"}});
  spec_.name = "external";
  spec_.kind = EnvKind::kExternal;
  spec_.obs_dim = ReadCount(reply, "obs_dim");
  spec_.act_dim = ReadCount(reply, "act_dim");
  const std::size_t horizon = ReadCount(reply, "horizon");
  if (horizon < 1) throw ProtocolError("horizon", "must be at least 1");
  spec_.horizon = config.horizon > 0 ? config.horizon : static_cast<int>(horizon);
  spec_.control_interval = 0.0;
  spec_.substeps = 0;
}

ExternalEnv::~ExternalEnv() = default;

void ExternalEnv::Reset(std::uint64_t seed, std::vector<double>& obs) {
  const json reply = channel_->Request({{"cmd", "reset"}, {"seed", seed}});
  ReadVector(reply, "obs", spec_.obs_dim, obs);
}

StepResult ExternalEnv::Step(std::span<const double> action, std::vector<double>& obs) {
  if (action.size() != spec_.act_dim) {
    throw DimensionMismatch("action", spec_.act_dim, action.size());
  }
  const json reply = channel_->Request(
      {{"cmd", "step"}, {"action", std::vector<double>(action.begin(), action.end())}});
  StepResult result;
  ReadVector(reply, "obs", spec_.obs_dim, obs);
  result.reward = ReadNumber(reply, "reward");
  const json& done = Field(reply, "done");
  if (!done.is_boolean()) throw ProtocolError("done", "expected a boolean");
  result.done = done.get<bool>();
  return result;
}

}  // namespace policyforge::envs
