// Copyright 2026 The IDOL Authors
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

#include "idol/common/subprocess.h"

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <spawn.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>

#include "idol/common/error.h"

extern char** environ;

namespace idol {
namespace {

int RemainingMillis(std::chrono::steady_clock::time_point deadline) {
  auto remaining = std::chrono::duration_cast<std::chrono::milliseconds>(
      deadline - std::chrono::steady_clock::now());
  return remaining.count() < 0 ? 0 : static_cast<int>(remaining.count());
}

}  // namespace

Subprocess::Subprocess(const std::vector<std::string>& argv) {
  // Writing to a child that exited must surface as an error, not a signal.
  ::signal(SIGPIPE, SIG_IGN);

  int in_pipe[2];
  int out_pipe[2];
  if (::pipe2(in_pipe, O_CLOEXEC) != 0) {
    throw HarnessError(std::string("pipe: ") + std::strerror(errno));
  }
  if (::pipe2(out_pipe, O_CLOEXEC) != 0) {
    ::close(in_pipe[0]);
    ::close(in_pipe[1]);
    throw HarnessError(std::string("pipe: ") + std::strerror(errno));
  }

  posix_spawn_file_actions_t actions;
  posix_spawn_file_actions_init(&actions);
  posix_spawn_file_actions_adddup2(&actions, in_pipe[0], STDIN_FILENO);
  posix_spawn_file_actions_adddup2(&actions, out_pipe[1], STDOUT_FILENO);
  posix_spawn_file_actions_addopen(&actions, STDERR_FILENO, "/dev/null",
                                   O_WRONLY, 0);

  std::vector<char*> args;
  args.reserve(argv.size() + 1);
  for (const std::string& arg : argv) args.push_back(const_cast<char*>(arg.c_str()));
  args.push_back(nullptr);

  int rc = ::posix_spawnp(&pid_, args[0], &actions, nullptr, args.data(),
                          environ);
  posix_spawn_file_actions_destroy(&actions);
  ::close(in_pipe[0]);
  ::close(out_pipe[1]);
  if (rc != 0) {
    ::close(in_pipe[1]);
    ::close(out_pipe[0]);
    pid_ = -1;
    throw HarnessError("cannot start " + argv[0] + ": " + std::strerror(rc));
  }
  stdin_fd_ = in_pipe[1];
  stdout_fd_ = out_pipe[0];
}

Subprocess::~Subprocess() {
  CloseStdin();
  if (stdout_fd_ >= 0) ::close(stdout_fd_);
  if (pid_ > 0 && !exit_status_) {
    Kill();
  }
}

bool Subprocess::Write(const std::string& data) {
  size_t written = 0;
  while (written < data.size()) {
    ssize_t n = ::write(stdin_fd_, data.data() + written, data.size() - written);
    if (n < 0) {
      if (errno == EINTR) continue;
      return false;
    }
    written += static_cast<size_t>(n);
  }
  return true;
}

void Subprocess::CloseStdin() {
  if (stdin_fd_ >= 0) {
    ::close(stdin_fd_);
    stdin_fd_ = -1;
  }
}

bool Subprocess::FillBuffer(std::chrono::steady_clock::time_point deadline) {
  if (eof_) return false;
  pollfd fd{stdout_fd_, POLLIN, 0};
  for (;;) {
    int rc = ::poll(&fd, 1, RemainingMillis(deadline));
    if (rc < 0 && errno == EINTR) continue;
    if (rc <= 0) {
      timed_out_ = rc == 0;
      return false;
    }
    break;
  }
  char chunk[65536];
  ssize_t n;
  do {
    n = ::read(stdout_fd_, chunk, sizeof(chunk));
  } while (n < 0 && errno == EINTR);
  if (n <= 0) {
    eof_ = true;
    return false;
  }
  buffer_.append(chunk, static_cast<size_t>(n));
  return true;
}

std::optional<std::string> Subprocess::ReadLine(
    std::chrono::steady_clock::time_point deadline) {
  size_t scanned = 0;
  for (;;) {
    size_t newline = buffer_.find('\n', scanned);
    if (newline != std::string::npos) {
      std::string line = buffer_.substr(0, newline);
      buffer_.erase(0, newline + 1);
      return line;
    }
    scanned = buffer_.size();
    if (!FillBuffer(deadline)) return std::nullopt;
  }
}

std::optional<std::string> Subprocess::ReadAll(
    std::chrono::steady_clock::time_point deadline) {
  while (FillBuffer(deadline)) {
  }
  if (!eof_) return std::nullopt;
  std::string out = std::move(buffer_);
  buffer_.clear();
  return out;
}

int Subprocess::Wait() {
  if (exit_status_) return *exit_status_;
  int status = 0;
  while (::waitpid(pid_, &status, 0) < 0) {
    if (errno != EINTR) {
      exit_status_ = -1;
      return -1;
    }
  }
  exit_status_ = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return *exit_status_;
}

void Subprocess::Kill() {
  if (pid_ > 0 && !exit_status_) {
    ::kill(pid_, SIGKILL);
    Wait();
  }
}

ProcessResult RunProcess(const std::vector<std::string>& argv,
                         const std::string& input,
                         std::chrono::milliseconds timeout) {
  auto deadline = std::chrono::steady_clock::now() + timeout;
  Subprocess process(argv);
  ProcessResult result;
  // solc consumes all of stdin before it writes, so writing first is safe.
  process.Write(input);
  process.CloseStdin();
  std::optional<std::string> output = process.ReadAll(deadline);
  if (!output) {
    process.Kill();
    result.timed_out = true;
    return result;
  }
  result.output = std::move(*output);
  result.exit_status = process.Wait();
  return result;
}

}  // namespace idol
