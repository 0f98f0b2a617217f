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

#ifndef IDOL_COMMON_SUBPROCESS_H_
#define IDOL_COMMON_SUBPROCESS_H_

#include <sys/types.h>

#include <chrono>
#include <optional>
#include <string>
#include <vector>

namespace idol {

// A child process with piped stdin/stdout. stderr is discarded. The process is
// killed and reaped on destruction.
class Subprocess {
 public:
  // Throws HarnessError if the process cannot be started.
  explicit Subprocess(const std::vector<std::string>& argv);
  ~Subprocess();

  Subprocess(const Subprocess&) = delete;
  Subprocess& operator=(const Subprocess&) = delete;

  // Returns false if the child closed its stdin.
  bool Write(const std::string& data);
  void CloseStdin();

  // Reads one '\n'-terminated line (terminator stripped). std::nullopt on EOF
  // or when the deadline passes.
  std::optional<std::string> ReadLine(
      std::chrono::steady_clock::time_point deadline);

  // Reads until EOF. std::nullopt when the deadline passes first.
  std::optional<std::string> ReadAll(
      std::chrono::steady_clock::time_point deadline);

  // Waits for exit and returns the exit status (-1 if killed by a signal).
  int Wait();
  void Kill();
  bool timed_out() const { return timed_out_; }

 private:
  bool FillBuffer(std::chrono::steady_clock::time_point deadline);

  pid_t pid_ = -1;
  int stdin_fd_ = -1;
  int stdout_fd_ = -1;
  bool eof_ = false;
  bool timed_out_ = false;
  std::optional<int> exit_status_;
  std::string buffer_;
};

struct ProcessResult {
  int exit_status = -1;
  bool timed_out = false;
  std::string output;
};

// Runs argv to completion, feeding input on stdin.
ProcessResult RunProcess(const std::vector<std::string>& argv,
                         const std::string& input,
                         std::chrono::milliseconds timeout);

}  // namespace idol

#endif  // IDOL_COMMON_SUBPROCESS_H_
