// Copyright 2026 The crem Authors
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


// A child process driven over its standard input and output, one line per
// message. POSIX only.

#ifndef CREM_PROCESS_H_
#define CREM_PROCESS_H_

#include <chrono>
#include <string>
#include <string_view>
#include <vector>

#include <sys/types.h>

namespace crem {

// Splits a command line on whitespace, honouring single and double quotes
// and backslash escapes. Throws UsageError on an unterminated quote or an
// empty command.
std::vector<std::string> split_command(std::string_view command);

class ChildProcess {
 public:
  // Starts argv[0] (looked up on PATH) with piped stdin/stdout; stderr is
  // inherited. Throws ProtocolError (retryable) when the spawn fails.
  explicit ChildProcess(const std::vector<std::string>& argv);
  // Closes stdin, then terminates the child if it has not exited.
  ~ChildProcess();
  ChildProcess(const ChildProcess&) = delete;
  ChildProcess& operator=(const ChildProcess&) = delete;

  // Appends '\n'. Throws ProtocolError (retryable) on a broken pipe.
  void write_line(std::string_view line);
  // Next line without its terminator. Throws ProtocolError (retryable) on EOF
  // or when nothing arrives within `timeout`.
  std::string read_line(std::chrono::milliseconds timeout);

  const std::string& command() const { return command_; }
  pid_t pid() const { return pid_; }

 private:
  void shutdown();

  std::string command_;
  pid_t pid_ = -1;
  int in_fd_ = -1;   // child's stdin
  int out_fd_ = -1;  // child's stdout
  std::string buffer_;
};

}  // namespace crem

#endif  // CREM_PROCESS_H_
