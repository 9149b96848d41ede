#pragma once

#include <chrono>
#include <string>
#include <vector>

namespace exeos::pipeline {

struct ProcessResult {
  int exit_code = -1;
  bool timed_out = false;
  bool spawn_failed = false;
  std::string output;  // interleaved stdout + stderr
};

// Runs argv[0] with the given arguments and working directory, capturing
// output, killing the process group once the wall-clock budget is spent.
ProcessResult run_process(const std::vector<std::string>& argv,
                          const std::string& working_dir,
                          std::chrono::milliseconds timeout);

}  // namespace exeos::pipeline
