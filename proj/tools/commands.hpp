#pragma once

#include <string>

namespace logcdr::cli {

struct Options {
  std::string command;
  int order = 10;
  int truncation = 4;
  std::string pair_path;
  std::string ring_path;
  std::string suite_path;
  std::string out_path;
  bool json = false;
};

/* The command's artifact plus the process exit status: 0 success, 2 when a
 * mathematical check inside the command fails. Input problems do not reach
 * an Outcome, they throw ConfigError (exit 1 in the driver). */
struct Outcome {
  int exit_code = 0;
  std::string text;
};

Outcome run_command(const Options& o);

/* Temp file in the target directory, then rename. */
void write_artifact(const std::string& path, const std::string& bytes);

}  // namespace logcdr::cli
