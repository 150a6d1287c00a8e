#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace vqc::cli {

struct RunOptions {
  std::optional<std::filesystem::path> config;
  std::optional<std::uint64_t> seed;
  std::filesystem::path out = "out";
  std::optional<int> subjects;
  unsigned jobs = 1;
  bool timestamp = false;
};

struct ScreenInputs {
  std::filesystem::path ratings;
  std::filesystem::path sessions;
};

struct AggregateInputs {
  std::filesystem::path ratings;  // surviving ratings
  std::filesystem::path sessions;
  std::filesystem::path catalog;
};

struct EvaluateInputs {
  std::filesystem::path mos;
  std::vector<std::filesystem::path> predictors;
  std::string protocol;  // empty: take it from the config
  std::vector<std::string> distance;  // predictor names whose scores are negated
};

// Each returns a process exit code: 0 ok, 1 data error, 2 configuration error.
int cmd_simulate(const RunOptions& opt);
int cmd_screen(const ScreenInputs& in, const RunOptions& opt);
int cmd_aggregate(const AggregateInputs& in, const RunOptions& opt);
int cmd_evaluate(const EvaluateInputs& in, const RunOptions& opt);
/// simulate, screen, aggregate and, when predictors are given, evaluate into one directory.
int cmd_run(const EvaluateInputs& eval_in, const RunOptions& opt);
int cmd_config(const RunOptions& opt);

}  // namespace vqc::cli
