#pragma once

#include <string>

#include "pipeline.hpp"

namespace imbtab::cli {

int cmd_inspect(const PipelineConfig& cfg);
int cmd_balance(const PipelineConfig& cfg);

struct TuneArgs {
  std::string target;  // "gan" or a model preset name
  int n_trials = 50;
  std::string space;   // search-space file; empty means spaces/<target>.json
};
int cmd_tune(const PipelineConfig& cfg, const TuneArgs& args);

int cmd_bench(const PipelineConfig& cfg);

}  // namespace imbtab::cli
