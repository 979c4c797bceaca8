#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include "commands.hpp"
#include "imbtab/core/error.hpp"
#include "imbtab/data/correlate.hpp"
#include "pipeline.hpp"

namespace imbtab::cli {
namespace {

std::string pct(double value) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.1f%%", value);
  return buf;
}

}  // namespace

int cmd_inspect(const PipelineConfig& cfg) {
  data::Table t;
  try {
    t = load_input(cfg);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitIngestion;
  }

  const auto counts = data::class_counts(t);
  const double total = static_cast<double>(t.row_count());
  const double pct0 = 100.0 * static_cast<double>(counts[0]) / total;
  const double pct1 = 100.0 * static_cast<double>(counts[1]) / total;
  const auto constant = data::constant_columns(t.features);

  std::cout << "input: " << cfg.input << '\n';
  std::cout << "rows: " << t.row_count() << '\n';
  std::cout << "columns: " << t.col_count() << '\n';
  std::cout << "class counts: 0: " << counts[0] << " (" << pct(pct0) << "), 1: "
            << counts[1] << " (" << pct(pct1) << ")" << '\n';
  std::cout << "balance: " << pct(pct0) << " / " << pct(pct1) << '\n';
  if (constant.empty()) {
    std::cout << "constant columns: none" << '\n';
  } else {
    std::cout << "constant columns: " << constant.size() << " (";
    for (std::size_t i = 0; i < constant.size(); ++i) {
      if (i) std::cout << ", ";
      std::cout << t.feature_names[static_cast<std::size_t>(constant[i])];
    }
    std::cout << ")" << '\n';
  }

  nlohmann::ordered_json summary;
  summary["input"] = cfg.input;
  summary["label_column"] = cfg.label_column;
  summary["rows"] = t.row_count();
  summary["columns"] = t.col_count();
  summary["class_counts"] = {{"0", counts[0]}, {"1", counts[1]}};
  summary["class_percentages"] = {{"0", pct0}, {"1", pct1}};
  std::vector<std::string> constant_names;
  for (const Index c : constant) {
    constant_names.push_back(t.feature_names[static_cast<std::size_t>(c)]);
  }
  summary["constant_columns"] = constant_names;

  ensure_out_dir(cfg.out_dir);
  const std::string path = out_path(cfg, "summary.json");
  write_json_file(path, summary);
  std::cout << "wrote " << path << '\n';
  return kExitOk;
}

}  // namespace imbtab::cli
