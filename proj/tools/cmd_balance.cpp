#include <iostream>
#include <string>

#include "commands.hpp"
#include "imbtab/core/error.hpp"
#include "imbtab/data/csv.hpp"
#include "imbtab/gan/gan_json.hpp"
#include "pipeline.hpp"

namespace imbtab::cli {
namespace {

void print_counts(const char* tag, const data::Table& t) {
  const auto counts = data::class_counts(t);
  std::cout << tag << ": " << t.row_count() << " rows (0: " << counts[0]
            << ", 1: " << counts[1] << ")" << '\n';
}

}  // namespace

int cmd_balance(const PipelineConfig& cfg) {
  data::Table t;
  try {
    t = load_input(cfg);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitIngestion;
  }

  if (cfg.policy != "smote" && cfg.policy != "gan") {
    std::cerr << "error: balance requires --policy smote or --policy gan" << '\n';
    return kExitSampling;
  }

  ensure_out_dir(cfg.out_dir);
  print_counts("input", t);
  const auto counts = data::class_counts(t);
  const std::string csv_path = out_path(cfg, "balanced.csv");

  if (counts[0] == counts[1]) {
    std::cerr << "warning: input is already balanced; writing an unchanged copy" << '\n';
    data::write_csv(csv_path, t, cfg.label_column);
    std::cout << "wrote " << csv_path << '\n';
    return kExitOk;
  }

  try {
    if (cfg.policy == "smote") {
      auto scfg = cfg.smote_config;
      scfg.seed = cfg.seed;
      const auto balanced = smote::smote_balance(t, scfg);
      print_counts("balanced", balanced);
      data::write_csv(csv_path, balanced, cfg.label_column);
      std::cout << "wrote " << csv_path << '\n';
    } else {
      auto gcfg = cfg.gan_config;
      gcfg.seed = cfg.seed;
      const auto trace = gan::gan_balance_traced(t, gcfg);
      print_counts("balanced", trace.balanced);
      data::write_csv(csv_path, trace.balanced, cfg.label_column);
      std::cout << "wrote " << csv_path << '\n';

      const std::string model_path = out_path(cfg, "gan_model.json");
      write_json_file(model_path, gan::gan_to_json(trace.model));
      std::cout << "wrote " << model_path << '\n';

      const int minority = data::minority_label(t);
      const auto real = data::select_rows(t, data::rows_with_label(t, minority));
      const auto fidelity = gan::fidelity_report(real, trace.synthetic);
      const std::string fidelity_path = out_path(cfg, "fidelity.json");
      write_json_file(fidelity_path, gan::fidelity_to_json(fidelity));
      std::cout << "wrote " << fidelity_path << '\n';
      std::cout << "fidelity: max |dmean| " << fidelity.max_delta_mean
                << ", max |dstd| " << fidelity.max_delta_std
                << ", max |dcorr| " << fidelity.max_correlation_gap << '\n';
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitSampling;
  }
  return kExitOk;
}

}  // namespace imbtab::cli
