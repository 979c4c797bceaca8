// Drives the built imbtab binary as a subprocess and checks the observable
// contract: stdout text, artifact files, and exit codes.

#include <sys/wait.h>

#include <array>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "imbtab/core/rng.hpp"
#include "imbtab/data/csv.hpp"
#include "imbtab/data/table.hpp"
#include "imbtab/gan/gan_json.hpp"
#include "json.hpp"
#include "test_util.hpp"

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

struct CliResult {
  int exit_code = -1;
  std::string output;  // stdout and stderr interleaved
};

CliResult run_cli(const std::string& args) {
  const std::string cmd = std::string(IMBTAB_CLI_PATH) + " " + args + " 2>&1";
  FILE* pipe = ::popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  CliResult r;
  std::array<char, 4096> buf{};
  std::size_t got = 0;
  while ((got = std::fread(buf.data(), 1, buf.size(), pipe)) > 0) {
    r.output.append(buf.data(), got);
  }
  const int status = ::pclose(pipe);
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

bool contains(const std::string& haystack, const std::string& needle) {
  return haystack.find(needle) != std::string::npos;
}

fs::path scratch_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "imbtab_cli" / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE_MESSAGE(in.good(), "missing " << path.string());
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

void spill(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
  REQUIRE(out.good());
}

ordered_json read_json(const fs::path& path) { return ordered_json::parse(slurp(path)); }

/// 130-row imbalanced table (90 negatives, 40 positives). f0/f1 carry the
/// class signal, f2-f4 are noise, and f5 shadows f0 closely enough for the
/// bench pruning pass to drop it.
imbtab::data::Table fixture_table() {
  imbtab::data::Table t;
  t.feature_names = {"f0", "f1", "f2", "f3", "f4", "f5"};
  const imbtab::Index n = 130;
  t.features.resize(n, 6);
  t.labels.resize(n);
  imbtab::Rng rng(41);
  for (imbtab::Index r = 0; r < n; ++r) {
    const int label = r < 90 ? 0 : 1;
    const double shift = label == 1 ? 1.6 : 0.0;
    t.features(r, 0) = rng.normal() + shift;
    t.features(r, 1) = rng.normal() - shift;
    for (imbtab::Index c = 2; c < 5; ++c) t.features(r, c) = rng.normal();
    t.features(r, 5) = t.features(r, 0) + 0.01 * rng.normal();
    t.labels[r] = label;
  }
  return t;
}

/// Writes the shared fixture once per process and hands back its path.
std::string fixture_csv() {
  static const std::string path = [] {
    const fs::path csv = scratch_dir("fixture") / "input.csv";
    imbtab::data::write_csv(csv.string(), fixture_table());
    return csv.string();
  }();
  return path;
}

/// Config file with a GAN small enough for subprocess tests.
std::string tiny_gan_config(const fs::path& dir) {
  const fs::path path = dir / "config.json";
  spill(path,
        "{\n"
        "  \"gan\": {\"epochs\": 12, \"generator_dims\": [8],\n"
        "          \"discriminator_dims\": [8], \"embedding_dim\": 8,\n"
        "          \"batch_size\": 16}\n"
        "}\n");
  return path.string();
}

}  // namespace

TEST_CASE("inspect prints class balance and writes summary.json") {
  const fs::path dir = scratch_dir("inspect");
  const auto r = run_cli("inspect --input " + fixture_csv() + " --out-dir " + dir.string());
  CHECK(r.exit_code == 0);
  CHECK(contains(r.output, "rows: 130"));
  CHECK(contains(r.output, "columns: 6"));
  CHECK(contains(r.output, "class counts: 0: 90 (69.2%), 1: 40 (30.8%)"));
  CHECK(contains(r.output, "balance: 69.2% / 30.8%"));
  CHECK(contains(r.output, "constant columns: none"));

  const ordered_json summary = read_json(dir / "summary.json");
  CHECK(summary.at("rows") == 130);
  CHECK(summary.at("columns") == 6);
  CHECK(summary.at("label_column") == "Label");
  CHECK(summary.at("class_counts").at("0") == 90);
  CHECK(summary.at("class_counts").at("1") == 40);
  CHECK(summary.at("class_percentages").at("1").get<double>() ==
        doctest::Approx(100.0 * 40 / 130));
  CHECK(summary.at("constant_columns").empty());
}

TEST_CASE("inspect exits with the ingestion code when the input is missing") {
  const fs::path dir = scratch_dir("inspect_missing");
  const auto r = run_cli("inspect --input " + (dir / "nope.csv").string() + " --out-dir " +
                         dir.string());
  CHECK(r.exit_code == 2);
  CHECK(contains(r.output, "error:"));
}

TEST_CASE("balance with smote equalizes classes and keeps originals verbatim") {
  const fs::path dir = scratch_dir("balance_smote");
  const auto r = run_cli("balance --input " + fixture_csv() + " --policy smote --seed 7" +
                         " --out-dir " + dir.string());
  CHECK(r.exit_code == 0);

  const auto balanced = imbtab::data::load_csv((dir / "balanced.csv").string());
  const auto counts = imbtab::data::class_counts(balanced);
  CHECK(counts[0] == 90);
  CHECK(counts[1] == 90);
  const auto original = fixture_table();
  CHECK(balanced.features.topRows(130) == original.features);
  for (imbtab::Index i = 130; i < balanced.row_count(); ++i) CHECK(balanced.labels[i] == 1);

  // Same seed, fresh directory: the artifact must come back byte for byte.
  const fs::path dir2 = scratch_dir("balance_smote_rerun");
  const auto r2 = run_cli("balance --input " + fixture_csv() + " --policy smote --seed 7" +
                          " --out-dir " + dir2.string());
  CHECK(r2.exit_code == 0);
  CHECK(slurp(dir / "balanced.csv") == slurp(dir2 / "balanced.csv"));
}

TEST_CASE("balance with gan writes the model and fidelity artifacts") {
  const fs::path dir = scratch_dir("balance_gan");
  const auto r = run_cli("balance --input " + fixture_csv() + " --policy gan --seed 7" +
                         " --config " + tiny_gan_config(dir) + " --out-dir " + dir.string());
  CHECK(r.exit_code == 0);

  const auto balanced = imbtab::data::load_csv((dir / "balanced.csv").string());
  const auto counts = imbtab::data::class_counts(balanced);
  CHECK(counts[0] == 90);
  CHECK(counts[1] == 90);

  // The model document must be loadable by the library round-trip.
  const ordered_json model_doc = read_json(dir / "gan_model.json");
  const auto model = imbtab::gan::gan_from_json(model_doc);
  CHECK(model.config.epochs == 12);
  CHECK(model.config.embedding_dim == 8);
  CHECK(model.feature_names == std::vector<std::string>{"f0", "f1", "f2", "f3", "f4", "f5"});

  const ordered_json fidelity = read_json(dir / "fidelity.json");
  CHECK(fidelity.at("delta_mean").size() == 6);
  CHECK(fidelity.at("delta_std").size() == 6);
  for (const std::string key :
       {"max_delta_mean", "max_delta_std", "max_correlation_gap", "combined_gap"}) {
    CAPTURE(key);
    CHECK(fidelity.contains(key));
  }
}

TEST_CASE("balance requires an explicit sampling policy") {
  const fs::path dir = scratch_dir("balance_none");
  const auto r = run_cli("balance --input " + fixture_csv() + " --out-dir " + dir.string());
  CHECK(r.exit_code == 3);
  CHECK(contains(r.output, "error:"));
}

TEST_CASE("paper mode pins the published gan settings during balance") {
  const fs::path dir = scratch_dir("balance_paper");
  // The config asks for a toy GAN; paper mode must override it.
  const auto r = run_cli("balance --input " + fixture_csv() + " --policy gan --seed 7" +
                         " --config " + tiny_gan_config(dir) + " --paper-mode --out-dir " +
                         dir.string());
  CHECK(r.exit_code == 0);
  const ordered_json model_doc = read_json(dir / "gan_model.json");
  CHECK(model_doc.at("config").at("epochs") == 200);
  CHECK(model_doc.at("config").at("embedding_dim") == 416);
  CHECK(model_doc.at("config").at("generator_dims") == ordered_json::array({32, 288}));
}

TEST_CASE("tune writes a study plus best params that bench accepts as a model") {
  const fs::path dir = scratch_dir("tune_loop");
  const fs::path space = dir / "space.json";
  spill(space,
        "{\n"
        "  \"direction\": \"maximize\",\n"
        "  \"params\": [\n"
        "    {\"name\": \"learning_rate\", \"kind\": \"log_float\", \"low\": 0.05, \"high\": 0.3},\n"
        "    {\"name\": \"n_estimators\", \"kind\": \"int\", \"low\": 10, \"high\": 40},\n"
        "    {\"name\": \"max_depth\", \"kind\": \"int\", \"low\": 2, \"high\": 3}\n"
        "  ]\n"
        "}\n");

  const auto r = run_cli("tune --input " + fixture_csv() + " --target gbc-paper --trials 3" +
                         " --space " + space.string() + " --folds 3 --seed 5 --out-dir " +
                         dir.string());
  CHECK(r.exit_code == 0);

  const ordered_json study = read_json(dir / "study.json");
  CHECK(study.at("trials").size() == 3);

  const ordered_json best = read_json(dir / "best_params.json");
  CHECK(best.at("target") == "gbc-paper");
  CHECK(best.at("direction") == "maximize");
  CHECK(best.at("n_trials") == 3);
  const ordered_json& params = best.at("best_trial").at("params");
  CHECK(params.at("n_estimators").is_number_integer());
  CHECK(params.at("learning_rate").is_number_float());
  const auto depth = params.at("max_depth").get<std::int64_t>();
  CHECK(depth >= 2);
  CHECK(depth <= 3);

  // Feed the tuned parameters straight back into bench as a model spec.
  const fs::path bench_dir = scratch_dir("tune_loop_bench");
  const auto rb = run_cli("bench --input " + fixture_csv() + " --model " +
                          (dir / "best_params.json").string() + " --folds 3 --seed 5" +
                          " --config " + tiny_gan_config(bench_dir) + " --out-dir " +
                          bench_dir.string());
  CHECK(rb.exit_code == 0);
  const ordered_json bench = read_json(bench_dir / "bench.json");
  CHECK(bench.at("policies").at(0).at("cells").at(0).at("model") == "gbc-paper");
}

TEST_CASE("tune rejects an empty study with the tuning exit code") {
  const fs::path dir = scratch_dir("tune_empty");
  const auto r = run_cli("tune --input " + fixture_csv() + " --target gbc-paper --trials 0" +
                         " --out-dir " + dir.string());
  CHECK(r.exit_code == 4);
  CHECK(contains(r.output, "empty study"));
}

TEST_CASE("tune reports a missing search-space file as a tuning failure") {
  const fs::path dir = scratch_dir("tune_nospace");
  const auto r = run_cli("tune --input " + fixture_csv() + " --target gbc-paper --trials 1" +
                         " --space " + (dir / "absent.json").string() + " --out-dir " +
                         dir.string());
  CHECK(r.exit_code == 4);
  CHECK(contains(r.output, "error:"));
}

TEST_CASE("bundled search spaces resolve against their targets") {
  // One trial per space proves every declared parameter applies cleanly to
  // the preset (or the GAN config) it claims to tune.
  const fs::path base = scratch_dir("spaces_drift");
  const std::vector<std::string> targets = {"gan",           "xgb-paper",      "lgbm-paper",
                                            "etc-paper",     "catboost-paper", "gbc-paper"};
  for (const std::string& target : targets) {
    CAPTURE(target);
    const fs::path dir = base / target;
    fs::create_directories(dir);
    const std::string space = std::string(IMBTAB_SPACES_DIR) + "/" +
                              (target == "gan" ? "gan" : target) + ".json";
    const auto r = run_cli("tune --input " + fixture_csv() + " --target " + target +
                           " --trials 1 --space " + space + " --folds 3 --seed 11" +
                           " --out-dir " + dir.string());
    CHECK_MESSAGE(r.exit_code == 0, r.output);
    CHECK(fs::exists(dir / "best_params.json"));
  }
}

TEST_CASE("bench artifacts agree with each other and with reruns") {
  const fs::path dir = scratch_dir("bench");
  const std::string common = "bench --input " + fixture_csv() +
                             " --model gbc-paper --model etc-paper --folds 3 --seed 3" +
                             " --config " + tiny_gan_config(dir);
  const auto r = run_cli(common + " --out-dir " + dir.string());
  CHECK(r.exit_code == 0);
  CHECK(contains(r.output, "Imbalanced"));
  CHECK(contains(r.output, "Balanced (SMOTE)"));
  CHECK(contains(r.output, "Balanced (GAN)"));
  CHECK(contains(r.output, "Weighted Ensembled"));

  const ordered_json bench = read_json(dir / "bench.json");
  CHECK(bench.at("command") == "bench");
  CHECK(bench.at("mode") == "cv");
  CHECK(bench.at("dataset").at("rows") == 130);
  CHECK(bench.at("dataset").at("columns_before") == 6);
  CHECK(bench.at("dataset").at("columns") == 5);
  CHECK(bench.at("dataset").at("dropped_columns") == 1);
  CHECK(bench.at("dataset").at("class_counts") == ordered_json::array({90, 40}));

  REQUIRE(bench.at("policies").size() == 3);
  for (const auto& policy : bench.at("policies")) {
    REQUIRE(policy.at("cells").size() == 3);  // two members plus the ensemble
    REQUIRE(policy.at("weights").size() == 2);
    double total = 0.0;
    for (const auto& w : policy.at("weights")) total += w.get<double>();
    CHECK(total > 0.0);
    for (const auto& cell : policy.at("cells")) {
      CAPTURE(policy.at("policy").get<std::string>());
      CAPTURE(cell.at("model").get<std::string>());
      REQUIRE(cell.at("error").is_null());
      const auto& m = cell.at("metrics");
      const double acc = m.at("accuracy").get<double>();
      const double rmse = m.at("rmse").get<double>();
      CHECK(rmse == doctest::Approx(std::sqrt(1.0 - acc)).epsilon(1e-12));
    }
  }

  // bench.csv mirrors the JSON: header plus 9 data rows.
  std::istringstream csv(slurp(dir / "bench.csv"));
  std::string line;
  std::getline(csv, line);
  CHECK(line == "policy,model,label,accuracy,precision,recall,f1,weighted_f1,rmse,error");
  int rows = 0;
  while (std::getline(csv, line)) {
    if (!line.empty()) ++rows;
  }
  CHECK(rows == 9);

  // A rerun with the same seed lands byte-identical artifacts.
  const fs::path dir2 = scratch_dir("bench_rerun");
  const auto r2 = run_cli(common + " --jobs 2 --out-dir " + dir2.string());
  CHECK(r2.exit_code == 0);
  for (const char* name : {"bench.txt", "bench.csv", "bench.json"}) {
    CHECK_MESSAGE(slurp(dir / name) == slurp(dir2 / name), name << " differs across reruns");
  }
}

TEST_CASE("bench surfaces failing cells and exits with the bench code") {
  // Four minority rows cannot support the default smote neighborhood, and the
  // gbc validation split rejects the class outright.
  const fs::path dir = scratch_dir("bench_fail");
  const fs::path csv = dir / "tiny.csv";
  imbtab::data::write_csv(csv.string(), imbtab::test::random_table(28, 4, 3, 17));

  const auto r = run_cli("bench --input " + csv.string() +
                         " --model gbc-paper --folds 3 --seed 1 --config " +
                         tiny_gan_config(dir) + " --out-dir " + dir.string());
  CHECK(r.exit_code == 5);
  CHECK(contains(r.output, "cell failed:"));

  const ordered_json bench = read_json(dir / "bench.json");
  bool saw_error = false;
  for (const auto& policy : bench.at("policies")) {
    for (const auto& cell : policy.at("cells")) {
      if (!cell.at("error").is_null()) {
        saw_error = true;
        CHECK(cell.at("metrics").is_null());
      }
    }
  }
  CHECK(saw_error);
  CHECK(contains(slurp(dir / "bench.txt"), "failed"));
}

TEST_CASE("the usual help and error conventions hold") {
  CHECK(run_cli("--help").exit_code == 0);
  CHECK(run_cli("bench --help").exit_code == 0);
  const auto r = run_cli("frobnicate");
  CHECK(r.exit_code == 1);
}
