#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "imbtab/core/rng.hpp"

namespace imbtab::hyperopt {

enum class ParamKind { float_uniform, float_log_uniform, int_uniform, categorical };

/// Declares one tunable parameter. Ranged kinds use [low, high] (inclusive
/// for integers); categoricals list their choices.
struct ParamSpec {
  std::string name;
  ParamKind kind = ParamKind::float_uniform;
  double low = 0.0;
  double high = 0.0;
  std::vector<std::string> choices;

  void validate() const;
  bool operator==(const ParamSpec&) const = default;

  static ParamSpec float_uniform(std::string name, double low, double high);
  static ParamSpec float_log_uniform(std::string name, double low, double high);
  static ParamSpec int_uniform(std::string name, std::int64_t low, std::int64_t high);
  static ParamSpec categorical(std::string name, std::vector<std::string> choices);
};

using ParamValue = std::variant<double, std::int64_t, std::string>;

enum class TrialState { running, complete, pruned, failed };

struct Trial {
  int id = 0;
  std::map<std::string, ParamValue> params;
  std::map<std::string, ParamSpec> specs;  // spec under which each param was drawn
  std::vector<std::pair<int, double>> intermediate;
  TrialState state = TrialState::running;
  std::optional<double> final_value;
  std::string failure_reason;

  /// Value this trial contributes to sampler statistics: the final value when
  /// complete, the last intermediate report when pruned, absent otherwise.
  std::optional<double> observed_value() const;
};

enum class Direction { maximize, minimize };
enum class SamplerKind { tpe, random };

struct SamplerConfig {
  SamplerKind kind = SamplerKind::tpe;
  int n_startup = 10;          // uniform trials before TPE engages
  double gamma_fraction = 0.25;  // share of observations forming the "good" side
  int n_ei_candidates = 24;
};

struct PrunerConfig {
  int n_warmup_steps = 5;  // never prune before this step
  int n_min_trials = 4;    // completed trials needed at a step to judge it
};

struct StudyConfig {
  Direction direction = Direction::maximize;
  SamplerConfig sampler;
  PrunerConfig pruner;
  std::uint64_t seed = 0;
};

enum class PruneDecision { keep_running, prune };

/// Thrown by objectives to accept a prune decision; run_study converts it to
/// trial state pruned. Deliberately not an Error: it is control flow.
struct Pruned {};

class TrialHandle;

/// Append-only collection of trials plus the sampler/pruner that serve them.
/// Trial creation, parameter storage, and sampler reads are serialized by an
/// internal mutex, so concurrent trial execution is safe; determinism is
/// guaranteed only for sequential execution.
class Study {
 public:
  explicit Study(StudyConfig config) : config_(std::move(config)) {}

  /// Movable for factory-style construction only; never move a study that
  /// other threads are using.
  Study(Study&& other) noexcept
      : config_(std::move(other.config_)), trials_(std::move(other.trials_)) {}
  Study& operator=(Study&&) = delete;
  Study(const Study&) = delete;
  Study& operator=(const Study&) = delete;

  const StudyConfig& config() const { return config_; }
  std::size_t trial_count() const;
  std::vector<Trial> trials() const;  // snapshot copy
  Trial trial(int id) const;

  /// Starts a new running trial and returns its handle; ids are dense and
  /// increasing.
  TrialHandle start_trial();

  /// Appends a finished trial verbatim (deserialization and fixtures). The id
  /// must equal the current trial count; state invariants are enforced.
  void append_trial(Trial t);

  /// Best complete trial, direction-aware; ties resolve to the lowest id.
  Trial best_trial() const;

 private:
  friend class TrialHandle;
  friend void run_study(Study&, const std::function<double(TrialHandle&)>&, int, int);

  struct Observation {
    double param;       // value in sampling space (log space for log kind)
    std::string label;  // categorical choice
    double objective;
  };

  ParamValue suggest_locked_path(int trial_id, const ParamSpec& spec, Rng& rng);
  std::vector<Observation> observations_for(const ParamSpec& spec) const;
  PruneDecision report(int trial_id, int step, double value);
  void finish(int trial_id, TrialState state, std::optional<double> value,
              std::string reason);

  StudyConfig config_;
  std::vector<Trial> trials_;
  mutable std::mutex mutex_;
};

/// Live view of one running trial: the define-by-run surface an objective
/// sees. Parameter draws use a per-trial RNG stream derived from the study
/// seed and trial id.
class TrialHandle {
 public:
  int id() const { return id_; }

  /// Generic suggest; re-suggesting a name returns the cached value, and
  /// re-declaring it with a different spec throws SpecConflictError.
  ParamValue suggest(const ParamSpec& spec);

  double suggest_float(const std::string& name, double low, double high);
  double suggest_log_float(const std::string& name, double low, double high);
  std::int64_t suggest_int(const std::string& name, std::int64_t low, std::int64_t high);
  std::string suggest_categorical(const std::string& name,
                                  std::vector<std::string> choices);

  /// Records an intermediate objective value at the given step (strictly
  /// increasing per trial) and asks the median pruner for a verdict.
  PruneDecision report_and_check_prune(int step, double value);

 private:
  friend class Study;
  TrialHandle(Study* study, int id, std::uint64_t stream_seed)
      : study_(study), id_(id), rng_(stream_seed) {}

  Study* study_;
  int id_;
  Rng rng_;
};

/// Runs n_trials objective evaluations. Objectives return the final value,
/// throw Pruned to stop early (state pruned), or throw anything else (state
/// failed, reason recorded); nothing propagates. jobs > 1 runs trials
/// concurrently; jobs == 1 is deterministic in the study seed.
void run_study(Study& study,
               const std::function<double(TrialHandle&)>& objective,
               int n_trials, int jobs = 1);

}  // namespace imbtab::hyperopt
