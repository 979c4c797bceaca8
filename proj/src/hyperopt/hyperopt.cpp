#include "imbtab/hyperopt/hyperopt.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <set>
#include <thread>

#include "imbtab/core/error.hpp"

namespace imbtab::hyperopt {
namespace {

bool is_ranged(ParamKind kind) { return kind != ParamKind::categorical; }

/// Sampling space: log-uniform parameters are handled in log space so the
/// KDE sees the scale the search is actually uniform over.
double to_space(const ParamSpec& spec, double value) {
  return spec.kind == ParamKind::float_log_uniform ? std::log(value) : value;
}

double from_space(const ParamSpec& spec, double value) {
  return spec.kind == ParamKind::float_log_uniform ? std::exp(value) : value;
}

double population_std(const std::vector<double>& xs) {
  double mean = 0.0;
  for (double x : xs) mean += x;
  mean /= static_cast<double>(xs.size());
  double var = 0.0;
  for (double x : xs) var += (x - mean) * (x - mean);
  return std::sqrt(var / static_cast<double>(xs.size()));
}

/// Gaussian mixture log-density with one component per point, shared
/// bandwidth.
double log_kde(const std::vector<double>& points, double bandwidth, double x) {
  double acc = 0.0;
  for (double mu : points) {
    const double z = (x - mu) / bandwidth;
    acc += std::exp(-0.5 * z * z);
  }
  const double norm =
      static_cast<double>(points.size()) * bandwidth * std::sqrt(2.0 * std::numbers::pi);
  return std::log(std::max(acc, 1e-300)) - std::log(norm);
}

double median_of(std::vector<double> xs) {
  std::sort(xs.begin(), xs.end());
  const std::size_t n = xs.size();
  return n % 2 == 1 ? xs[n / 2] : 0.5 * (xs[n / 2 - 1] + xs[n / 2]);
}

}  // namespace

void ParamSpec::validate() const {
  if (name.empty()) throw Error("parameter name must not be empty");
  if (is_ranged(kind)) {
    if (!(low < high)) {
      throw Error("parameter " + name + ": low must be < high");
    }
    if (kind == ParamKind::float_log_uniform && !(low > 0.0)) {
      throw Error("parameter " + name + ": log-uniform bounds must be positive");
    }
  } else {
    if (choices.empty()) throw Error("parameter " + name + ": choices must not be empty");
    std::set<std::string> unique(choices.begin(), choices.end());
    if (unique.size() != choices.size()) {
      throw Error("parameter " + name + ": choices must be unique");
    }
  }
}

namespace {

ParamSpec make_spec(std::string name, ParamKind kind, double low, double high,
                    std::vector<std::string> choices) {
  ParamSpec s;
  s.name = std::move(name);
  s.kind = kind;
  s.low = low;
  s.high = high;
  s.choices = std::move(choices);
  s.validate();
  return s;
}

}  // namespace

ParamSpec ParamSpec::float_uniform(std::string name, double low, double high) {
  return make_spec(std::move(name), ParamKind::float_uniform, low, high, {});
}

ParamSpec ParamSpec::float_log_uniform(std::string name, double low, double high) {
  return make_spec(std::move(name), ParamKind::float_log_uniform, low, high, {});
}

ParamSpec ParamSpec::int_uniform(std::string name, std::int64_t low, std::int64_t high) {
  return make_spec(std::move(name), ParamKind::int_uniform, static_cast<double>(low),
                   static_cast<double>(high), {});
}

ParamSpec ParamSpec::categorical(std::string name, std::vector<std::string> choices) {
  return make_spec(std::move(name), ParamKind::categorical, 0.0, 0.0,
                   std::move(choices));
}

std::optional<double> Trial::observed_value() const {
  if (state == TrialState::complete) return final_value;
  if (state == TrialState::pruned && !intermediate.empty()) {
    return intermediate.back().second;
  }
  return std::nullopt;
}

std::size_t Study::trial_count() const {
  std::lock_guard lock(mutex_);
  return trials_.size();
}

std::vector<Trial> Study::trials() const {
  std::lock_guard lock(mutex_);
  return trials_;
}

Trial Study::trial(int id) const {
  std::lock_guard lock(mutex_);
  return trials_.at(static_cast<std::size_t>(id));
}

TrialHandle Study::start_trial() {
  std::lock_guard lock(mutex_);
  Trial t;
  t.id = static_cast<int>(trials_.size());
  trials_.push_back(std::move(t));
  return TrialHandle(this, trials_.back().id,
                     derive_seed(config_.seed, static_cast<std::uint64_t>(trials_.back().id)));
}

void Study::append_trial(Trial t) {
  std::lock_guard lock(mutex_);
  if (t.id != static_cast<int>(trials_.size())) {
    throw Error("trial id " + std::to_string(t.id) + " breaks dense ordering, expected " +
                std::to_string(trials_.size()));
  }
  if ((t.state == TrialState::complete) != t.final_value.has_value()) {
    throw Error("trial " + std::to_string(t.id) +
                ": final_value must be present exactly for complete trials");
  }
  if (t.state == TrialState::pruned && t.intermediate.empty()) {
    throw Error("trial " + std::to_string(t.id) +
                ": pruned trials need at least one intermediate report");
  }
  trials_.push_back(std::move(t));
}

Trial Study::best_trial() const {
  std::lock_guard lock(mutex_);
  const Trial* best = nullptr;
  for (const auto& t : trials_) {
    if (t.state != TrialState::complete) continue;
    if (best == nullptr) {
      best = &t;
      continue;
    }
    const double v = *t.final_value;
    const double b = *best->final_value;
    const bool better = config_.direction == Direction::maximize ? v > b : v < b;
    if (better) best = &t;  // strict: ties keep the earlier id
  }
  if (best == nullptr) throw NoCompleteTrialsError("study has no complete trials");
  return *best;
}

std::vector<Study::Observation> Study::observations_for(const ParamSpec& spec) const {
  std::vector<Observation> obs;
  for (const auto& t : trials_) {
    const auto value = t.observed_value();
    if (!value) continue;
    const auto it = t.params.find(spec.name);
    if (it == t.params.end()) continue;
    if (t.specs.at(spec.name).kind != spec.kind) continue;
    Observation o;
    o.objective = *value;
    if (spec.kind == ParamKind::categorical) {
      o.label = std::get<std::string>(it->second);
    } else if (spec.kind == ParamKind::int_uniform) {
      o.param = static_cast<double>(std::get<std::int64_t>(it->second));
    } else {
      o.param = to_space(spec, std::get<double>(it->second));
    }
    obs.push_back(std::move(o));
  }
  return obs;
}

ParamValue Study::suggest_locked_path(int trial_id, const ParamSpec& spec, Rng& rng) {
  spec.validate();

  std::vector<Observation> obs;
  {
    std::lock_guard lock(mutex_);
    auto& t = trials_[static_cast<std::size_t>(trial_id)];
    const auto cached = t.params.find(spec.name);
    if (cached != t.params.end()) {
      if (t.specs.at(spec.name) != spec) {
        throw SpecConflictError("parameter " + spec.name +
                                " re-declared with a different spec in trial " +
                                std::to_string(trial_id));
      }
      return cached->second;
    }
    obs = observations_for(spec);
  }

  const auto uniform_draw = [&]() -> ParamValue {
    switch (spec.kind) {
      case ParamKind::float_uniform:
        return rng.uniform(spec.low, spec.high);
      case ParamKind::float_log_uniform:
        return rng.log_uniform(spec.low, spec.high);
      case ParamKind::int_uniform: {
        const auto lo = static_cast<std::int64_t>(spec.low);
        const auto hi = static_cast<std::int64_t>(spec.high);
        return lo + static_cast<std::int64_t>(
                        rng.uniform_int(static_cast<std::uint64_t>(hi - lo + 1)));
      }
      case ParamKind::categorical:
        return spec.choices[rng.uniform_int(spec.choices.size())];
    }
    throw Error("unreachable parameter kind");
  };

  ParamValue value;
  const bool use_tpe = config_.sampler.kind == SamplerKind::tpe &&
                       static_cast<int>(obs.size()) >= config_.sampler.n_startup;
  if (!use_tpe) {
    value = uniform_draw();
  } else {
    // Direction-aware sort, best first; the best ceil(gamma*n) observations
    // form the "good" density l, the rest the "bad" density g.
    std::stable_sort(obs.begin(), obs.end(), [&](const auto& a, const auto& b) {
      return config_.direction == Direction::maximize ? a.objective > b.objective
                                                      : a.objective < b.objective;
    });
    const auto n = obs.size();
    const auto n_good = static_cast<std::size_t>(
        std::ceil(config_.sampler.gamma_fraction * static_cast<double>(n)));
    if (n_good == 0 || n_good >= n) {
      value = uniform_draw();
    } else if (spec.kind == ParamKind::categorical) {
      // Category frequencies with add-one smoothing on both sides.
      const auto k = spec.choices.size();
      std::vector<double> l(k, 1.0), g(k, 1.0);
      const auto index_of = [&](const std::string& label) {
        return static_cast<std::size_t>(
            std::find(spec.choices.begin(), spec.choices.end(), label) -
            spec.choices.begin());
      };
      for (std::size_t i = 0; i < n; ++i) {
        const auto c = index_of(obs[i].label);
        if (c >= k) continue;  // stale choice no longer in the spec
        (i < n_good ? l : g)[c] += 1.0;
      }
      double l_total = 0.0, g_total = 0.0;
      for (std::size_t c = 0; c < k; ++c) {
        l_total += l[c];
        g_total += g[c];
      }
      // Draw candidates from l, keep the drawn category maximizing l/g.
      std::size_t best = 0;
      double best_ratio = -1.0;
      for (int cand = 0; cand < config_.sampler.n_ei_candidates; ++cand) {
        const double u = rng.uniform() * l_total;
        double acc = 0.0;
        std::size_t c = 0;
        for (; c < k; ++c) {
          acc += l[c];
          if (u < acc) break;
        }
        if (c >= k) c = k - 1;
        const double ratio = (l[c] / l_total) / (g[c] / g_total);
        if (ratio > best_ratio) {
          best_ratio = ratio;
          best = c;
        }
      }
      value = spec.choices[best];
    } else {
      std::vector<double> good, bad, all;
      for (std::size_t i = 0; i < n; ++i) {
        (i < n_good ? good : bad).push_back(obs[i].param);
        all.push_back(obs[i].param);
      }
      const double lo = spec.kind == ParamKind::float_log_uniform
                            ? std::log(spec.low) : spec.low;
      const double hi = spec.kind == ParamKind::float_log_uniform
                            ? std::log(spec.high) : spec.high;
      // Scott's factor n^(-1/5) per side, with the dispersion pooled over all
      // observations of this parameter. A per-side sigma collapses once the
      // good side fills with near-identical values, freezing the search at
      // the incumbent; the pooled estimate keeps proposals spread until the
      // whole observation mass concentrates, which anneals the search
      // naturally. Floored so degenerate inputs keep a usable kernel width.
      const double floor_bw = 1e-3 * (hi - lo);
      const double sigma_pool = population_std(all);
      const auto bandwidth = [&](const std::vector<double>& side) {
        return std::max(
            sigma_pool * std::pow(static_cast<double>(side.size()), -0.2),
            floor_bw);
      };
      const double h_good = bandwidth(good);
      const double h_bad = bandwidth(bad);

      double best_x = 0.0;
      double best_score = -std::numeric_limits<double>::infinity();
      for (int cand = 0; cand < config_.sampler.n_ei_candidates; ++cand) {
        double x = good[rng.uniform_int(good.size())] + rng.normal() * h_good;
        x = std::clamp(x, lo, hi);
        if (spec.kind == ParamKind::int_uniform) {
          x = std::clamp(std::round(x), spec.low, spec.high);
        }
        const double score = log_kde(good, h_good, x) - log_kde(bad, h_bad, x);
        if (score > best_score) {
          best_score = score;
          best_x = x;
        }
      }
      if (spec.kind == ParamKind::int_uniform) {
        value = static_cast<std::int64_t>(best_x);
      } else {
        value = from_space(spec, best_x);
      }
    }
  }

  std::lock_guard lock(mutex_);
  auto& t = trials_[static_cast<std::size_t>(trial_id)];
  t.params[spec.name] = value;
  t.specs[spec.name] = spec;
  return value;
}

PruneDecision Study::report(int trial_id, int step, double value) {
  std::lock_guard lock(mutex_);
  auto& t = trials_[static_cast<std::size_t>(trial_id)];
  if (t.state != TrialState::running) {
    throw Error("report on finished trial " + std::to_string(trial_id));
  }
  if (!t.intermediate.empty() && step <= t.intermediate.back().first) {
    throw OutOfOrderStepError("trial " + std::to_string(trial_id) + ": step " +
                              std::to_string(step) + " not after step " +
                              std::to_string(t.intermediate.back().first));
  }
  t.intermediate.emplace_back(step, value);

  if (step < config_.pruner.n_warmup_steps) return PruneDecision::keep_running;

  std::vector<double> peers;
  for (const auto& other : trials_) {
    if (other.state != TrialState::complete) continue;
    for (const auto& [s, v] : other.intermediate) {
      if (s == step) {
        peers.push_back(v);
        break;
      }
    }
  }
  if (static_cast<int>(peers.size()) < config_.pruner.n_min_trials) {
    return PruneDecision::keep_running;
  }
  const double med = median_of(std::move(peers));
  const bool worse = config_.direction == Direction::maximize ? value < med : value > med;
  return worse ? PruneDecision::prune : PruneDecision::keep_running;
}

void Study::finish(int trial_id, TrialState state, std::optional<double> value,
                   std::string reason) {
  std::lock_guard lock(mutex_);
  auto& t = trials_[static_cast<std::size_t>(trial_id)];
  if (state == TrialState::pruned && t.intermediate.empty()) {
    // A prune signal without any report carries no information; record the
    // anomaly instead of violating the pruned-trial invariant.
    t.state = TrialState::failed;
    t.failure_reason = "pruned without an intermediate report";
    return;
  }
  t.state = state;
  t.final_value = value;
  t.failure_reason = std::move(reason);
}

ParamValue TrialHandle::suggest(const ParamSpec& spec) {
  return study_->suggest_locked_path(id_, spec, rng_);
}

double TrialHandle::suggest_float(const std::string& name, double low, double high) {
  return std::get<double>(suggest(ParamSpec::float_uniform(name, low, high)));
}

double TrialHandle::suggest_log_float(const std::string& name, double low, double high) {
  return std::get<double>(suggest(ParamSpec::float_log_uniform(name, low, high)));
}

std::int64_t TrialHandle::suggest_int(const std::string& name, std::int64_t low,
                                      std::int64_t high) {
  return std::get<std::int64_t>(suggest(ParamSpec::int_uniform(name, low, high)));
}

std::string TrialHandle::suggest_categorical(const std::string& name,
                                             std::vector<std::string> choices) {
  return std::get<std::string>(suggest(ParamSpec::categorical(name, std::move(choices))));
}

PruneDecision TrialHandle::report_and_check_prune(int step, double value) {
  return study_->report(id_, step, value);
}

void run_study(Study& study, const std::function<double(TrialHandle&)>& objective,
               int n_trials, int jobs) {
  const auto run_one = [&]() {
    TrialHandle handle = study.start_trial();
    try {
      const double value = objective(handle);
      study.finish(handle.id(), TrialState::complete, value, "");
    } catch (const Pruned&) {
      study.finish(handle.id(), TrialState::pruned, std::nullopt, "");
    } catch (const std::exception& e) {
      study.finish(handle.id(), TrialState::failed, std::nullopt, e.what());
    } catch (...) {
      study.finish(handle.id(), TrialState::failed, std::nullopt, "unknown error");
    }
  };

  if (jobs <= 1 || n_trials <= 1) {
    for (int i = 0; i < n_trials; ++i) run_one();
    return;
  }
  std::atomic<int> remaining(n_trials);
  const int workers = std::min(jobs, n_trials);
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(workers));
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&]() {
      while (remaining.fetch_sub(1) > 0) run_one();
    });
  }
  for (auto& th : pool) th.join();
}

}  // namespace imbtab::hyperopt
