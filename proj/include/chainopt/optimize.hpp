#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <random>
#include <utility>
#include <vector>

#include "chainopt/genome.hpp"
#include "chainopt/pareto.hpp"
#include "chainopt/random.hpp"
#include "chainopt/tpe.hpp"

namespace chainopt {

/// Design search space: n_joint categorical joint choices plus n_joint-1
/// link lengths. The kernel-density model runs over the static length range
/// [0, l_max_init]; the dynamic budget bounds are enforced at projection.
struct SearchSpace {
  int n_joint = 6;
  LengthConfig lengths;

  MixedSpace mixed() const {
    MixedSpace m;
    m.cat_sizes.assign(static_cast<std::size_t>(n_joint), 3);
    m.cont_bounds.assign(static_cast<std::size_t>(n_joint - 1), {0.0, lengths.l_max_init});
    return m;
  }
};

struct MotpeConfig {
  int n_startup = 100;
  int n_total = 20000;
  int n_candidates = 24;
  double gamma_fraction = 0.1;
  double gamma_cap = 25.0;
  double bandwidth_scale = 0.1;
  std::uint64_t seed = 1;

  TpeConfig tpe() const {
    return {n_startup, n_candidates, gamma_fraction, gamma_cap, bandwidth_scale};
  }
};

/// One completed evaluation. `raw_joints` is the pre-remap categorical draw
/// the sampler conditions on; `genome` is what was actually evaluated.
/// Objectives are (-reachability total, torque total), both minimized.
struct Trial {
  int id = 0;
  std::vector<JointType> raw_joints;
  DesignGenome genome;
  Objective2 objectives{0.0, 0.0};
  bool failed = false;

  double e_reach() const { return -objectives[0]; }
  double e_torque() const { return objectives[1]; }
};

/// Append-only trial store with an incrementally maintained nondominated
/// front. Trials are never removed; the front is a set of trial indices.
class ParetoArchive {
public:
  void add(Trial trial) {
    const int idx = static_cast<int>(trials_.size());
    trial.id = idx;
    const Objective2 p = trial.objectives;
    trials_.push_back(std::move(trial));

    for (int f : front_) {
      if (dominates(trials_[f].objectives, p)) return; // dominated, front unchanged
    }
    std::vector<int> kept;
    kept.reserve(front_.size() + 1);
    for (int f : front_) {
      if (!dominates(p, trials_[f].objectives)) kept.push_back(f);
    }
    kept.push_back(idx);
    front_ = std::move(kept);
  }

  const std::vector<Trial>& trials() const { return trials_; }
  std::vector<int> front() const {
    std::vector<int> f = front_;
    std::sort(f.begin(), f.end());
    return f;
  }
  std::size_t size() const { return trials_.size(); }

private:
  std::vector<Trial> trials_;
  std::vector<int> front_;
};

struct Suggestion {
  std::vector<JointType> raw_joints;
  std::vector<double> partial_lengths;
};

namespace detail {

inline std::vector<JointType> cats_to_joints(const std::vector<int>& cats) {
  std::vector<JointType> joints;
  joints.reserve(cats.size());
  for (int c : cats) joints.push_back(static_cast<JointType>(c));
  return joints;
}

/// Clamp sampled lengths into the running budget, front to back.
inline std::vector<double> project_lengths(const std::vector<double>& sampled,
                                           const LengthConfig& cfg) {
  std::vector<double> out;
  out.reserve(sampled.size());
  for (double len : sampled) {
    const double cap = length_bound(out, cfg);
    out.push_back(std::clamp(len, 0.0, cap));
  }
  return out;
}

}  // namespace detail

/// Proposes the next raw joint draw and partial lengths. During startup the
/// lengths are drawn uniformly inside their dynamic bounds; afterwards the
/// TPE candidate is projected back into the budget by clamping.
inline Suggestion suggest(const std::vector<Trial>& history, const SearchSpace& space,
                          const MotpeConfig& cfg, std::mt19937_64& rng) {
  const TpeSampler sampler(space.mixed(), cfg.tpe());
  if (history.size() < static_cast<std::size_t>(cfg.n_startup) || history.size() < 2) {
    Suggestion s;
    std::uniform_int_distribution<int> cat(0, 2);
    for (int i = 0; i < space.n_joint; ++i) s.raw_joints.push_back(static_cast<JointType>(cat(rng)));
    for (int i = 0; i + 1 < space.n_joint; ++i) {
      const double cap = length_bound(s.partial_lengths, space.lengths);
      std::uniform_real_distribution<double> unit(0.0, cap);
      s.partial_lengths.push_back(cap > 0.0 ? unit(rng) : 0.0);
    }
    return s;
  }

  std::vector<RawSample> raw_history;
  std::vector<Objective2> objectives;
  raw_history.reserve(history.size());
  objectives.reserve(history.size());
  for (const Trial& t : history) {
    RawSample r;
    r.cats.reserve(t.raw_joints.size());
    for (JointType j : t.raw_joints) r.cats.push_back(static_cast<int>(j));
    r.conts.assign(t.genome.lengths.begin(), t.genome.lengths.end() - 1);
    raw_history.push_back(std::move(r));
    objectives.push_back(t.objectives);
  }
  const RawSample picked = sampler.suggest(raw_history, objectives, rng);
  Suggestion s;
  s.raw_joints = detail::cats_to_joints(picked.cats);
  s.partial_lengths = detail::project_lengths(picked.conts, space.lengths);
  return s;
}

struct Evaluation {
  double e_reach = 0.0;
  double e_torque = 0.0;
};

using EvalFn = std::function<Evaluation(const DesignGenome&)>;
using TrialCallback = std::function<void(const Trial&)>;

inline constexpr double kFailedTorque = 1e9;

/// The sequential suggest -> canonicalize -> close -> evaluate -> record
/// loop. Evaluation failures are recorded with worst-case objectives rather
/// than aborting. `warm_start` trials seed the archive (resume support).
inline ParetoArchive run_optimization(const EvalFn& eval_fn, const SearchSpace& space,
                                      const MotpeConfig& cfg,
                                      const TrialCallback& on_trial = {},
                                      const std::vector<Trial>& warm_start = {}) {
  ParetoArchive archive;
  for (const Trial& t : warm_start) archive.add(t);
  std::mt19937_64 rng(mix_seed(cfg.seed));
  while (archive.size() < static_cast<std::size_t>(cfg.n_total)) {
    const Suggestion s = suggest(archive.trials(), space, cfg, rng);
    Trial trial;
    trial.raw_joints = s.raw_joints;
    trial.genome = close_genome(canonicalize_joints(s.raw_joints), s.partial_lengths,
                                space.lengths);
    try {
      const Evaluation ev = eval_fn(trial.genome);
      trial.objectives = {-ev.e_reach, ev.e_torque};
    } catch (const std::exception&) {
      trial.objectives = {0.0, kFailedTorque};
      trial.failed = true;
    }
    archive.add(std::move(trial));
    if (on_trial) on_trial(archive.trials().back());
  }
  return archive;
}

}  // namespace chainopt
