#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <numeric>
#include <random>
#include <vector>

#include "chainopt/errors.hpp"
#include "chainopt/pareto.hpp"

namespace chainopt {

/// Generic mixed search space: categorical dimensions with a fixed choice
/// count and continuous dimensions with static bounds.
struct MixedSpace {
  std::vector<int> cat_sizes;
  std::vector<std::array<double, 2>> cont_bounds;
};

struct RawSample {
  std::vector<int> cats;
  std::vector<double> conts;
};

struct TpeConfig {
  int n_startup = 100;
  int n_candidates = 24;
  double gamma_fraction = 0.1;
  double gamma_cap = 25.0;
  // Multiplier on the Scott-rule bandwidth. Raw Scott kernels are too wide to
  // aim at individual gaps in a front; shrinking them sharpens exploitation.
  double bandwidth_scale = 0.1;
};

/// Number of trials that land in the "good" partition under the capped
/// fraction rule.
inline int good_count(std::size_t n_trials, const TpeConfig& cfg) {
  const double g = std::min(cfg.gamma_fraction * static_cast<double>(n_trials), cfg.gamma_cap);
  return std::max(1, static_cast<int>(std::ceil(g - 1e-12)));
}

/// Partitions complete trials into (good, bad) index sets by ascending
/// nondominated rank; the boundary rank is broken by descending hypervolume
/// contribution against a reference derived from the observed worsts.
inline std::pair<std::vector<int>, std::vector<int>> split_good_bad(
    const std::vector<Objective2>& objectives, const TpeConfig& cfg) {
  const std::size_t n = objectives.size();
  if (n < 2) throw ValidationError("split_good_bad requires at least 2 trials");
  const std::size_t target = static_cast<std::size_t>(good_count(n, cfg));

  // Extract fronts only until the good set is filled.
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    if (objectives[a][0] != objectives[b][0]) return objectives[a][0] < objectives[b][0];
    return objectives[a][1] < objectives[b][1];
  });

  const Objective2 ref = reference_for(objectives);
  std::vector<int> good;
  std::vector<char> in_good(n, 0);
  std::vector<int> remaining = std::move(order);
  while (good.size() < target && !remaining.empty()) {
    std::vector<int> front;
    std::vector<int> rest;
    double best_f2 = std::numeric_limits<double>::infinity();
    Objective2 last{std::numeric_limits<double>::quiet_NaN(),
                    std::numeric_limits<double>::quiet_NaN()};
    for (int idx : remaining) {
      const Objective2& p = objectives[idx];
      const bool dup = !front.empty() && p[0] == last[0] && p[1] == last[1];
      if (p[1] < best_f2 || dup) {
        front.push_back(idx);
        best_f2 = std::min(best_f2, p[1]);
        last = p;
      } else {
        rest.push_back(idx);
      }
    }
    if (good.size() + front.size() <= target) {
      for (int idx : front) {
        good.push_back(idx);
        in_good[idx] = 1;
      }
    } else {
      std::vector<Objective2> pts;
      pts.reserve(front.size());
      for (int idx : front) pts.push_back(objectives[idx]);
      const std::vector<double> contrib = hypervolume_contributions(pts, ref);
      std::vector<std::size_t> by_contrib(front.size());
      std::iota(by_contrib.begin(), by_contrib.end(), 0);
      std::stable_sort(by_contrib.begin(), by_contrib.end(),
                       [&](std::size_t a, std::size_t b) { return contrib[a] > contrib[b]; });
      for (std::size_t k = 0; good.size() < target; ++k) {
        good.push_back(front[by_contrib[k]]);
        in_good[front[by_contrib[k]]] = 1;
      }
    }
    remaining = std::move(rest);
  }
  std::sort(good.begin(), good.end());
  std::vector<int> bad;
  bad.reserve(n - good.size());
  for (std::size_t i = 0; i < n; ++i) {
    if (!in_good[i]) bad.push_back(static_cast<int>(i));
  }
  return {std::move(good), std::move(bad)};
}

namespace detail {

inline double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

inline double log_normal_pdf(double z) {
  return -0.5 * z * z - 0.5 * std::log(2.0 * std::numbers::pi);
}

/// Kernel-density mixture fitted on a subset of observations: one component
/// per observation, truncated Gaussian kernels on continuous dimensions and
/// smoothed one-hot weights on categorical dimensions. The categorical
/// marginal reduces to add-one smoothed frequencies.
class ParzenSet {
public:
  ParzenSet(const MixedSpace& space, const std::vector<RawSample>& history,
            const std::vector<int>& members, double bandwidth_scale = 1.0)
      : space_(&space), members_(members) {
    const std::size_t n = members.size();
    const std::size_t d = space.cat_sizes.size() + space.cont_bounds.size();
    bandwidths_.resize(space.cont_bounds.size());
    for (std::size_t j = 0; j < space.cont_bounds.size(); ++j) {
      double mean = 0.0;
      for (int idx : members) mean += history[idx].conts[j];
      mean /= static_cast<double>(n);
      double var = 0.0;
      for (int idx : members) {
        const double dev = history[idx].conts[j] - mean;
        var += dev * dev;
      }
      var /= static_cast<double>(n);
      const double range = space.cont_bounds[j][1] - space.cont_bounds[j][0];
      const double scott = std::sqrt(var) *
                           std::pow(static_cast<double>(n), -1.0 / (static_cast<double>(d) + 4.0));
      bandwidths_[j] = std::max(bandwidth_scale * scott, 1e-3 * range);
    }
    history_ = &history;
  }

  double log_density(const RawSample& x) const {
    const std::size_t n = members_.size();
    double max_log = -std::numeric_limits<double>::infinity();
    std::vector<double> logs(n);
    for (std::size_t c = 0; c < n; ++c) {
      const RawSample& obs = (*history_)[members_[c]];
      double lg = 0.0;
      for (std::size_t j = 0; j < space_->cont_bounds.size(); ++j) {
        lg += log_truncnorm_pdf(x.conts[j], obs.conts[j], bandwidths_[j],
                                space_->cont_bounds[j][0], space_->cont_bounds[j][1]);
      }
      for (std::size_t j = 0; j < space_->cat_sizes.size(); ++j) {
        lg += std::log(cat_weight(obs.cats[j], x.cats[j], space_->cat_sizes[j]));
      }
      logs[c] = lg;
      max_log = std::max(max_log, lg);
    }
    double sum = 0.0;
    for (double lg : logs) sum += std::exp(lg - max_log);
    return max_log + std::log(sum / static_cast<double>(n));
  }

  RawSample sample(std::mt19937_64& rng) const {
    std::uniform_int_distribution<std::size_t> pick(0, members_.size() - 1);
    const RawSample& obs = (*history_)[members_[pick(rng)]];
    RawSample out;
    out.cats.resize(space_->cat_sizes.size());
    out.conts.resize(space_->cont_bounds.size());
    for (std::size_t j = 0; j < space_->cat_sizes.size(); ++j) {
      out.cats[j] = sample_category(obs.cats[j], space_->cat_sizes[j], rng);
    }
    for (std::size_t j = 0; j < space_->cont_bounds.size(); ++j) {
      out.conts[j] = sample_truncnorm(obs.conts[j], bandwidths_[j], space_->cont_bounds[j][0],
                                      space_->cont_bounds[j][1], rng);
    }
    return out;
  }

private:
  double cat_weight(int obs, int value, int k) const {
    const double n = static_cast<double>(members_.size());
    return ((obs == value ? n : 0.0) + 1.0) / (n + static_cast<double>(k));
  }

  int sample_category(int obs, int k, std::mt19937_64& rng) const {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    double u = unit(rng);
    for (int c = 0; c < k; ++c) {
      u -= cat_weight(obs, c, k);
      if (u <= 0.0) return c;
    }
    return k - 1;
  }

  static double log_truncnorm_pdf(double x, double mu, double h, double lo, double hi) {
    if (x < lo || x > hi) return -std::numeric_limits<double>::infinity();
    const double mass = normal_cdf((hi - mu) / h) - normal_cdf((lo - mu) / h);
    return log_normal_pdf((x - mu) / h) - std::log(h) - std::log(std::max(mass, 1e-300));
  }

  static double sample_truncnorm(double mu, double h, double lo, double hi,
                                 std::mt19937_64& rng) {
    std::normal_distribution<double> gauss(mu, h);
    for (int tries = 0; tries < 256; ++tries) {
      const double x = gauss(rng);
      if (x >= lo && x <= hi) return x;
    }
    std::uniform_real_distribution<double> fallback(lo, hi);
    return fallback(rng);
  }

  const MixedSpace* space_;
  const std::vector<RawSample>* history_ = nullptr;
  std::vector<int> members_;
  std::vector<double> bandwidths_;
};

}  // namespace detail

/// Multi-objective TPE over a mixed space: uniform draws during startup,
/// afterwards candidates are drawn from the good-set density and ranked by
/// the density ratio good/bad.
class TpeSampler {
public:
  TpeSampler(MixedSpace space, TpeConfig cfg) : space_(std::move(space)), cfg_(cfg) {}

  const MixedSpace& space() const { return space_; }
  const TpeConfig& config() const { return cfg_; }

  RawSample sample_uniform(std::mt19937_64& rng) const {
    RawSample s;
    s.cats.reserve(space_.cat_sizes.size());
    s.conts.reserve(space_.cont_bounds.size());
    for (int k : space_.cat_sizes) {
      std::uniform_int_distribution<int> cat(0, k - 1);
      s.cats.push_back(cat(rng));
    }
    for (const auto& b : space_.cont_bounds) {
      std::uniform_real_distribution<double> unit(b[0], b[1]);
      s.conts.push_back(unit(rng));
    }
    return s;
  }

  RawSample suggest(const std::vector<RawSample>& history,
                    const std::vector<Objective2>& objectives, std::mt19937_64& rng) const {
    if (history.size() < static_cast<std::size_t>(cfg_.n_startup) || history.size() < 2) {
      return sample_uniform(rng);
    }
    const auto [good, bad] = split_good_bad(objectives, cfg_);
    const detail::ParzenSet good_model(space_, history, good, cfg_.bandwidth_scale);
    const detail::ParzenSet bad_model(space_, history, bad, cfg_.bandwidth_scale);
    RawSample best;
    double best_score = -std::numeric_limits<double>::infinity();
    for (int c = 0; c < std::max(1, cfg_.n_candidates); ++c) {
      RawSample cand = good_model.sample(rng);
      const double score = good_model.log_density(cand) - bad_model.log_density(cand);
      if (score > best_score) {
        best_score = score;
        best = std::move(cand);
      }
    }
    return best;
  }

private:
  MixedSpace space_;
  TpeConfig cfg_;
};

}  // namespace chainopt
