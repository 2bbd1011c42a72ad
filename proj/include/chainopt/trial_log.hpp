#pragma once

#include <json.hpp>

#include <cstdint>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include "chainopt/config.hpp"
#include "chainopt/errors.hpp"
#include "chainopt/optimize.hpp"
#include "chainopt/pareto.hpp"

namespace chainopt {

namespace detail {

inline nlohmann::json joints_json(const std::vector<JointType>& joints) {
  nlohmann::json arr = nlohmann::json::array();
  for (JointType t : joints) arr.push_back(std::string(1, to_letter(t)));
  return arr;
}

inline std::vector<JointType> joints_from_json(const nlohmann::json& arr) {
  std::vector<JointType> joints;
  for (const auto& item : arr) joints.push_back(joint_from_letter(item.get<std::string>()[0]));
  return joints;
}

}  // namespace detail

inline nlohmann::json trial_to_json(const Trial& t, std::optional<int> front_rank,
                                    std::int64_t wall_ms) {
  nlohmann::json j;
  j["id"] = t.id;
  j["raw_joints"] = detail::joints_json(t.raw_joints);
  j["joints"] = detail::joints_json(t.genome.joints);
  j["lengths"] = t.genome.lengths;
  j["e_reach"] = t.e_reach();
  j["e_torque"] = t.e_torque();
  j["front_rank_at_end"] = front_rank ? nlohmann::json(*front_rank) : nlohmann::json(nullptr);
  j["wall_ms"] = wall_ms;
  j["failed"] = t.failed;
  return j;
}

inline Trial trial_from_json(const nlohmann::json& j) {
  Trial t;
  t.id = j.at("id").get<int>();
  t.raw_joints = detail::joints_from_json(j.at("raw_joints"));
  t.genome.joints = detail::joints_from_json(j.at("joints"));
  t.genome.lengths = j.at("lengths").get<std::vector<double>>();
  t.objectives = {-j.at("e_reach").get<double>(), j.at("e_torque").get<double>()};
  t.failed = j.value("failed", false);
  return t;
}

/// Streams one JSON object per trial under a header line carrying the full
/// config. Lines are flushed as they are written, so a truncated run leaves
/// a resumable prefix; finalize() fills in the end-of-run front ranks.
class TrialLogWriter {
public:
  TrialLogWriter(std::string path, const RunConfig& cfg,
                 std::vector<nlohmann::json> existing_lines = {})
      : path_(std::move(path)), lines_(std::move(existing_lines)) {
    header_["kind"] = "trial_log";
    header_["config"] = config_to_json(cfg);
    header_["config_hash"] = config_hash(cfg);
    out_.open(path_, std::ios::trunc);
    if (!out_) throw IoError("cannot open trial log for writing: " + path_);
    out_ << header_.dump() << "\n";
    for (const auto& line : lines_) out_ << line.dump() << "\n";
    out_.flush();
  }

  void append(const Trial& t, std::int64_t wall_ms) {
    lines_.push_back(trial_to_json(t, std::nullopt, wall_ms));
    out_ << lines_.back().dump() << "\n";
    out_.flush();
  }

  /// Rewrites the log with front_rank_at_end computed over the whole run.
  void finalize(const std::vector<Trial>& trials) {
    std::vector<Objective2> objectives;
    objectives.reserve(trials.size());
    for (const Trial& t : trials) objectives.push_back(t.objectives);
    const auto fronts = nondominated_sort(objectives);
    std::vector<int> rank(trials.size(), 0);
    for (std::size_t f = 0; f < fronts.size(); ++f) {
      for (int idx : fronts[f]) rank[static_cast<std::size_t>(idx)] = static_cast<int>(f);
    }
    out_.close();
    out_.open(path_, std::ios::trunc);
    if (!out_) throw IoError("cannot rewrite trial log: " + path_);
    out_ << header_.dump() << "\n";
    for (std::size_t i = 0; i < lines_.size(); ++i) {
      nlohmann::json line = lines_[i];
      const std::size_t id = line.at("id").get<std::size_t>();
      if (id < rank.size()) line["front_rank_at_end"] = rank[id];
      out_ << line.dump() << "\n";
    }
    out_.flush();
  }

private:
  std::string path_;
  std::ofstream out_;
  nlohmann::json header_;
  std::vector<nlohmann::json> lines_;
};

struct TrialLog {
  nlohmann::json config;
  std::string config_hash;
  std::vector<Trial> trials;
  std::vector<nlohmann::json> lines; // raw trial lines, preserved for resume
};

inline TrialLog read_trial_log(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open trial log: " + path);
  TrialLog log;
  std::string line;
  bool have_header = false;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
      throw ValidationError("trial log parse error: " + std::string(e.what()));
    }
    if (!have_header) {
      if (!j.is_object() || j.value("kind", "") != "trial_log") {
        throw ValidationError("trial log missing header line");
      }
      log.config = j.at("config");
      log.config_hash = j.value("config_hash", "");
      have_header = true;
    } else {
      log.trials.push_back(trial_from_json(j));
      log.lines.push_back(std::move(j));
    }
  }
  if (!have_header) throw ValidationError("trial log is empty: " + path);
  return log;
}

}  // namespace chainopt
