#pragma once

#include <json.hpp>

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "chainopt/chain.hpp"
#include "chainopt/errors.hpp"
#include "chainopt/genome.hpp"
#include "chainopt/ik.hpp"
#include "chainopt/optimize.hpp"
#include "chainopt/workspace.hpp"

namespace chainopt {

/// Everything one run needs. Defaults reproduce the 6-DOF desk-scale
/// experiment geometry: 0.6 m arm, 0.3 m link cap, 0.2 m voxels over a
/// 1 x 1 x 0.6 m box, 30 postures per voxel, +-3*pi/4 joint limits.
struct RunConfig {
  int n_joint = 6;
  double joint_limit = kDefaultJointLimit;
  LengthConfig lengths;
  MassParams masses;
  WorkspaceSpec workspace;
  IkConfig ik;
  MotpeConfig motpe;
  double empty_voxel_torque_penalty = 0.0;
  int n_threads = 0; // 0 = hardware concurrency
  std::string output_dir = "out";

  SearchSpace search_space() const { return {n_joint, lengths}; }
  EvalOptions eval_options() const {
    return {joint_limit, empty_voxel_torque_penalty, n_threads};
  }
};

namespace detail {

class ConfigReader {
public:
  ConfigReader(nlohmann::json obj, std::string path)
      : obj_(std::move(obj)), path_(std::move(path)) {
    if (!obj_.is_object()) throw ValidationError(path_ + ": expected an object");
  }

  ~ConfigReader() = default;

  void finish() const {
    for (const auto& [key, value] : obj_.items()) {
      if (std::find(seen_.begin(), seen_.end(), key) == seen_.end()) {
        throw ValidationError(path_ + key + ": unknown key");
      }
    }
  }

  bool has(const std::string& key) {
    seen_.push_back(key);
    return obj_.contains(key);
  }

  template <typename T>
  void read(const std::string& key, T& out) {
    if (!has(key)) return;
    try {
      out = obj_.at(key).get<T>();
    } catch (const nlohmann::json::exception&) {
      throw ValidationError(path_ + key + ": wrong type");
    }
  }

  void read_interval(const std::string& key, double& lo, double& hi) {
    if (!has(key)) return;
    const auto& v = obj_.at(key);
    if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number()) {
      throw ValidationError(path_ + key + ": expected [min, max]");
    }
    lo = v[0].get<double>();
    hi = v[1].get<double>();
    if (!(hi > lo)) throw ValidationError(path_ + key + ": max must exceed min");
  }

  nlohmann::json child(const std::string& key) {
    seen_.push_back(key);
    return obj_.contains(key) ? obj_.at(key) : nlohmann::json::object();
  }

  const std::string& path() const { return path_; }

private:
  nlohmann::json obj_;
  std::string path_;
  std::vector<std::string> seen_;
};

inline void require_positive(double v, const std::string& path) {
  if (!(v > 0.0)) throw ValidationError(path + ": must be positive");
}

inline void require_at_least(int v, int min, const std::string& path) {
  if (v < min) throw ValidationError(path + ": must be at least " + std::to_string(min));
}

}  // namespace detail

inline RunConfig config_from_json(const nlohmann::json& root) {
  RunConfig cfg;
  detail::ConfigReader top(root, "");
  top.read("n_joint", cfg.n_joint);
  top.read("joint_limit", cfg.joint_limit);
  top.read("empty_voxel_torque_penalty", cfg.empty_voxel_torque_penalty);
  top.read("n_threads", cfg.n_threads);
  top.read("output_dir", cfg.output_dir);

  {
    detail::ConfigReader r(top.child("lengths"), "lengths.");
    r.read("total", cfg.lengths.l_total);
    r.read("max_init", cfg.lengths.l_max_init);
    r.finish();
  }
  {
    detail::ConfigReader r(top.child("masses"), "masses.");
    r.read("motor", cfg.masses.motor_mass);
    r.read("density", cfg.masses.density);
    r.read("link_radius", cfg.masses.link_radius);
    r.read("gravity", cfg.masses.gravity);
    r.finish();
  }
  {
    detail::ConfigReader r(top.child("workspace"), "workspace.");
    r.read_interval("x", cfg.workspace.x_min, cfg.workspace.x_max);
    r.read_interval("y", cfg.workspace.y_min, cfg.workspace.y_max);
    r.read_interval("z", cfg.workspace.z_min, cfg.workspace.z_max);
    r.read("d_voxel", cfg.workspace.d_voxel);
    r.read("n_rand", cfg.workspace.n_rand);
    r.read("pose_seed", cfg.workspace.pose_seed);
    r.finish();
  }
  {
    detail::ConfigReader r(top.child("ik"), "ik.");
    r.read("max_iters", cfg.ik.max_iters);
    r.read("damping", cfg.ik.damping);
    r.read("pos_tol", cfg.ik.pos_tol);
    r.read("ori_tol", cfg.ik.ori_tol);
    r.read("n_restarts", cfg.ik.n_restarts);
    r.read("restart_seed", cfg.ik.restart_seed);
    r.finish();
  }
  {
    detail::ConfigReader r(top.child("motpe"), "motpe.");
    r.read("n_startup", cfg.motpe.n_startup);
    r.read("n_total", cfg.motpe.n_total);
    r.read("n_candidates", cfg.motpe.n_candidates);
    r.read("gamma_fraction", cfg.motpe.gamma_fraction);
    r.read("gamma_cap", cfg.motpe.gamma_cap);
    r.read("bandwidth_scale", cfg.motpe.bandwidth_scale);
    r.read("seed", cfg.motpe.seed);
    r.finish();
  }
  top.finish();

  detail::require_at_least(cfg.n_joint, 1, "n_joint");
  detail::require_positive(cfg.joint_limit, "joint_limit");
  detail::require_positive(cfg.lengths.l_total, "lengths.total");
  detail::require_positive(cfg.lengths.l_max_init, "lengths.max_init");
  detail::require_positive(cfg.masses.motor_mass, "masses.motor");
  detail::require_positive(cfg.masses.density, "masses.density");
  detail::require_positive(cfg.masses.link_radius, "masses.link_radius");
  detail::require_positive(cfg.masses.gravity, "masses.gravity");
  detail::require_positive(cfg.workspace.d_voxel, "workspace.d_voxel");
  detail::require_at_least(cfg.workspace.n_rand, 1, "workspace.n_rand");
  detail::require_at_least(cfg.ik.max_iters, 1, "ik.max_iters");
  detail::require_positive(cfg.ik.pos_tol, "ik.pos_tol");
  detail::require_positive(cfg.ik.ori_tol, "ik.ori_tol");
  detail::require_at_least(cfg.ik.n_restarts, 1, "ik.n_restarts");
  detail::require_at_least(cfg.motpe.n_candidates, 1, "motpe.n_candidates");
  detail::require_positive(cfg.motpe.bandwidth_scale, "motpe.bandwidth_scale");
  detail::require_at_least(cfg.motpe.n_total, 1, "motpe.n_total");
  if (cfg.motpe.n_startup > cfg.motpe.n_total) {
    throw ValidationError("motpe.n_startup: must not exceed motpe.n_total");
  }
  if (cfg.empty_voxel_torque_penalty < 0.0) {
    throw ValidationError("empty_voxel_torque_penalty: must be nonnegative");
  }
  if (cfg.n_threads < 0) throw ValidationError("n_threads: must be nonnegative");
  return cfg;
}

inline nlohmann::json config_to_json(const RunConfig& cfg) {
  nlohmann::json j;
  j["n_joint"] = cfg.n_joint;
  j["joint_limit"] = cfg.joint_limit;
  j["lengths"] = {{"total", cfg.lengths.l_total}, {"max_init", cfg.lengths.l_max_init}};
  j["masses"] = {{"motor", cfg.masses.motor_mass},
                 {"density", cfg.masses.density},
                 {"link_radius", cfg.masses.link_radius},
                 {"gravity", cfg.masses.gravity}};
  j["workspace"] = {{"x", {cfg.workspace.x_min, cfg.workspace.x_max}},
                    {"y", {cfg.workspace.y_min, cfg.workspace.y_max}},
                    {"z", {cfg.workspace.z_min, cfg.workspace.z_max}},
                    {"d_voxel", cfg.workspace.d_voxel},
                    {"n_rand", cfg.workspace.n_rand},
                    {"pose_seed", cfg.workspace.pose_seed}};
  j["ik"] = {{"max_iters", cfg.ik.max_iters},   {"damping", cfg.ik.damping},
             {"pos_tol", cfg.ik.pos_tol},       {"ori_tol", cfg.ik.ori_tol},
             {"n_restarts", cfg.ik.n_restarts}, {"restart_seed", cfg.ik.restart_seed}};
  j["motpe"] = {{"n_startup", cfg.motpe.n_startup},
                {"n_total", cfg.motpe.n_total},
                {"n_candidates", cfg.motpe.n_candidates},
                {"gamma_fraction", cfg.motpe.gamma_fraction},
                {"gamma_cap", cfg.motpe.gamma_cap},
                {"bandwidth_scale", cfg.motpe.bandwidth_scale},
                {"seed", cfg.motpe.seed}};
  j["empty_voxel_torque_penalty"] = cfg.empty_voxel_torque_penalty;
  j["n_threads"] = cfg.n_threads;
  j["output_dir"] = cfg.output_dir;
  return j;
}

/// FNV-1a over the canonical serialized config; embedded in every artifact.
inline std::string config_hash(const RunConfig& cfg) {
  const std::string text = config_to_json(cfg).dump();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

/// Loads and validates a config file. An empty file yields the defaults;
/// unknown keys and type mismatches are rejected with their key path.
inline RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file: " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  std::string text = buffer.str();
  if (text.find_first_not_of(" \t\r\n") == std::string::npos) {
    return RunConfig{};
  }
  nlohmann::json root;
  try {
    root = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ValidationError(std::string("config parse error: ") + e.what());
  }
  return config_from_json(root);
}

/// Genome files: {"joints": ["Y","P",...], "lengths": [...]}.
inline DesignGenome genome_from_json(const nlohmann::json& j, const LengthConfig& lengths) {
  if (!j.is_object() || !j.contains("joints") || !j.contains("lengths")) {
    throw ValidationError("genome: expected {\"joints\": [...], \"lengths\": [...]}");
  }
  DesignGenome g;
  for (const auto& item : j.at("joints")) {
    const std::string s = item.get<std::string>();
    if (s.size() != 1) throw ValidationError("genome.joints: expected single letters");
    g.joints.push_back(joint_from_letter(s[0]));
  }
  g.lengths = j.at("lengths").get<std::vector<double>>();
  validate_genome(g, lengths);
  return g;
}

inline nlohmann::json genome_to_json(const DesignGenome& g) {
  nlohmann::json joints = nlohmann::json::array();
  for (JointType t : g.joints) joints.push_back(std::string(1, to_letter(t)));
  return {{"joints", joints}, {"lengths", g.lengths}};
}

inline DesignGenome load_genome(const std::string& path, const LengthConfig& lengths) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open genome file: " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::parse_error& e) {
    throw ValidationError(std::string("genome parse error: ") + e.what());
  }
  return genome_from_json(j, lengths);
}

}  // namespace chainopt
