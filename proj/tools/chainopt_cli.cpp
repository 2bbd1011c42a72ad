// Command-line front end: optimize a design space, evaluate or export a
// single design, and post-process trial logs into fronts, plots and reports.

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "chainopt/config.hpp"
#include "chainopt/optimize.hpp"
#include "chainopt/plots.hpp"
#include "chainopt/report.hpp"
#include "chainopt/trial_log.hpp"
#include "chainopt/urdf.hpp"
#include "chainopt/workspace.hpp"

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitValidation = 2;
constexpr int kExitIo = 3;

struct OptimizeArgs {
  std::string config_path;
  std::string preset;
  std::optional<int> n_joint;
  std::optional<int> n_total;
  std::optional<std::uint64_t> seed;
  std::optional<int> threads;
  std::string out_dir;
  bool resume = false;
};

chainopt::RunConfig effective_config(const std::string& config_path) {
  return config_path.empty() ? chainopt::RunConfig{} : chainopt::load_config(config_path);
}

void apply_preset(chainopt::RunConfig& cfg, const std::string& preset) {
  if (preset.empty()) return;
  if (preset == "desk") {
    cfg.motpe.n_total = 2000;
    cfg.workspace.d_voxel = 0.2;
    cfg.workspace.n_rand = 10;
  } else {
    throw chainopt::ValidationError("unknown preset: " + preset);
  }
}

void write_text(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw chainopt::IoError("cannot write " + path.string());
  out << text;
}

chainopt::EvalFn make_eval(const chainopt::RunConfig& cfg) {
  return [cfg](const chainopt::DesignGenome& genome) {
    const chainopt::DesignScore score =
        chainopt::evaluate_design(genome, cfg.workspace, cfg.masses, cfg.ik, cfg.eval_options());
    return chainopt::Evaluation{score.e_reach_total, score.e_torque_total};
  };
}

int cmd_optimize(const OptimizeArgs& args) {
  chainopt::RunConfig cfg = effective_config(args.config_path);
  apply_preset(cfg, args.preset);
  if (args.n_joint) cfg.n_joint = *args.n_joint;
  if (args.n_total) cfg.motpe.n_total = *args.n_total;
  if (args.seed) cfg.motpe.seed = *args.seed;
  if (args.threads) cfg.n_threads = *args.threads;
  if (!args.out_dir.empty()) cfg.output_dir = args.out_dir;
  if (cfg.n_joint < 1) throw chainopt::ValidationError("n_joint must be at least 1");

  const fs::path log_path = fs::path(cfg.output_dir) / "trials.jsonl";
  fs::create_directories(cfg.output_dir);

  std::vector<chainopt::Trial> warm;
  std::vector<json> existing_lines;
  if (args.resume) {
    const chainopt::TrialLog prior = chainopt::read_trial_log(log_path.string());
    if (prior.config_hash != chainopt::config_hash(cfg)) {
      throw chainopt::ValidationError("resume config does not match the existing trial log");
    }
    warm = prior.trials;
    existing_lines = prior.lines;
  }

  chainopt::TrialLogWriter writer(log_path.string(), cfg, std::move(existing_lines));
  auto last = std::chrono::steady_clock::now();
  const auto on_trial = [&](const chainopt::Trial& t) {
    const auto now = std::chrono::steady_clock::now();
    const auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(now - last).count();
    last = now;
    writer.append(t, ms);
  };

  const chainopt::ParetoArchive archive = chainopt::run_optimization(
      make_eval(cfg), cfg.search_space(), cfg.motpe, on_trial, warm);
  writer.finalize(archive.trials());

  std::cout << "completed " << archive.size() << " trials, front size "
            << archive.front().size() << "\n"
            << "trial log: " << log_path.string() << "\n";
  return kExitOk;
}

int cmd_evaluate(const std::string& genome_path, const std::string& config_path,
                 const std::string& out_path) {
  const chainopt::RunConfig cfg = effective_config(config_path);
  const chainopt::DesignGenome genome = chainopt::load_genome(genome_path, cfg.lengths);
  const chainopt::DesignScore score =
      chainopt::evaluate_design(genome, cfg.workspace, cfg.masses, cfg.ik, cfg.eval_options());

  std::ostringstream out;
  json header;
  header["kind"] = "voxel_map";
  header["config_hash"] = chainopt::config_hash(cfg);
  header["genome"] = chainopt::genome_to_json(genome);
  header["e_reach_total"] = score.e_reach_total;
  header["e_torque_total"] = score.e_torque_total;
  out << header.dump() << "\n";
  for (const chainopt::VoxelScore& v : score.per_voxel) {
    json line;
    line["center"] = {v.center.x(), v.center.y(), v.center.z()};
    line["e_reach"] = v.e_reach;
    line["e_torque"] = v.e_torque ? json(*v.e_torque) : json(nullptr);
    out << line.dump() << "\n";
  }

  if (out_path.empty()) {
    std::cout << out.str();
  } else {
    write_text(out_path, out.str());
    std::cout << "score file: " << out_path << " (e_reach " << score.e_reach_total
              << ", e_torque " << score.e_torque_total << ")\n";
  }
  return kExitOk;
}

int cmd_export_urdf(const std::string& genome_path, const std::string& config_path,
                    const std::string& out_path) {
  const chainopt::RunConfig cfg = effective_config(config_path);
  const chainopt::DesignGenome genome = chainopt::load_genome(genome_path, cfg.lengths);
  const chainopt::KinematicChain chain =
      chainopt::expand_genome(genome, cfg.masses, cfg.joint_limit);
  const chainopt::UrdfDocument doc =
      chainopt::export_urdf(chain, "chain", "provenance " + chainopt::config_hash(cfg));
  if (out_path.empty()) {
    std::cout << doc.xml_text;
  } else {
    write_text(out_path, doc.xml_text);
    std::cout << "urdf: " << out_path << "\n";
  }
  return kExitOk;
}

int cmd_pareto(const std::string& log_path, const std::string& out_path) {
  const chainopt::TrialLog log = chainopt::read_trial_log(log_path);
  std::vector<chainopt::Objective2> objectives;
  objectives.reserve(log.trials.size());
  for (const auto& t : log.trials) objectives.push_back(t.objectives);
  const auto fronts = chainopt::nondominated_sort(objectives);

  std::ostringstream out;
  json header;
  header["kind"] = "pareto_front";
  header["config_hash"] = log.config_hash;
  header["front_size"] = fronts.empty() ? 0 : fronts[0].size();
  out << header.dump() << "\n";
  if (!fronts.empty()) {
    std::vector<int> front = fronts[0];
    std::sort(front.begin(), front.end());
    for (int idx : front) {
      out << chainopt::trial_to_json(log.trials[static_cast<std::size_t>(idx)], 0, 0).dump()
          << "\n";
    }
  }
  if (out_path.empty()) {
    std::cout << out.str();
  } else {
    write_text(out_path, out.str());
    std::cout << "front: " << out_path << "\n";
  }
  return kExitOk;
}

int cmd_plot(const std::string& input_path, const std::string& out_dir) {
  std::ifstream probe(input_path);
  if (!probe) throw chainopt::IoError("cannot open " + input_path);
  std::string first_line;
  std::getline(probe, first_line);
  json header;
  try {
    header = json::parse(first_line);
  } catch (const json::parse_error& e) {
    throw chainopt::ValidationError("unrecognized input file: " + std::string(e.what()));
  }
  const std::string kind = header.value("kind", "");
  fs::create_directories(out_dir.empty() ? "." : out_dir);
  const fs::path dir = out_dir.empty() ? fs::path(".") : fs::path(out_dir);

  if (kind == "trial_log") {
    const chainopt::TrialLog log = chainopt::read_trial_log(input_path);
    std::vector<chainopt::Objective2> objectives;
    for (const auto& t : log.trials) objectives.push_back(t.objectives);
    const auto fronts = chainopt::nondominated_sort(objectives);
    const std::vector<int> front = fronts.empty() ? std::vector<int>{} : fronts[0];
    const std::string svg = chainopt::emit_pareto_svg(log.trials, front, log.config_hash);
    write_text(dir / "pareto.svg", svg);
    std::cout << "plot: " << (dir / "pareto.svg").string() << "\n";
    return kExitOk;
  }
  if (kind == "voxel_map") {
    chainopt::DesignScore score;
    std::ifstream in(input_path);
    std::string line;
    std::getline(in, line); // header
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      const json j = json::parse(line);
      chainopt::VoxelScore v;
      v.center = Eigen::Vector3d(j.at("center")[0].get<double>(), j.at("center")[1].get<double>(),
                                 j.at("center")[2].get<double>());
      v.e_reach = j.at("e_reach").get<double>();
      if (!j.at("e_torque").is_null()) v.e_torque = j.at("e_torque").get<double>();
      score.per_voxel.push_back(v);
    }
    const std::string hash = header.value("config_hash", "");
    write_text(dir / "reach.svg",
               chainopt::emit_voxel_map_svg(score, chainopt::VoxelMapMode::Reach, hash));
    write_text(dir / "torque.svg",
               chainopt::emit_voxel_map_svg(score, chainopt::VoxelMapMode::Torque, hash));
    std::cout << "plots: " << (dir / "reach.svg").string() << ", "
              << (dir / "torque.svg").string() << "\n";
    return kExitOk;
  }
  throw chainopt::ValidationError("input is neither a trial log nor a score file");
}

int cmd_report(const std::string& log_path, const std::string& out_path) {
  const chainopt::TrialLog log = chainopt::read_trial_log(log_path);
  std::vector<chainopt::Objective2> objectives;
  for (const auto& t : log.trials) objectives.push_back(t.objectives);
  const auto fronts = chainopt::nondominated_sort(objectives);
  const std::vector<int> front = fronts.empty() ? std::vector<int>{} : fronts[0];
  const std::string md = chainopt::build_report(log.trials, front, log.config_hash);
  if (out_path.empty()) {
    std::cout << md;
  } else {
    write_text(out_path, md);
    std::cout << "report: " << out_path << "\n";
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"serial manipulator design search: reachability vs gravity torque"};
  app.require_subcommand(1);

  OptimizeArgs opt_args;
  CLI::App* optimize = app.add_subcommand("optimize", "run the multi-objective design search");
  optimize->add_option("config", opt_args.config_path, "config file (JSON); defaults if omitted");
  optimize->add_option("--preset", opt_args.preset, "named preset: desk");
  optimize->add_option("--n-joint", opt_args.n_joint, "override joint count");
  optimize->add_option("--n-total", opt_args.n_total, "override total trial count");
  optimize->add_option("--seed", opt_args.seed, "override sampler seed");
  optimize->add_option("--threads", opt_args.threads, "evaluation threads (0 = hardware)");
  optimize->add_option("--out-dir", opt_args.out_dir, "output directory");
  optimize->add_flag("--resume", opt_args.resume, "continue a truncated trial log");

  std::string genome_path, config_path, out_path, input_path, out_dir;
  CLI::App* evaluate = app.add_subcommand("evaluate", "score one design over the workspace");
  evaluate->add_option("genome", genome_path, "genome JSON file")->required();
  evaluate->add_option("config", config_path, "config file (JSON); defaults if omitted");
  evaluate->add_option("--out", out_path, "score file path (JSON lines)");

  CLI::App* export_urdf = app.add_subcommand("export-urdf", "write a design as URDF");
  export_urdf->add_option("genome", genome_path, "genome JSON file")->required();
  export_urdf->add_option("--config", config_path, "config file (JSON)");
  export_urdf->add_option("--out", out_path, "output file; stdout if omitted");

  CLI::App* pareto = app.add_subcommand("pareto", "extract the nondominated set of a trial log");
  pareto->add_option("trial-log", input_path, "trial log (JSON lines)")->required();
  pareto->add_option("--out", out_path, "output file; stdout if omitted");

  CLI::App* plot = app.add_subcommand("plot", "render a trial log or score file as SVG");
  plot->add_option("input", input_path, "trial log or score file")->required();
  plot->add_option("--out-dir", out_dir, "directory for SVG output");

  CLI::App* report = app.add_subcommand("report", "summarize families in a trial log");
  report->add_option("trial-log", input_path, "trial log (JSON lines)")->required();
  report->add_option("--out", out_path, "output file; stdout if omitted");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitValidation;
  }

  try {
    if (optimize->parsed()) return cmd_optimize(opt_args);
    if (evaluate->parsed()) return cmd_evaluate(genome_path, config_path, out_path);
    if (export_urdf->parsed()) return cmd_export_urdf(genome_path, config_path, out_path);
    if (pareto->parsed()) return cmd_pareto(input_path, out_path);
    if (plot->parsed()) return cmd_plot(input_path, out_dir);
    if (report->parsed()) return cmd_report(input_path, out_path);
  } catch (const chainopt::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const chainopt::IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return kExitOk;
}
