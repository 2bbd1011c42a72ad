// End-to-end checks of the installed command-line surface: exit codes,
// artifact shapes, purity of evaluate, and resumable optimize runs.

#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;

namespace {

const char* kCli = CHAINOPT_CLI_PATH;

fs::path work_dir() {
  const fs::path dir = fs::temp_directory_path() / "chainopt_cli_test";
  fs::create_directories(dir);
  return dir;
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string(kCli) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WEXITSTATUS(status);
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path);
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::trunc);
  out << text;
}

std::vector<std::string> lines_of(const fs::path& path) {
  std::ifstream in(path);
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty()) lines.push_back(line);
  }
  return lines;
}

// Single-voxel workspace and a tiny trial budget keep runs subsecond.
const char* kTinyConfig = R"({
  "n_joint": 4,
  "workspace": {"x": [0.0, 0.2], "y": [0.0, 0.2], "z": [0.0, 0.2], "d_voxel": 0.2, "n_rand": 2},
  "ik": {"max_iters": 60, "n_restarts": 2},
  "motpe": {"n_startup": 10, "n_total": 25, "seed": 4}
})";

const char* kGenome =
    R"({"joints": ["Y", "P", "P", "R", "P", "P"], "lengths": [0.1, 0.1, 0.1, 0.1, 0.1, 0.1]})";

}  // namespace

TEST(Cli, ExportUrdfWritesRobot) {
  const fs::path dir = work_dir();
  write_file(dir / "genome.json", kGenome);
  const fs::path out = dir / "arm.urdf";
  ASSERT_EQ(run_cli("export-urdf " + (dir / "genome.json").string() + " --out " + out.string()),
            0);
  const std::string urdf = slurp(out);
  EXPECT_NE(urdf.find("<robot"), std::string::npos);
  EXPECT_NE(urdf.find("type=\"revolute\""), std::string::npos);
  EXPECT_NE(urdf.find("provenance"), std::string::npos);
}

TEST(Cli, EvaluateIsPure) {
  const fs::path dir = work_dir();
  write_file(dir / "tiny.json", kTinyConfig);
  write_file(dir / "genome4.json",
             R"({"joints": ["Y", "P", "P", "P"], "lengths": [0.2, 0.2, 0.1, 0.1]})");
  const std::string base = "evaluate " + (dir / "genome4.json").string() + " " +
                           (dir / "tiny.json").string() + " --out ";
  ASSERT_EQ(run_cli(base + (dir / "score_a.jsonl").string()), 0);
  ASSERT_EQ(run_cli(base + (dir / "score_b.jsonl").string()), 0);
  const std::string a = slurp(dir / "score_a.jsonl");
  EXPECT_FALSE(a.empty());
  EXPECT_EQ(a, slurp(dir / "score_b.jsonl"));
  EXPECT_NE(a.find("config_hash"), std::string::npos);
}

TEST(Cli, ValidationAndIoExitCodes) {
  const fs::path dir = work_dir();
  write_file(dir / "bad.json", R"({"n_joint": -3})");
  write_file(dir / "genome.json", kGenome);
  EXPECT_EQ(run_cli("evaluate " + (dir / "genome.json").string() + " " +
                    (dir / "bad.json").string()),
            2);
  EXPECT_EQ(run_cli("evaluate " + (dir / "missing_genome.json").string()), 3);
  EXPECT_EQ(run_cli("report " + (dir / "missing_log.jsonl").string()), 3);
  EXPECT_EQ(run_cli("frobnicate"), 2);
}

TEST(Cli, OptimizeResumeAndPostprocess) {
  const fs::path dir = work_dir() / "run";
  fs::remove_all(dir);
  write_file(work_dir() / "tiny.json", kTinyConfig);
  const std::string common = "optimize " + (work_dir() / "tiny.json").string() + " --out-dir " +
                             dir.string() + " --threads 1";
  ASSERT_EQ(run_cli(common), 0);

  const fs::path log = dir / "trials.jsonl";
  auto full_lines = lines_of(log);
  ASSERT_EQ(full_lines.size(), 26u); // header + 25 trials

  // Truncate mid-run and resume: ids continue and the budget completes.
  {
    std::ofstream out(log, std::ios::trunc);
    for (std::size_t i = 0; i < 11; ++i) out << full_lines[i] << "\n";
  }
  ASSERT_EQ(run_cli(common + " --resume"), 0);
  auto resumed_lines = lines_of(log);
  EXPECT_EQ(resumed_lines.size(), 26u);
  EXPECT_NE(resumed_lines[11].find("\"id\":10"), std::string::npos);

  ASSERT_EQ(run_cli("pareto " + log.string() + " --out " + (dir / "front.jsonl").string()), 0);
  EXPECT_FALSE(lines_of(dir / "front.jsonl").empty());

  ASSERT_EQ(run_cli("plot " + log.string() + " --out-dir " + dir.string()), 0);
  EXPECT_TRUE(fs::exists(dir / "pareto.svg"));

  ASSERT_EQ(run_cli("report " + log.string() + " --out " + (dir / "report.md").string()), 0);
  EXPECT_NE(slurp(dir / "report.md").find("| "), std::string::npos);

  // Score file plotting produces the two voxel maps.
  write_file(work_dir() / "genome4.json",
             R"({"joints": ["Y", "P", "P", "P"], "lengths": [0.2, 0.2, 0.1, 0.1]})");
  ASSERT_EQ(run_cli("evaluate " + (work_dir() / "genome4.json").string() + " " +
                    (work_dir() / "tiny.json").string() + " --out " +
                    (dir / "score.jsonl").string()),
            0);
  ASSERT_EQ(run_cli("plot " + (dir / "score.jsonl").string() + " --out-dir " + dir.string()), 0);
  EXPECT_TRUE(fs::exists(dir / "reach.svg"));
  EXPECT_TRUE(fs::exists(dir / "torque.svg"));
}
