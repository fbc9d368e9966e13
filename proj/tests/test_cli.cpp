#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <string>

#include <doctest.h>
#include <json.hpp>

#include "qae/experiment.hpp"
#include "test_support.hpp"

namespace fs = std::filesystem;
using qae_test::read_text_file;

namespace {

struct CliResult {
  int exit_code = -1;
  std::string output;  // stdout and stderr combined
};

CliResult run_cli(const std::string& args, const fs::path& scratch) {
  const fs::path log = scratch / "cli_output.txt";
  const std::string command =
      std::string("\"") + QAE_CLI_PATH + "\" " + args + " > \"" + log.string() + "\" 2>&1";
  const int status = std::system(command.c_str());
  CliResult result;
  if (status != -1 && WIFEXITED(status)) result.exit_code = WEXITSTATUS(status);
  result.output = read_text_file(log);
  return result;
}

/// Config file describing a fast 4-qubit ising run (no output directory).
std::string small_run_config() {
  return "workload = ising\n"
         "qubits = 4\n"
         "trash = 2\n"
         "layers = 1\n"
         "seed = 5\n"
         "n_train = 3\n"
         "n_test = 2\n"
         "max_evals = 120\n";
}

}  // namespace

TEST_CASE("cli rejects unusable invocations with exit code 1") {
  qae_test::TempDir dir("cli_bad");
  CHECK(run_cli("", dir.path).exit_code == 1);
  CHECK(run_cli("frobnicate", dir.path).exit_code == 1);
  CHECK(run_cli("run --bogus-flag 1", dir.path).exit_code == 1);
  CHECK(run_cli("compare onlyone", dir.path).exit_code == 1);
  CHECK(run_cli("export-trash somewhere", dir.path).exit_code == 1);  // missing --probe

  // Domain validation failures map to 1 as well.
  const fs::path conf = dir.path / "run.conf";
  qae_test::write_text_file(conf, small_run_config());
  const CliResult bad_mode = run_cli(
      "run --config " + conf.string() + " --mode sideways --out " + (dir.path / "x").string(),
      dir.path);
  CHECK(bad_mode.exit_code == 1);
  CHECK(bad_mode.output.find("unknown mode") != std::string::npos);

  const CliResult no_out = run_cli("run --config " + conf.string(), dir.path);
  CHECK(no_out.exit_code == 1);
}

TEST_CASE("cli run trains from a config file with flag overrides") {
  qae_test::TempDir dir("cli_run");
  const fs::path conf = dir.path / "run.conf";
  qae_test::write_text_file(conf, small_run_config());
  const fs::path out = dir.path / "bundle";

  const CliResult result = run_cli(
      "run --config " + conf.string() + " --layers 2 --max-evals 60 --out " + out.string(),
      dir.path);
  CHECK(result.exit_code == 0);
  CHECK(result.output.find("final cost:") != std::string::npos);
  CHECK(result.output.find("termination:") != std::string::npos);
  CHECK(fs::exists(out / "theta_opt.json"));

  const nlohmann::json j = nlohmann::json::parse(read_text_file(out / "theta_opt.json"));
  CHECK(j.at("spec").at("n_layers") == 2);  // flag beat the config file
  CHECK(j.at("spec").at("n_qubits") == 4);  // config file beat the defaults
  // Budget 60 with bounded overshoot: one gradient sweep is 2 gates * 10.
  CHECK(j.at("evaluations").get<long long>() <= 60 + 2 * 10 + 1);
}

TEST_CASE("cli maps i/o failures to exit code 3") {
  qae_test::TempDir dir("cli_io");
  const fs::path conf = dir.path / "digits.conf";
  qae_test::write_text_file(conf,
                            "workload = digits\n"
                            "layers = 1\n"
                            "max_evals = 50\n"
                            "digits_train = " + (dir.path / "missing.csv").string() + "\n"
                            "digits_test = " + (dir.path / "missing.csv").string() + "\n");
  const CliResult result =
      run_cli("run --config " + conf.string() + " --out " + (dir.path / "out").string(),
              dir.path);
  CHECK(result.exit_code == 3);

  CHECK(run_cli("export-trash " + (dir.path / "nowhere").string() + " --probe 0.6",
                dir.path).exit_code == 3);
  CHECK(run_cli("compare " + (dir.path / "a").string() + " " + (dir.path / "b").string(),
                dir.path).exit_code == 3);
}

TEST_CASE("cli compare and export operate on finished bundles") {
  qae_test::TempDir dir("cli_cmp");

  qae::ExperimentConfig config = qae::ExperimentConfig::defaults(qae::Workload::ising);
  config.n_qubits = 4;
  config.n_trash = 2;
  config.n_layers = 1;
  config.n_train_states = 3;
  config.n_test_states = 2;
  config.seed = 5;
  config.optimizer.max_evaluations = 120;
  config.output_dir = dir.path / "a";
  qae::run_experiment(config);
  config.output_dir = dir.path / "b";
  config.seed = 6;
  qae::run_experiment(config);

  const fs::path report_path = dir.path / "report.json";
  const CliResult cmp = run_cli("compare " + (dir.path / "a").string() + " " +
                                    (dir.path / "b").string() + " --out " + report_path.string(),
                                dir.path);
  CHECK(cmp.exit_code == 0);
  const nlohmann::json report = nlohmann::json::parse(read_text_file(report_path));
  CHECK(report.at("workload") == "ising");
  CHECK(report.contains("cost_ratio"));
  CHECK(report.contains("pass"));

  // A failing comparison still exits 0; the verdict is data, not an error.
  const CliResult strict = run_cli("compare " + (dir.path / "a").string() + " " +
                                       (dir.path / "b").string() + " --min-fidelity-delta 1.0",
                                   dir.path);
  CHECK(strict.exit_code == 0);
  CHECK(strict.output.find("\"pass\": false") != std::string::npos);

  const fs::path density_path = dir.path / "density.csv";
  const CliResult exp = run_cli("export-trash " + (dir.path / "a").string() +
                                    " --probe 0.75 --out " + density_path.string(),
                                dir.path);
  CHECK(exp.exit_code == 0);
  const std::string density = read_text_file(density_path);
  CHECK(density.rfind("probe,row,", 0) == 0);
  CHECK(density.find("lambda=0.750000") != std::string::npos);

  CHECK(run_cli("export-trash " + (dir.path / "a").string() + " --probe abc",
                dir.path).exit_code == 1);
}
