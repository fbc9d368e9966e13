#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "qae/errors.hpp"
#include "qae/experiment.hpp"

namespace {

void write_or_print(const std::string& content, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << content;
    return;
  }
  std::ofstream out(out_path, std::ios::binary);
  if (!out) {
    throw qae::IoError("cannot write " + out_path);
  }
  out << content;
  out.flush();
  if (!out) {
    throw qae::IoError("write failed: " + out_path);
  }
}

struct RunFlags {
  std::string workload;
  std::string mode;
  std::string config_file;
  std::string out_dir;
  std::string warm_start;
  int layers = 0;
  int trash = 0;
  std::int64_t max_evals = 0;
  std::uint64_t seed = 0;
};

void do_run(const CLI::App& cmd, const RunFlags& flags) {
  // Layering: workload defaults, then the config file, then explicit flags.
  qae::Workload workload = qae::Workload::ising;
  if (cmd.count("--workload") > 0) {
    workload = qae::workload_from_string(flags.workload);
  } else if (!flags.config_file.empty()) {
    qae::ExperimentConfig scout;
    qae::apply_config_file(scout, flags.config_file);
    workload = scout.workload;
  }

  qae::ExperimentConfig config = qae::ExperimentConfig::defaults(workload);
  if (!flags.config_file.empty()) {
    qae::apply_config_file(config, flags.config_file);
  }
  config.workload = workload;
  if (cmd.count("--mode") > 0) config.mode = qae::run_mode_from_string(flags.mode);
  if (cmd.count("--layers") > 0) config.n_layers = flags.layers;
  if (cmd.count("--trash") > 0) config.n_trash = flags.trash;
  if (cmd.count("--seed") > 0) config.seed = flags.seed;
  if (cmd.count("--out") > 0) config.output_dir = flags.out_dir;
  if (cmd.count("--warm-start") > 0) config.warm_start_theta = flags.warm_start;
  if (cmd.count("--max-evals") > 0) config.optimizer.max_evaluations = flags.max_evals;

  const qae::RunSummary summary = qae::run_experiment(config);
  std::printf("bundle: %s\n", summary.bundle_dir.string().c_str());
  std::printf("initial cost: %.17g\n", summary.initial_cost);
  std::printf("final cost: %.17g\n", summary.final_cost);
  std::printf("evaluations: %lld\n", static_cast<long long>(summary.evaluations));
  std::printf("iterations: %lld\n", static_cast<long long>(summary.iterations));
  std::printf("termination: %s\n", qae::to_string(summary.termination));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quantum-autoencoder training, comparison, and export runner"};
  app.require_subcommand(1);

  RunFlags rf;
  CLI::App* run_cmd =
      app.add_subcommand("run", "Train one autoencoder and write its artifact bundle");
  run_cmd->add_option("--workload", rf.workload, "ising or digits");
  run_cmd->add_option("--mode", rf.mode, "qae, ef_qae, or ef_qae_star");
  run_cmd->add_option("--layers", rf.layers, "ansatz layer count");
  run_cmd->add_option("--trash", rf.trash, "number of trash qubits");
  run_cmd->add_option("--seed", rf.seed, "seed for the random initial parameters");
  run_cmd->add_option("--out", rf.out_dir, "bundle output directory");
  run_cmd->add_option("--warm-start", rf.warm_start,
                      "theta_opt.json of a finished QAE run (required for ef_qae_star)");
  run_cmd->add_option("--max-evals", rf.max_evals, "objective evaluation budget");
  run_cmd->add_option("--config", rf.config_file, "key=value config file; flags override it");

  std::string cmp_a;
  std::string cmp_b;
  std::string cmp_out;
  qae::CompareThresholds thresholds;
  CLI::App* cmp_cmd = app.add_subcommand("compare", "Compare two finished bundles");
  cmp_cmd->add_option("run_a", cmp_a, "first bundle directory")->required();
  cmp_cmd->add_option("run_b", cmp_b, "second bundle directory")->required();
  cmp_cmd->add_option("--max-cost-ratio", thresholds.max_cost_ratio,
                      "pass requires final_cost_a / final_cost_b <= this");
  cmp_cmd->add_option("--min-fidelity-delta", thresholds.min_mean_test_fidelity_delta,
                      "pass requires mean test fidelity delta >= this");
  cmp_cmd->add_option("--out", cmp_out, "write the JSON report here instead of stdout");

  std::string exp_run;
  std::string exp_probe;
  std::string exp_out;
  CLI::App* exp_cmd = app.add_subcommand(
      "export-trash", "Trash-qubit density matrix of a finished run on one probe input");
  exp_cmd->add_option("run", exp_run, "bundle directory")->required();
  exp_cmd->add_option("--probe", exp_probe,
                      "probe input: a transverse-field value (ising) or digit class 0/1 (digits)")
      ->required();
  exp_cmd->add_option("--out", exp_out, "write the CSV here instead of stdout");

  try {
    app.parse(argc, argv);
    if (run_cmd->parsed()) {
      do_run(*run_cmd, rf);
    } else if (cmp_cmd->parsed()) {
      write_or_print(qae::to_json(qae::compare_runs(cmp_a, cmp_b, thresholds)), cmp_out);
    } else if (exp_cmd->parsed()) {
      write_or_print(qae::export_trash_density(exp_run, exp_probe), exp_out);
    }
    return 0;
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  } catch (const qae::IoError& e) {
    std::fprintf(stderr, "I/O error: %s\n", e.what());
    return 3;
  } catch (const std::filesystem::filesystem_error& e) {
    std::fprintf(stderr, "I/O error: %s\n", e.what());
    return 3;
  } catch (const qae::NumericError& e) {
    std::fprintf(stderr, "numeric failure: %s\n", e.what());
    return 2;
  } catch (const qae::Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}
