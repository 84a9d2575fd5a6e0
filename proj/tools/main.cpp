#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "commands.hpp"

namespace {

void add_common(CLI::App* cmd, qcrb::cli::Options& o, std::string& output, std::string& format) {
  cmd->add_option("--model", o.model, "Registered model name");
  cmd->add_option("--params", o.params, "Model parameters k=v,k=v");
  cmd->add_option("--theta", o.theta, "Parameter point v,v,...");
  cmd->add_option("--numeric-model", o.numeric_model, "Single-point numeric model JSON");
  cmd->add_option("--scheme", o.scheme, "Derivatives: auto, analytic, central, richardson")
      ->check(CLI::IsMember({"auto", "analytic", "central", "richardson"}));
  cmd->add_option("--fd-step", o.fd_step, "Finite-difference step")->check(CLI::PositiveNumber);
  cmd->add_option("--rank-tol", o.rank_tol, "Relative rank cutoff")->check(CLI::PositiveNumber);
  cmd->add_option("--cond-tol", o.cond_tol, "Tolerance for condition checks");
  cmd->add_option("--seed", o.seed, "Random seed");
  cmd->add_option("--povm", o.povm, "POVM JSON to evaluate");
  cmd->add_option("--cost-matrix", o.cost_matrix, "Cost matrix G as a JSON real matrix");
  cmd->add_flag("--no-witness", o.no_witness, "Ignore the model's built-in condition 2' witness");
  cmd->add_option("--output", output, "Write the report here instead of stdout");
  cmd->add_option("--format", format, "Output format")->check(CLI::IsMember({"json"}));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Saturability analysis for the multiparameter quantum Cramer-Rao bound"};
  app.set_version_flag("--version", qcrb::cli::version());
  app.require_subcommand(1);

  qcrb::cli::Options o;
  std::string output;
  std::string format = "json";

  auto* analyze = app.add_subcommand("analyze", "Run every saturability check at one point");
  auto* construct = app.add_subcommand("construct-povm", "Build the optimal projective POVM");
  auto* fisher = app.add_subcommand("fisher", "Compare classical and quantum Fisher information");
  auto* simulate = app.add_subcommand("simulate", "Monte Carlo Fisher information estimate");
  auto* sweep = app.add_subcommand("sweep", "Analyze every point of a parameter grid");
  auto* list = app.add_subcommand("list-models", "Print the model registry");
  for (auto* cmd : {analyze, construct, fisher, simulate, sweep}) add_common(cmd, o, output, format);
  construct->add_option("--povm-out", o.povm_out, "Also write the POVM JSON here");
  simulate->add_option("--trials", o.trials, "Number of samples")->check(CLI::PositiveNumber);
  simulate->add_option("--estimator-reps", o.estimator_reps, "Repetitions for the ML estimator study");
  simulate->add_option("--estimator-shots", o.estimator_shots, "Shots per estimator repetition");
  sweep->add_option("--grid", o.grid, "lo:hi:n per parameter, comma separated")->required();
  sweep->add_option("--threads", o.threads, "Worker threads (0 = hardware)");

  CLI11_PARSE(app, argc, argv);

  nlohmann::json result;
  int status = 0;
  try {
    if (*list) {
      result = nlohmann::json::array();
      for (const auto& e : qcrb::fixtures::registry()) {
        result.push_back({{"name", e.name}, {"description", e.description}, {"defaults", e.defaults}});
      }
    } else if (*analyze) {
      result = qcrb::cli::cmd_analyze(o);
    } else if (*construct) {
      result = qcrb::cli::cmd_construct_povm(o);
    } else if (*fisher) {
      result = qcrb::cli::cmd_fisher(o);
    } else if (*simulate) {
      result = qcrb::cli::cmd_simulate(o);
    } else if (*sweep) {
      result = qcrb::cli::cmd_sweep(o);
    }
  } catch (const std::exception& e) {
    result = qcrb::cli::error_json(e);
    status = 1;
  }

  const std::string text = result.dump(2);
  if (output.empty() || status != 0) {
    (status ? std::cerr : std::cout) << text << '\n';
  }
  if (!output.empty() && status == 0) {
    std::ofstream out(output);
    if (!out) {
      std::cerr << R"({"error": {"code": "IoError", "message": "cannot write output file"}})" << '\n';
      return 1;
    }
    out << text << '\n';
  }
  return status;
}
