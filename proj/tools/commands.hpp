#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include <nlohmann/json.hpp>

#include "qcrb/conditions.hpp"
#include "qcrb/fisher.hpp"
#include "qcrb/fixtures.hpp"
#include "qcrb/povm.hpp"

namespace qcrb::cli {

using nlohmann::json;

struct Options {
  std::string model;
  std::string params;
  std::string theta;
  std::string numeric_model;
  std::string scheme = "auto";  // auto | analytic | central | richardson
  double fd_step = 1e-5;
  double rank_tol = 1e-10;
  std::optional<double> cond_tol;
  std::uint64_t seed = 0xc0ffee;
  std::int64_t trials = 1000000;
  std::string cost_matrix;
  std::string povm;      // input POVM file
  std::string povm_out;  // construct-povm: write the POVM here as well
  std::string grid;      // sweep: "lo:hi:n[,lo:hi:n...]"
  int threads = 0;
  int estimator_reps = 0;
  std::int64_t estimator_shots = 1000;
  bool no_witness = false;
};

/// Everything computed for one state at one point.
struct Analysis {
  std::optional<fixtures::Fixture> fixture;
  StateAtPoint sp;
  double tol = 1e-8;
  SupportDecomposition dec;
  SLDSet slds;
  RealMatrix F_Q;
  ConditionReport conditions;
  std::optional<POVM> supplied_povm;
  json report;
};

Analysis analyze(const Options& opts);

json cmd_analyze(const Options& opts);
json cmd_construct_povm(const Options& opts);
json cmd_fisher(const Options& opts);
json cmd_simulate(const Options& opts);
json cmd_sweep(const Options& opts);

json error_json(const std::exception& e);

std::string version();

}  // namespace qcrb::cli
