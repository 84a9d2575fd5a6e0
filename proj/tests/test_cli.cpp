#include <gtest/gtest.h>

#include <filesystem>
#include <string>

#include "commands.hpp"
#include "helpers.hpp"
#include "qcrb/json_io.hpp"

using namespace qcrb;
using cli::Options;

namespace {

Options model(const std::string& name, const std::string& theta = "") {
  Options o;
  o.model = name;
  o.theta = theta;
  return o;
}

std::string tmp(const std::string& file) { return std::string(QCRB_TEST_TMPDIR) + "/" + file; }

}  // namespace

TEST(Cli, AnalyzeReportHeader) {
  const auto r = cli::cmd_analyze(model("paper-qutrit", "0.3,0.5"));
  EXPECT_EQ(r["version"], json_io::kReportVersion);
  EXPECT_EQ(r["verdict"], "SATURABLE_CERTIFIED");
  EXPECT_EQ(r["model"]["name"], "paper-qutrit");
  EXPECT_EQ(r["scheme"]["kind"], "analytic");
  EXPECT_TRUE(r.contains("seed"));
  EXPECT_EQ(r["decomposition"]["r_zero"], 1);
  EXPECT_NEAR(r["qfim"][0][1].get<double>(), 0.451584, 1e-6);
}

TEST(Cli, AnalyzeIsDeterministic) {
  const auto a = cli::cmd_analyze(model("random-rank-r"));
  const auto b = cli::cmd_analyze(model("random-rank-r"));
  EXPECT_EQ(a.dump(), b.dump());
}

TEST(Cli, FiniteDifferenceScheme) {
  Options o = model("paper-qutrit", "0.3,0.5");
  o.scheme = "central";
  const auto r = cli::cmd_fisher(o);
  EXPECT_EQ(r["scheme"]["kind"], "central_fd");
  EXPECT_EQ(r["verdict"], "SATURABLE_CERTIFIED");
  EXPECT_TRUE(r["fisher"]["comparison"]["saturated"].get<bool>());
}

TEST(Cli, ConstructPovmRefusesUncertifiedModel) {
  EXPECT_QCRB_ERROR(cli::cmd_construct_povm(model("pure-qubit-amp-phase")), ErrorCode::NotCertified);
}

TEST(Cli, ConstructedPovmFeedsFisher) {
  Options o = model("paper-qutrit");
  o.povm_out = tmp("qutrit_povm.json");
  const auto built = cli::cmd_construct_povm(o);
  EXPECT_TRUE(built["certificate"]["pass"].get<bool>());
  EXPECT_EQ(built["povm"]["elements"].size(), 3u);
  Options f = model("paper-qutrit");
  f.povm = o.povm_out;
  const auto r = cli::cmd_fisher(f);
  EXPECT_TRUE(r["fisher"]["comparison"]["saturated"].get<bool>());
  EXPECT_TRUE(r["fisher"]["certificate"]["pass"].get<bool>());
}

TEST(Cli, FisherWithCostMatrix) {
  const auto path = tmp("cost.json");
  json_io::save_file(path, nlohmann::json{{1.0, 0.0}, {0.0, 2.0}});
  Options o = model("diag-multinomial", "0.2,0.3");
  o.cost_matrix = path;
  const auto r = cli::cmd_fisher(o);
  EXPECT_TRUE(r["fisher"]["comparison"].contains("cost_quantum"));
  EXPECT_TRUE(r["fisher"]["comparison"].contains("cost_classical"));
}

TEST(Cli, SimulateIsReproducible) {
  Options o = model("paper-qutrit", "0.3,0.5");
  o.trials = 50000;
  o.seed = 99;
  const auto a = cli::cmd_simulate(o);
  const auto b = cli::cmd_simulate(o);
  EXPECT_EQ(a["monte_carlo"]["counts"], b["monte_carlo"]["counts"]);
  EXPECT_LE(a["monte_carlo"]["max_z_score"].get<double>(), 5.0);
}

TEST(Cli, NumericModelAnalyzesButCannotSimulate) {
  const auto f = fixtures::get("paper-qutrit");
  const auto sp = evaluate(f.model, f.default_theta);
  const auto path = tmp("numeric.json");
  json_io::save_file(path, json_io::numeric_model_to_json(sp));
  Options o;
  o.numeric_model = path;
  const auto r = cli::cmd_analyze(o);
  EXPECT_EQ(r["model"]["source"], "numeric");
  EXPECT_EQ(r["scheme"]["kind"], "supplied");
  EXPECT_EQ(r["verdict"], "SATURABLE_CERTIFIED");
  EXPECT_QCRB_ERROR(cli::cmd_simulate(o), ErrorCode::MonteCarloDisabled);
}

TEST(Cli, SweepReportsBoundaryErrorsPerPoint) {
  Options o = model("diag-multinomial");
  o.grid = "0.1:0.5:3,0.1:0.5:3";
  o.threads = 3;
  const auto r = cli::cmd_sweep(o);
  ASSERT_EQ(r["points"].size(), 9u);
  // (0.5, 0.5) leaves the simplex.
  EXPECT_EQ(r["summary"]["errors"], 1);
  EXPECT_EQ(r["points"][8]["error"]["code"], "DomainViolation");
  EXPECT_EQ(r["summary"]["verdicts"]["SATURABLE_CERTIFIED"], 8);
  EXPECT_EQ(r["points"][0]["theta"][0], 0.1);
  o.threads = 1;
  EXPECT_EQ(cli::cmd_sweep(o).dump(), r.dump());
}

TEST(Cli, InputErrors) {
  EXPECT_QCRB_ERROR(cli::cmd_analyze(model("paper-qutrit", "0.3,zz")), ErrorCode::InvalidParameter);
  EXPECT_QCRB_ERROR(cli::cmd_analyze(model("paper-qutrit", "1.3,0.5")), ErrorCode::DomainViolation);
  EXPECT_QCRB_ERROR(cli::cmd_analyze(model("unknown")), ErrorCode::UnknownModel);
  Options o = model("paper-qutrit");
  o.povm = tmp("does_not_exist.json");
  EXPECT_QCRB_ERROR(cli::cmd_analyze(o), ErrorCode::IoError);
  const auto err = cli::error_json(Error(ErrorCode::NotCertified, "x"));
  EXPECT_EQ(err["error"]["code"], "NotCertified");
}
