#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "germflow/cli/commands.hpp"

namespace germflow::cli {
namespace {

const std::string kData = GERMFLOW_DATA_DIR;

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome invoke(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

std::filesystem::path temp_file(const std::string& name, const std::string& body) {
  const auto path = std::filesystem::temp_directory_path() / name;
  std::ofstream(path) << body;
  return path;
}

TEST(Cli, MissingSpecIsAUsageError) {
  const Outcome o = invoke({"flow", "--spec", "missing.germ"});
  EXPECT_EQ(o.code, kExitUsage);
  EXPECT_NE(o.err.find("missing.germ"), std::string::npos);
}

TEST(Cli, UnknownSubcommandAndMissingFlag) {
  EXPECT_EQ(invoke({"frobnicate"}).code, kExitUsage);
  EXPECT_EQ(invoke({"check-kuo"}).code, kExitUsage);
  EXPECT_EQ(invoke({"check-kuo", "--spec", kData + "/pitchfork.germ", "--samples", "0"}).code, kExitUsage);
  EXPECT_EQ(invoke({}).code, kExitUsage);
}

TEST(Cli, ParseErrorsAreUsageErrors) {
  const auto path = temp_file("germflow_bad.germ", "dims 1 1 1\nmap 1 q 1 0\n");
  const Outcome o = invoke({"check-kuo", "--spec", path.string()});
  EXPECT_EQ(o.code, kExitUsage);
  EXPECT_NE(o.err.find("line 2"), std::string::npos);
}

TEST(Cli, CheckKuoReportShape) {
  const Outcome o = invoke({"check-kuo", "--spec", kData + "/pitchfork.germ", "--samples", "2000"});
  ASSERT_EQ(o.code, kExitOk) << o.err;
  const auto report = nlohmann::json::parse(o.out);
  for (const char* key : {"job", "verdicts", "certificates", "witnesses", "timing"})
    EXPECT_TRUE(report.contains(key)) << key;
  EXPECT_EQ(report["verdicts"]["kuo"], "holds-empirically");
  EXPECT_EQ(report["job"]["samples"], 2000);
  EXPECT_TRUE(report["certificates"]["kuo"].contains("min_margin"));
  EXPECT_TRUE(report["witnesses"]["kuo"].contains("point"));
}

TEST(Cli, FlagsOverrideJobLinesWhichOverrideDefaults) {
  const auto path = temp_file("germflow_job.germ",
                              "dims 1 1 1\nweights 1 1\nmap 1 1 3 0\nmap 1 -1 1 1\n"
                              "job samples 700\njob width 0.4\njob seed 9\n");
  const Outcome o = invoke({"check-kuo", "--spec", path.string(), "--width", "0.3"});
  ASSERT_EQ(o.code, kExitOk) << o.err;
  const auto job = nlohmann::json::parse(o.out)["job"];
  EXPECT_EQ(job["samples"], 700);
  EXPECT_EQ(job["width"], 0.3);
  EXPECT_EQ(job["seed"], 9);
  EXPECT_EQ(job["delta"], 1.0);
}

TEST(Cli, BadJobValueIsAUsageError) {
  const auto path = temp_file("germflow_badjob.germ", "dims 1 1 1\nmap 1 1 3 0\njob samples many\n");
  EXPECT_EQ(invoke({"check-kuo", "--spec", path.string()}).code, kExitUsage);
}

TEST(Cli, QuarticPerturbationIsRejected) {
  const Outcome o = invoke({"verify-equivalence", "--spec", kData + "/pitchfork.germ", "--pert",
                            kData + "/x4.germ"});
  EXPECT_EQ(o.code, kExitVerdictFailed);
  const auto report = nlohmann::json::parse(o.out);
  EXPECT_EQ(report["verdicts"]["perturbation_order"], "rejected");
  const std::string summary = report["certificates"]["perturbation_order"]["summary"];
  EXPECT_NE(summary.find("perturbation order 4 ≤ 4"), std::string::npos);
}

TEST(Cli, QuinticPerturbationIsAdmissible) {
  const Outcome o = invoke({"check-perturbation", "--spec", kData + "/pitchfork.germ", "--pert",
                            kData + "/x5.germ"});
  EXPECT_EQ(o.code, kExitOk);
}

TEST(Cli, MismatchedPerturbationIsAUsageError) {
  const auto path = temp_file("germflow_two.germ", "dims 1 1 2\nmap 1 1 5 0\nmap 2 1 5 0\n");
  EXPECT_EQ(invoke({"check-perturbation", "--spec", kData + "/pitchfork.germ", "--pert", path.string()}).code,
            kExitUsage);
}

TEST(Cli, FlowWritesTracesAndPlotData) {
  const auto dir = std::filesystem::temp_directory_path();
  const auto traces = dir / "germflow_traces.csv";
  const auto plot = dir / "germflow_plot.csv";
  const Outcome o = invoke({"flow", "--spec", kData + "/pitchfork.germ", "--pert", kData + "/x5.germ",
                            "--seeds", "20", "--trace-out", traces.string(), "--plot-out", plot.string()});
  ASSERT_EQ(o.code, kExitOk) << o.err;
  std::ifstream p(plot);
  std::string line;
  std::size_t rows = 0;
  while (std::getline(p, line)) ++rows;
  EXPECT_EQ(rows, 21u);
  EXPECT_GT(std::filesystem::file_size(traces), 0u);
}

TEST(Cli, ReportFileAndDeterminism) {
  const auto dir = std::filesystem::temp_directory_path();
  auto once = [&](const std::string& name) {
    const auto path = dir / name;
    const Outcome o = invoke({"check-kuo", "--spec", kData + "/pitchfork.germ", "--samples", "1500",
                              "--report", path.string()});
    EXPECT_EQ(o.code, kExitOk);
    EXPECT_NE(o.out.find("holds-empirically"), std::string::npos);
    auto j = nlohmann::json::parse(std::ifstream(path));
    j.erase("timing");
    return j.dump();
  };
  EXPECT_EQ(once("germflow_r1.json"), once("germflow_r2.json"));
}

TEST(Cli, CheckNdNeedsOrders) {
  EXPECT_EQ(invoke({"check-nd", "--spec", kData + "/pitchfork.germ"}).code, kExitUsage);
  const Outcome o = invoke({"check-nd", "--spec", kData + "/pitchfork.germ", "--nu", "5", "--samples", "500"});
  EXPECT_EQ(o.code, kExitOk) << o.err;
}

TEST(Cli, CheckRankReportsTheFold) {
  const Outcome o = invoke({"check-rank", "--spec", kData + "/pitchfork.germ", "--samples", "500"});
  EXPECT_EQ(o.code, kExitVerdictFailed);
  EXPECT_FALSE(nlohmann::json::parse(o.out)["witnesses"]["rank"].is_null());
}

TEST(Cli, VerifyLemmasWithoutGermFile) {
  const Outcome o = invoke({"verify-lemmas"});
  EXPECT_EQ(o.code, kExitOk) << o.err;
  EXPECT_EQ(nlohmann::json::parse(o.out)["certificates"]["lemmas"].size(), 5u);
}

}  // namespace
}  // namespace germflow::cli
