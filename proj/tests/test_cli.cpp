#include "divbound/cli.hpp"

#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

namespace {

namespace fs = std::filesystem;

struct RunResult {
  int exit_code = -1;
  std::string output;  // stdout and stderr combined
};

/// Runs the CLI binary with the given arguments through the shell.
RunResult run_cli(const std::string& args) {
  const std::string cmd = std::string(DIVBOUND_CLI_PATH) + " " + args + " 2>&1";
  FILE* pipe = popen(cmd.c_str(), "r");
  EXPECT_NE(pipe, nullptr);
  RunResult result;
  char buffer[4096];
  while (std::size_t got = std::fread(buffer, 1, sizeof(buffer), pipe)) {
    result.output.append(buffer, got);
  }
  const int status = pclose(pipe);
  result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return result;
}

class CliTest : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    char tmpl[] = "/tmp/divbound_cli_XXXXXX";
    ASSERT_NE(mkdtemp(tmpl), nullptr);
    dir_ = new fs::path(tmpl);
    write_file("p_std.txt", "0.5\n0.5\n");
    write_file("q_std.txt", "0.25\n0.75\n");
    write_file("q_json.json", "[0.25, 0.75]\n");
    write_file("unnormalized.txt", "1\n3\n");
    write_file("bad.txt", "0.5\npotato\n");
    write_file("three.txt", "0.2\n0.3\n0.5\n");
  }

  static void TearDownTestSuite() {
    std::error_code ec;
    fs::remove_all(*dir_, ec);
    delete dir_;
    dir_ = nullptr;
  }

  static void write_file(const std::string& name, const std::string& body) {
    std::ofstream out(*dir_ / name);
    out << body;
  }

  static std::string path(const std::string& name) {
    return (*dir_ / name).string();
  }

  static fs::path* dir_;
};

fs::path* CliTest::dir_ = nullptr;

bool contains(const std::string& haystack, const std::string& needle) {
  return haystack.find(needle) != std::string::npos;
}

TEST_F(CliTest, ComputeDocumentedExample) {
  const auto r = run_cli("compute --p " + path("p_std.txt") + " --q " +
                         path("q_std.txt") + " --measure kl,delta");
  EXPECT_EQ(r.exit_code, 0);
  EXPECT_TRUE(contains(r.output, "0.143841036226")) << r.output;
  EXPECT_TRUE(contains(r.output, "0.133333333333")) << r.output;
}

TEST_F(CliTest, ComputeEqualPairGivesZeros) {
  const auto r = run_cli("compute --p " + path("p_std.txt") + " --q " +
                         path("p_std.txt") +
                         " --measure kl,delta,hellinger --format json");
  ASSERT_EQ(r.exit_code, 0);
  std::string body = r.output.substr(0, r.output.find('\n'));
  const auto record = divbound::parse_record_json(body);
  ASSERT_EQ(record.results.size(), 3u);
  for (const auto& [name, value] : record.results) {
    EXPECT_NEAR(value, 0.0, 1e-15) << name;
  }
}

TEST_F(CliTest, ComputeChiSquareFamilyMember) {
  const auto r = run_cli("compute --p " + path("p_std.txt") + " --q " +
                         path("q_std.txt") + " --measure phi:2");
  EXPECT_EQ(r.exit_code, 0);
  EXPECT_TRUE(contains(r.output, "0.166666666667")) << r.output;
}

TEST_F(CliTest, ComputeAcceptsJsonDistributionFiles) {
  const auto r = run_cli("compute --p " + path("p_std.txt") + " --q " +
                         path("q_json.json") + " --measure kl");
  EXPECT_EQ(r.exit_code, 0);
  EXPECT_TRUE(contains(r.output, "0.143841036226")) << r.output;
}

TEST_F(CliTest, ComputeJsonOutputRoundTrips) {
  const auto r = run_cli("compute --p " + path("p_std.txt") + " --q " +
                         path("q_std.txt") +
                         " --measure kl,delta,m-n2n1 --format json");
  ASSERT_EQ(r.exit_code, 0);
  std::string body = r.output;
  while (!body.empty() && (body.back() == '\n' || body.back() == '\r')) {
    body.pop_back();
  }
  const auto record = divbound::parse_record_json(body);
  EXPECT_EQ(divbound::render_json(record), body);
  ASSERT_EQ(record.results.size(), 3u);
  EXPECT_EQ(record.results[0].first, "kl");
  EXPECT_NEAR(record.results[0].second, 0.14384103622589046, 1e-12);
}

TEST_F(CliTest, ComputeRejectsUnknownMeasure) {
  const auto r = run_cli("compute --p " + path("p_std.txt") + " --q " +
                         path("q_std.txt") + " --measure nope");
  EXPECT_EQ(r.exit_code, 1);
  EXPECT_TRUE(contains(r.output, "unknown measure")) << r.output;
  EXPECT_TRUE(contains(r.output, "m-n2n1")) << r.output;
}

TEST_F(CliTest, ComputeRejectsMismatchedLengths) {
  const auto r = run_cli("compute --p " + path("p_std.txt") + " --q " +
                         path("three.txt") + " --measure kl");
  EXPECT_EQ(r.exit_code, 1);
}

TEST_F(CliTest, ComputeRejectsUnnormalizedWithoutFlag) {
  const auto r = run_cli("compute --p " + path("unnormalized.txt") + " --q " +
                         path("q_std.txt") + " --measure kl");
  EXPECT_EQ(r.exit_code, 1);
  EXPECT_TRUE(contains(r.output, "normalize")) << r.output;
}

TEST_F(CliTest, ComputeNormalizeFlagRescales) {
  // [1, 3] normalized equals [0.25, 0.75], so KL(P||Q) vanishes.
  const auto r = run_cli("compute --p " + path("unnormalized.txt") + " --q " +
                         path("q_std.txt") + " --measure kl --normalize");
  EXPECT_EQ(r.exit_code, 0);
  EXPECT_TRUE(contains(r.output, "kl")) << r.output;
}

TEST_F(CliTest, ComputeRejectsMalformedFile) {
  const auto r = run_cli("compute --p " + path("bad.txt") + " --q " +
                         path("q_std.txt") + " --measure kl");
  EXPECT_EQ(r.exit_code, 1);
  EXPECT_TRUE(contains(r.output, "not a number")) << r.output;
}

TEST_F(CliTest, ComputeRejectsMissingFile) {
  const auto r = run_cli("compute --p " + path("absent.txt") + " --q " +
                         path("q_std.txt") + " --measure kl");
  EXPECT_EQ(r.exit_code, 1);
}

TEST_F(CliTest, BoundsDocumentedExample) {
  const auto r = run_cli("bounds --p " + path("p_std.txt") + " --q " +
                         path("q_std.txt") + " --generator phi:1");
  EXPECT_EQ(r.exit_code, 0);
  EXPECT_TRUE(contains(r.output, "0.143841036226")) << r.output;  // c and b
  EXPECT_TRUE(contains(r.output, "0.274653072167")) << r.output;  // e
  EXPECT_TRUE(contains(r.output, "0.366204096223")) << r.output;  // a
  EXPECT_TRUE(contains(r.output, "true")) << r.output;
  EXPECT_FALSE(contains(r.output, "false")) << r.output;
}

TEST_F(CliTest, BoundsPowerFamilyGenerator) {
  const auto r = run_cli("bounds --p " + path("p_std.txt") + " --q " +
                         path("q_std.txt") + " --generator fs:0.5 --format json");
  ASSERT_EQ(r.exit_code, 0);
  std::string body = r.output.substr(0, r.output.find('\n'));
  const auto record = divbound::parse_record_json(body);
  ASSERT_EQ(record.flags.size(), 2u);
  EXPECT_TRUE(record.flags[0].second);
  EXPECT_TRUE(record.flags[1].second);
}

TEST_F(CliTest, BoundsRejectsUnknownGenerator) {
  const auto r = run_cli("bounds --p " + path("p_std.txt") + " --q " +
                         path("q_std.txt") + " --generator xx");
  EXPECT_EQ(r.exit_code, 1);
  EXPECT_TRUE(contains(r.output, "unknown generator")) << r.output;
}

TEST_F(CliTest, VerifyRatioSupremaReportsTheFourConstants) {
  const auto r = run_cli("verify --suite ratio-sup --format json");
  ASSERT_EQ(r.exit_code, 0);
  std::string body = r.output.substr(0, r.output.find('\n'));
  const auto record = divbound::parse_record_json(body);
  double sup_ah = 0.0, sup_n2n1 = 0.0, sup_n2g = 0.0, sup_ag = 0.0;
  for (const auto& [k, v] : record.results) {
    if (k == "sup[ah/n2n1]") sup_ah = v;
    if (k == "sup[n2n1/n2g]") sup_n2n1 = v;
    if (k == "sup[n2g/ag]") sup_n2g = v;
    if (k == "sup[ag/an2]") sup_ag = v;
  }
  EXPECT_NEAR(sup_ah, 8.0, 1e-6);
  EXPECT_NEAR(sup_n2n1, 1.0 / 3.0, 1e-6);
  EXPECT_NEAR(sup_n2g, 0.75, 1e-6);
  EXPECT_NEAR(sup_ag, 4.0, 1e-6);
}

TEST_F(CliTest, VerifyChainSuitesPass) {
  EXPECT_EQ(run_cli("verify --suite mean-chain --trials 500").exit_code, 0);
  EXPECT_EQ(
      run_cli("verify --suite grand-chain --trials 500 --seed 42").exit_code,
      0);
  EXPECT_EQ(run_cli("verify --suite identities --trials 300").exit_code, 0);
}

TEST_F(CliTest, VerifyAllAggregatesSuites) {
  const auto r = run_cli("verify --suite all --trials 100 --format json");
  ASSERT_EQ(r.exit_code, 0);
  std::string body = r.output.substr(0, r.output.find('\n'));
  const auto record = divbound::parse_record_json(body);
  bool saw_mean = false, saw_grand = false, saw_ratio = false, saw_id = false;
  for (const auto& [k, v] : record.results) {
    saw_mean = saw_mean || k.rfind("mean-chain:", 0) == 0;
    saw_grand = saw_grand || k.rfind("grand-chain:", 0) == 0;
    saw_ratio = saw_ratio || k.rfind("ratio-sup:", 0) == 0;
    saw_id = saw_id || k.rfind("identities:", 0) == 0;
  }
  EXPECT_TRUE(saw_mean && saw_grand && saw_ratio && saw_id) << body;
}

TEST_F(CliTest, VerifyRejectsZeroTrials) {
  const auto r = run_cli("verify --suite mean-chain --trials 0");
  EXPECT_EQ(r.exit_code, 1);
}

TEST_F(CliTest, VerifyRejectsUnknownSuite) {
  const auto r = run_cli("verify --suite bogus");
  EXPECT_EQ(r.exit_code, 1);
  EXPECT_TRUE(contains(r.output, "unknown suite")) << r.output;
}

TEST_F(CliTest, MeansDocumentedExample) {
  const auto r = run_cli("means 1 4");
  EXPECT_EQ(r.exit_code, 0);
  EXPECT_TRUE(contains(r.output, "1.6")) << r.output;
  EXPECT_TRUE(contains(r.output, "2.25")) << r.output;
  EXPECT_TRUE(contains(r.output, "2.37170824513")) << r.output;
  EXPECT_TRUE(contains(r.output, "2.5")) << r.output;
  EXPECT_TRUE(contains(r.output, "true")) << r.output;
}

TEST_F(CliTest, MeansEqualArguments) {
  const auto r = run_cli("means 3 3 --format json");
  ASSERT_EQ(r.exit_code, 0);
  std::string body = r.output.substr(0, r.output.find('\n'));
  const auto record = divbound::parse_record_json(body);
  for (const auto& [k, v] : record.results) {
    EXPECT_DOUBLE_EQ(v, 3.0) << k;
  }
}

TEST_F(CliTest, MeansExtremeScaleStaysOrdered) {
  const auto r = run_cli("means 1e-3 1e3 --format json");
  ASSERT_EQ(r.exit_code, 0);
  std::string body = r.output.substr(0, r.output.find('\n'));
  const auto record = divbound::parse_record_json(body);
  ASSERT_EQ(record.flags.size(), 1u);
  EXPECT_EQ(record.flags[0].first, "ordered");
  EXPECT_TRUE(record.flags[0].second);
}

TEST_F(CliTest, MeansRejectsNonPositiveInput) {
  EXPECT_EQ(run_cli("means -1 2").exit_code, 1);
  EXPECT_EQ(run_cli("means 0 2").exit_code, 1);
}

TEST_F(CliTest, NoSubcommandIsAnArgumentError) {
  EXPECT_EQ(run_cli("").exit_code, 1);
}

TEST_F(CliTest, HelpExitsCleanly) {
  const auto r = run_cli("--help");
  EXPECT_EQ(r.exit_code, 0);
  EXPECT_TRUE(contains(r.output, "compute")) << r.output;
  EXPECT_TRUE(contains(r.output, "verify")) << r.output;
}

TEST(RecordRendering, TableAlignsAndJsonRoundTrips) {
  divbound::OutputRecord rec;
  rec.command = "compute";
  rec.inputs = {{"p", "a.txt"}, {"q", "b.txt"}};
  rec.results = {{"kl", 0.25}, {"delta", 1.0 / 3.0}};
  rec.flags = {{"pass", true}};
  const std::string table = divbound::render_table(rec);
  EXPECT_TRUE(contains(table, "command"));
  EXPECT_TRUE(contains(table, "0.333333333333"));
  const std::string json = divbound::render_json(rec);
  EXPECT_EQ(divbound::render_json(divbound::parse_record_json(json)), json);
}

TEST(RecordRendering, EscapesSpecialCharactersInStrings) {
  divbound::OutputRecord rec;
  rec.command = "compute";
  rec.inputs = {{"p", "we\"ird\\path\n"}};
  const std::string json = divbound::render_json(rec);
  EXPECT_EQ(divbound::render_json(divbound::parse_record_json(json)), json);
}

TEST(RecordRendering, TwelveSignificantDigits) {
  EXPECT_EQ(divbound::format_significant(2.3717082451262845),
            "2.37170824513");
  EXPECT_EQ(divbound::format_significant(8.0), "8");
  EXPECT_EQ(divbound::format_significant(1.0 / 3.0), "0.333333333333");
  EXPECT_EQ(divbound::format_significant(-1.5e-17), "-1.5e-17");
}

}  // namespace
