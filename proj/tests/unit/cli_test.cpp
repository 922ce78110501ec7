#include "iwasawa/cli/app.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "iwasawa/cli/commands.hpp"
#include "iwasawa/cli/schema.hpp"

namespace iwasawa::cli {
namespace {

using nlohmann::json;
namespace fs = std::filesystem;

struct Invocation {
  int code;
  std::string out;
  std::string err;
};

Invocation run_cli(std::vector<std::string> args) {
  args.insert(args.begin(), "iwasawa");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

class TempDir {
 public:
  TempDir() {
    path_ = fs::temp_directory_path() /
            ("iwasawa_cli_test_" + std::to_string(::getpid()) + "_" + std::to_string(counter_++));
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }

  std::string write(const std::string& name, const std::string& text) const {
    const fs::path file = path_ / name;
    std::ofstream(file) << text;
    return file.string();
  }
  std::string file(const std::string& name) const { return (path_ / name).string(); }

 private:
  static inline int counter_ = 0;
  fs::path path_;
};

std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> fields;
    std::string field;
    std::istringstream ls(line);
    while (std::getline(ls, field, ',')) fields.push_back(field);
    if (!line.empty() && line.back() == ',') fields.emplace_back();
    rows.push_back(fields);
  }
  return rows;
}

std::size_t column(const std::vector<std::string>& header, const std::string& name) {
  return static_cast<std::size_t>(std::find(header.begin(), header.end(), name) - header.begin());
}

TEST(Schema, EmbeddedCopyMatchesShippedFile) {
  std::ifstream in(IWASAWA_SCHEMA_PATH);
  ASSERT_TRUE(in.good());
  EXPECT_EQ(json::parse(in), runconfig_schema());
}

TEST(Schema, AcceptsAndRejects) {
  const SchemaValidator v(runconfig_schema());
  EXPECT_TRUE(v.validate(json{{"p", 2}, {"seed", 3}, {"n", "random:2:5"}}).empty());
  EXPECT_TRUE(v.validate(json{{"p", 1}, {"n", json::parse("[[[[0, 2]]]]")}}).empty());

  const auto low = v.validate(json{{"p", 0}});
  ASSERT_EQ(low.size(), 1u);
  EXPECT_NE(low[0].find("/p"), std::string::npos);
  EXPECT_NE(low[0].find("minimum"), std::string::npos);

  EXPECT_FALSE(v.validate(json::object()).empty());
  EXPECT_FALSE(v.validate(json{{"p", 2}, {"bogus", 1}}).empty());
  EXPECT_FALSE(v.validate(json{{"p", 2.5}}).empty());
  EXPECT_FALSE(v.validate(json{{"p", 2}, {"n", "random:0:1"}}).empty());
  EXPECT_FALSE(v.validate(json{{"p", 2}, {"n", "random:x:1"}}).empty());
  EXPECT_FALSE(v.validate(json{{"p", 2}, {"q_grid", json::array()}}).empty());
  EXPECT_FALSE(v.validate(json{{"p", 2}, {"output", {{"format", "xml"}}}}).empty());
  EXPECT_FALSE(v.validate(json{{"p", 1}, {"n", json::parse("[[[[0, 2, 3]]]]")}}).empty());
}

TEST(Schema, RejectsUnsupportedKeywords) {
  const SchemaValidator v(json{{"type", "object"}, {"patternProperties", json::object()}});
  EXPECT_THROW(v.validate(json::object()), std::logic_error);
}

TEST(FormatDouble, RoundTrips) {
  for (double x : {0.1, 1.3862943611198906, 1e-300, -2.5, 123456789.0}) {
    EXPECT_EQ(std::stod(format_double(x)), x);
  }
  EXPECT_EQ(format_double(std::numeric_limits<double>::infinity()), "inf");
}

TEST(VerifyGroup, PassesOnRandomTrials) {
  const Invocation r = run_cli({"verify-group", "--p", "2", "--seed", "42", "--no-timestamp"});
  EXPECT_EQ(r.code, kOk) << r.err;
  const json report = json::parse(r.out);
  EXPECT_EQ(report.at("status"), "passed");
  EXPECT_EQ(report.at("results").at("trials"), 100);
  EXPECT_EQ(report.at("results").at("checks").size(), 6u);
  EXPECT_FALSE(report.contains("timestamp"));
}

TEST(VerifyGroup, InvalidOrderIsConfigError) {
  const Invocation r = run_cli({"verify-group", "--p", "0"});
  EXPECT_EQ(r.code, kConfigError);
  EXPECT_NE(r.err.find("schema"), std::string::npos);
  EXPECT_NE(r.err.find("/p"), std::string::npos);
  EXPECT_TRUE(r.out.empty());
}

TEST(VerifyGroup, InjectedFaultReportsImaginaryResidue) {
  const Invocation r = run_cli({"verify-group", "--p", "2", "--inject-fault", "--no-timestamp"});
  EXPECT_EQ(r.code, kCheckFailed);
  const json report = json::parse(r.out);
  EXPECT_EQ(report.at("status"), "failed");
  bool found = false;
  for (const auto& c : report.at("results").at("checks")) {
    if (c.at("check") == "pairing_symmetry") {
      EXPECT_EQ(c.at("error"), "ImaginaryResidue");
      found = true;
    }
  }
  EXPECT_TRUE(found);
  EXPECT_NE(r.err.find("ImaginaryResidue"), std::string::npos);
}

TEST(CocycleNorm, OneDimensionalClosedForms) {
  TempDir dir;
  const std::string cfg = dir.write("c.json", R"({"p": 1, "samples": 16,
      "n": [[[[0, 2]]]], "s0": [[[[2, 0]]]]})");
  const Invocation r = run_cli({"cocycle-norm", "--config", cfg, "--format", "csv"});
  ASSERT_EQ(r.code, kOk) << r.err;
  const auto rows = parse_csv(r.out);
  ASSERT_EQ(rows.size(), 3u);
  EXPECT_EQ(rows[0], kNormColumns);
  const auto& header = rows[0];
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const auto& row = rows[i];
    const double closed = std::stod(row[column(header, "norm_closed")]);
    const double direct = std::stod(row[column(header, "norm_direct")]);
    const double expected = row[column(header, "kind")] == "n" ? 1.3862944 : 0.8925742;
    EXPECT_NEAR(closed, expected, 1e-7);
    EXPECT_NEAR(direct, expected, 1e-7);
    EXPECT_EQ(row[column(header, "agree")], "true");
    EXPECT_EQ(row[column(header, "unitary")], "true");
  }
}

TEST(CocycleNorm, IdentityElementIsZero) {
  TempDir dir;
  const std::string cfg = dir.write("c.json", R"({"p": 2, "samples": 64,
      "s0": [[[[1, 0], [0, 0]], [[0, 0], [1, 0]]]], "n": "random:1:3"})");
  const Invocation r = run_cli({"cocycle-norm", "--config", cfg, "--no-timestamp"});
  ASSERT_EQ(r.code, kOk) << r.err;
  const json report = json::parse(r.out);
  const json& first = report.at("results").at("elements").at(0);
  EXPECT_EQ(first.at("kind"), "s");
  EXPECT_NEAR(first.at("norm_closed").at("value").get<double>(), 0.0, 1e-20);
  EXPECT_NEAR(first.at("norm_direct").at("value").get<double>(), 0.0, 1e-20);
}

TEST(CocycleNorm, RejectsMalformedElements) {
  TempDir dir;
  // Order mismatch with p.
  EXPECT_EQ(run_cli({"cocycle-norm", "--config", dir.write("a.json", R"({"p": 2, "n": [[[[0, 1]]]]})")}).code,
            kConfigError);
  // Not skew-Hermitian.
  EXPECT_EQ(run_cli({"cocycle-norm", "--config", dir.write("b.json", R"({"p": 1, "n": [[[[1, 0]]]]})")}).code,
            kConfigError);
  // Not JSON at all.
  EXPECT_EQ(run_cli({"cocycle-norm", "--config", dir.write("c.json", "{p: 1")}).code, kConfigError);
}

TEST(Verdict, OneDimensionalDichotomy) {
  const Invocation r = run_cli({"verdict", "--p", "1", "--samples", "32", "--no-timestamp"});
  EXPECT_EQ(r.code, kOk) << r.err;
  const json report = json::parse(r.out);
  EXPECT_EQ(report.at("results").at("summary"), "SPECIAL, UNITARY");
  EXPECT_EQ(report.at("config").at("s0"), "random:3:0");
  EXPECT_NE(r.err.find("SPECIAL, UNITARY"), std::string::npos);
}

TEST(Verdict, TinyBudgetIsInconclusiveNotFalse) {
  const Invocation r = run_cli({"verdict", "--p", "3", "--samples", "2", "--no-timestamp"});
  EXPECT_EQ(r.code, kCheckFailed);
  EXPECT_EQ(json::parse(r.out).at("results").at("summary"), "INCONCLUSIVE: widen budget");
  EXPECT_NE(r.err.find("inconclusive: widen budget"), std::string::npos);
}

TEST(Scan, ClassifiesAroundTheCriticalExponent) {
  TempDir dir;
  const std::string cfg = dir.write("s.json", R"({"p": 1, "samples": 4, "q_grid": [0, 0.5, 1],
      "s0": [[[[2, 0]]]]})");
  const Invocation r = run_cli({"scan", "--config", cfg, "--format", "csv"});
  ASSERT_EQ(r.code, kOk) << r.err;
  const auto rows = parse_csv(r.out);
  ASSERT_EQ(rows.size(), 4u);
  const auto& header = rows[0];
  EXPECT_EQ(rows[1][column(header, "verdict")], "divergent");
  EXPECT_EQ(rows[2][column(header, "verdict")], "convergent");
  EXPECT_EQ(rows[3][column(header, "verdict")], "divergent");
  EXPECT_EQ(rows[2][column(header, "unitary")], "true");
  EXPECT_EQ(rows[3][column(header, "unitary")], "false");
}

TEST(Scan, EmptyGridIsConfigError) {
  TempDir dir;
  const std::string cfg = dir.write("s.json", R"({"p": 2, "q_grid": []})");
  const Invocation r = run_cli({"scan", "--config", cfg});
  EXPECT_EQ(r.code, kConfigError);
  EXPECT_NE(r.err.find("/q_grid"), std::string::npos);
}

TEST(OrbitClassify, SignsOfScalarPoints) {
  TempDir dir;
  const std::string cfg = dir.write("o.json", R"({"p": 1, "points": [[[[0, 1]]], [[[0, -3]]]]})");
  const Invocation r = run_cli({"orbit-classify", "--config", cfg, "--format", "csv"});
  ASSERT_EQ(r.code, kOk) << r.err;
  const auto rows = parse_csv(r.out);
  ASSERT_EQ(rows.size(), 3u);
  EXPECT_EQ(rows[1][1], "+");
  EXPECT_EQ(rows[2][1], "-");
}

TEST(Factor, HandExampleAndOffOrbitPoint) {
  TempDir dir;
  const std::string good = dir.write("f.json", R"({"p": 2,
      "points": [[[[0, 2], [0, 1]], [[0, 1], [0, 1]]]]})");
  const Invocation ok = run_cli({"factor", "--config", good, "--no-timestamp"});
  ASSERT_EQ(ok.code, kOk) << ok.err;
  const json report = json::parse(ok.out);
  const json& s = report.at("results").at("rows").at(0).at("s");
  EXPECT_EQ(s, json::parse("[[[1,0],[0,0]],[[1,0],[1,0]]]"));

  const std::string bad = dir.write("g.json", R"({"p": 1, "points": [[[[0, -1]]]]})");
  const Invocation no = run_cli({"factor", "--config", bad, "--no-timestamp"});
  EXPECT_EQ(no.code, kCheckFailed);
  EXPECT_NE(no.out.find("NotInPrincipalOrbit"), std::string::npos);

  EXPECT_EQ(run_cli({"factor", "--p", "3", "--seed", "4"}).code, kOk);
}

TEST(Reports, TimestampAndOutputFile) {
  TempDir dir;
  const Invocation stamped = run_cli({"verify-group", "--p", "1"});
  EXPECT_TRUE(json::parse(stamped.out).contains("timestamp"));

  const std::string path = dir.file("report.json");
  const Invocation r = run_cli({"verify-group", "--p", "1", "--output", path});
  EXPECT_EQ(r.code, kOk);
  EXPECT_TRUE(r.out.empty());
  std::ifstream in(path);
  EXPECT_EQ(json::parse(in).at("command"), "verify-group");
}

TEST(Reports, IndependentOfWorkerCount) {
  TempDir dir;
  const std::string cfg = dir.write("d.json", R"({"p": 2, "samples": 3000, "seed": 5,
      "s0": "random:1:5", "n": "random:1:6"})");
  ::setenv("IWASAWA_THREADS", "1", 1);
  const Invocation a = run_cli({"cocycle-norm", "--config", cfg, "--no-timestamp"});
  ::setenv("IWASAWA_THREADS", "3", 1);
  const Invocation b = run_cli({"cocycle-norm", "--config", cfg, "--no-timestamp"});
  ::unsetenv("IWASAWA_THREADS");
  EXPECT_EQ(a.code, b.code);
  EXPECT_EQ(a.out, b.out);
}

TEST(Cli, UnknownSubcommandAndFlags) {
  EXPECT_EQ(run_cli({"frobnicate"}).code, kConfigError);
  EXPECT_EQ(run_cli({"verify-group", "--format", "xml", "--p", "1"}).code, kConfigError);
  EXPECT_EQ(run_cli({"verdict", "--inject-fault", "--p", "1"}).code, kConfigError);
  EXPECT_EQ(run_cli({"verify-group", "--help"}).code, kOk);
}

}  // namespace
}  // namespace iwasawa::cli
