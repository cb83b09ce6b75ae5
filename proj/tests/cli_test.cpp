#include <gtest/gtest.h>

#include <filesystem>
#include <functional>
#include <fstream>
#include <sstream>

#include "urysohn/cli.hpp"
#include "urysohn/serialize.hpp"

namespace urysohn {
namespace {

namespace fs = std::filesystem;

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
    dir_ = fs::temp_directory_path() / (std::string("urysohn-cli-") + info->name());
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  void write(const std::string& name, const Json& j) const {
    std::ofstream(path(name)) << dump(j);
  }

  int run(const std::vector<std::string>& args) {
    out_.str("");
    err_.str("");
    return cli::run(args, out_, err_);
  }

  fs::path dir_;
  std::ostringstream out_;
  std::ostringstream err_;
};

Json space_json(std::vector<std::string> points, std::vector<std::vector<std::string>> dist) {
  return Json{{"points", points}, {"dist", dist}};
}

void write_worked_example(const std::function<void(const std::string&, const Json&)>& write) {
  write("A.json", space_json({"a"}, {{"0/1"}}));
  write("B.json", space_json({"a", "x", "y"}, {{"0/1", "1/1", "1/1"}, {"1/1", "0/1", "1/1"}, {"1/1", "1/1", "0/1"}}));
  write("f.json", Json{{"a", "a"}});
  write("g.json", Json{{"a", "a"}, {"x", "y"}, {"y", "x"}});
}

TEST_F(Cli, GenIsDeterministic) {
  for (const char* kind : {"metric", "isometry", "algebra", "automorphism", "inclusion", "embedding"}) {
    ASSERT_EQ(run({"gen", "--kind", kind, "--points", "6", "--seed", "7"}), cli::kExitOk) << err_.str();
    const std::string first = out_.str();
    ASSERT_EQ(run({"gen", "--kind", kind, "--points", "6", "--seed", "7"}), cli::kExitOk);
    EXPECT_EQ(out_.str(), first) << kind;
    EXPECT_EQ(dump(parse_json(first)), first);
    ASSERT_EQ(run({"gen", "--kind", kind, "--points", "6", "--seed", "7", "--out", path("g.json")}), cli::kExitOk);
    EXPECT_EQ(run({"verify", path("g.json")}), cli::kExitOk) << kind << "\n" << out_.str();
  }
}

TEST_F(Cli, RootMetricThenVerify) {
  write_worked_example([this](const std::string& n, const Json& j) { write(n, j); });
  ASSERT_EQ(run({"root-metric", "--base", path("A.json"), "--space", path("B.json"), "--f", path("f.json"), "--g",
                 path("g.json"), "--n", "2", "--out", path("h.json")}),
            cli::kExitOk)
      << err_.str();
  EXPECT_TRUE(fs::exists(path("h.cert.json")));
  EXPECT_EQ(run({"verify", "--cert", path("h.cert.json")}), cli::kExitOk) << out_.str();
  EXPECT_EQ(run({"verify", path("h.json")}), cli::kExitOk);
  const Json h = load_json_file(path("h.json"));
  EXPECT_EQ(h["map"]["x@1"], "x@2");
  ASSERT_EQ(run({"verify", "--cert", path("h.cert.json"), "--format", "json"}), cli::kExitOk);
  EXPECT_TRUE(parse_json(out_.str())["passed"].get<bool>());
}

TEST_F(Cli, DomainErrorExitsOne) {
  write_worked_example([this](const std::string& n, const Json& j) { write(n, j); });
  write("bad_g.json", Json{{"a", "x"}, {"x", "a"}, {"y", "y"}});
  EXPECT_EQ(run({"root-metric", "--base", path("A.json"), "--space", path("B.json"), "--f", path("f.json"), "--g",
                 path("bad_g.json"), "--n", "2", "--out", path("h.json")}),
            cli::kExitDomain);
  EXPECT_NE(err_.str().find("error[precondition]"), std::string::npos) << err_.str();
}

TEST_F(Cli, ParseAndUsageErrorsExitTwo) {
  EXPECT_EQ(run({"no-such-command"}), cli::kExitIo);
  EXPECT_EQ(run({"verify", path("missing.json")}), cli::kExitIo);
  std::ofstream(path("junk.json")) << "{not json";
  EXPECT_EQ(run({"verify", path("junk.json")}), cli::kExitIo);
  EXPECT_NE(err_.str().find("error[parse]"), std::string::npos);
  write("space.json", space_json({"a", "b"}, {{"0/1", "1/1"}, {"1/1", "0/1"}}));
  write("map.json", Json{{"a", "b"}});
  EXPECT_EQ(run({"rohlin", "--space", path("space.json"), "--map", path("map.json"), "--epsilon", "x", "--periods", "4",
                 "--out", path("r.json")}),
            cli::kExitIo);
  EXPECT_EQ(run({"gen", "--kind", "metric", "--points", "zero"}), cli::kExitIo);
}

TEST_F(Cli, FailedVerifyExitsOne) {
  ASSERT_EQ(run({"tower-metric", "--depth", "2", "--seed", "3", "--out", path("t.json")}), cli::kExitOk);
  Json cert = load_json_file(path("t.cert.json"));
  auto& dist = cert["stages"][1]["space"]["dist"];
  dist[0][1] = dist[0][1].get<std::string>() == "1/1" ? "2/1" : "1/1";
  write("broken.json", cert);
  EXPECT_EQ(run({"verify", path("broken.json")}), cli::kExitDomain);
}

TEST_F(Cli, QActionZeroIsIdentity) {
  for (const char* side : {"tower-algebra", "tower-metric"}) {
    ASSERT_EQ(run({side, "--depth", "3", "--seed", "5", "--out", path("t.json")}), cli::kExitOk) << err_.str();
    ASSERT_EQ(run({"qaction", "--tower", path("t.cert.json"), "--k", "0", "--stage", "3", "--out", path("q.json")}),
              cli::kExitOk)
        << err_.str();
    const Json q = load_json_file(path("q.json"));
    for (const auto& [from, to] : q["map"].items()) EXPECT_EQ(from, to.get<std::string>());
    EXPECT_EQ(run({"verify", path("q.cert.json")}), cli::kExitOk);
    EXPECT_EQ(run({"qaction", "--tower", path("t.cert.json"), "--k", "1", "--stage", "4", "--out", path("q.json")}),
              cli::kExitDomain);
  }
}

TEST_F(Cli, ConstructorsEmitVerifiableCertificates) {
  const std::vector<std::vector<std::string>> commands{
      {"tower-algebra", "--n", "2", "--steps", "2", "--seed", "1"},
      {"tower-algebra", "--n", "2", "--steps", "2", "--dyadic", "--seed", "1"},
      {"tower-metric", "--n", "3", "--steps", "3", "--root-every", "2", "--seed", "1"},
  };
  for (auto args : commands) {
    args.insert(args.end(), {"--out", path("r.json")});
    ASSERT_EQ(run(args), cli::kExitOk) << args[0] << ": " << err_.str();
    EXPECT_EQ(run({"verify", path("r.cert.json")}), cli::kExitOk) << args[0];
  }
  ASSERT_EQ(run({"gen", "--kind", "inclusion", "--points", "4", "--seed", "2", "--out", path("inc.json")}), cli::kExitOk);
  ASSERT_EQ(run({"amalgam-algebra", "--parts", path("inc.json"), path("inc.json"), "--out", path("am.json")}),
            cli::kExitOk)
      << err_.str();
  EXPECT_EQ(run({"verify", path("am.cert.json")}), cli::kExitOk);
  ASSERT_EQ(run({"gen", "--kind", "embedding", "--points", "4", "--seed", "2", "--out", path("e.json")}), cli::kExitOk);
  ASSERT_EQ(run({"amalgam-metric", "--parts", path("e.json"), path("e.json"), "--out", path("mm.json")}), cli::kExitOk)
      << err_.str();
  EXPECT_EQ(run({"verify", path("mm.cert.json")}), cli::kExitOk);
}

TEST_F(Cli, RohlinEvenPeriods) {
  write("space.json", space_json({"a", "ha"}, {{"0/1", "1/1"}, {"1/1", "0/1"}}));
  write("map.json", Json{{"a", "ha"}});
  ASSERT_EQ(run({"rohlin", "--space", path("space.json"), "--map", path("map.json"), "--epsilon", "4", "--periods",
                 "2,4,6,...", "--out", path("g.json")}),
            cli::kExitOk)
      << err_.str();
  EXPECT_NE(out_.str().find("s = 4"), std::string::npos) << out_.str();
  EXPECT_EQ(run({"verify", path("g.cert.json")}), cli::kExitOk);
}

}  // namespace
}  // namespace urysohn
