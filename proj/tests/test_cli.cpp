#include <gtest/gtest.h>
#include <sys/wait.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <nlohmann/json.hpp>

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

const std::string kCli = HOLEXT_CLI_PATH;
const std::string kDemo = HOLEXT_DEMO_DIR;

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct RunResult {
  int code = -1;
  std::string out;
  std::string err;
};

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("holext_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  RunResult run(const std::string& args) {
    const auto out = dir_ / "stdout.txt";
    const auto err = dir_ / "stderr.txt";
    const std::string cmd = "cd '" + dir_.string() + "' && '" + kCli + "' " + args + " >'" + out.string() +
                            "' 2>'" + err.string() + "'";
    const int status = std::system(cmd.c_str());
    RunResult r;
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    r.out = slurp(out);
    r.err = slurp(err);
    return r;
  }

  std::string demo(const std::string& name) const { return "'" + kDemo + "/" + name + "'"; }
  fs::path path(const std::string& name) const { return dir_ / name; }

  fs::path dir_;
};

}  // namespace

TEST_F(CliTest, CapDiskWritesEstimateAndSequence) {
  const auto r = run("cap --set " + demo("disk.json") + " --n 128 --out cap.json");
  ASSERT_EQ(r.code, 0) << r.err;
  const auto doc = json::parse(slurp(path("cap.json")));
  EXPECT_NEAR(doc["result"]["value"].get<double>(), 1.0, 0.1);
  EXPECT_FALSE(doc["result"]["polar"].get<bool>());
  EXPECT_EQ(doc["manifest"]["command"], "cap");
  EXPECT_EQ(doc["manifest"]["input_digest"].get<std::string>().size(), 64u);
  const auto csv = slurp(path("cap.dn.csv"));
  EXPECT_EQ(csv.rfind("k,d_k\n2,", 0), 0u);
}

TEST_F(CliTest, CapSegmentAndSinglePoint) {
  auto r = run("cap --set " + demo("segment.json"));
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NEAR(json::parse(r.out)["result"]["value"].get<double>(), 0.5, 0.05);
  r = run("cap --set " + demo("cloud-single-point.json"));
  ASSERT_EQ(r.code, 0) << r.err;
  const auto doc = json::parse(r.out);
  EXPECT_EQ(doc["result"]["value"].get<double>(), 0.0);
  EXPECT_TRUE(doc["result"]["polar"].get<bool>());
}

TEST_F(CliTest, GreenValues) {
  auto r = run("green --set " + demo("disk.json") + " --points " + demo("points.csv") + " --out g.csv");
  ASSERT_EQ(r.code, 0) << r.err;
  std::istringstream csv(slurp(path("g.csv")));
  std::string line;
  std::getline(csv, line);
  EXPECT_EQ(line, "re,im,g");
  std::getline(csv, line);
  EXPECT_EQ(line, "2,0,0.69314718055994529");
  std::getline(csv, line);
  EXPECT_EQ(line.substr(line.rfind(',') + 1), "0");
  EXPECT_TRUE(fs::exists(path("g.manifest.json")));

  r = run("green --set " + demo("segment.json") + " --points " + demo("points.csv"));
  ASSERT_EQ(r.code, 0) << r.err;
  std::istringstream seg(r.out);
  std::getline(seg, line);
  std::getline(seg, line);
  EXPECT_NEAR(std::stod(line.substr(line.rfind(',') + 1)), 1.3170, 1e-4);
}

TEST_F(CliTest, GreenOnPolarSetFails) {
  const auto r = run("green --set " + demo("cloud-single-point.json") + " --points " + demo("points.csv"));
  EXPECT_EQ(r.code, 3);
  EXPECT_NE(r.err.find("GreenUndefinedPolarSet"), std::string::npos);
}

TEST_F(CliTest, BernsteinReport) {
  const auto r = run("bernstein --poly " + demo("chebyshev3.json") + " --set " + demo("segment.json") +
                     " --points " + demo("points.csv"));
  ASSERT_EQ(r.code, 0) << r.err;
  const auto doc = json::parse(r.out);
  EXPECT_TRUE(doc["result"]["all_pass"].get<bool>());
  EXPECT_NEAR(doc["result"]["entries"][0]["bound"].get<double>(), 51.98076211353316, 1e-9);
}

TEST_F(CliTest, GammaCapBidiskAndLine) {
  auto r = run("gammacap --set " + demo("bidisk.json") + " --unitaries 1");
  ASSERT_EQ(r.code, 0) << r.err;
  const double v = json::parse(r.out)["result"]["value"].get<double>();
  EXPECT_GE(v, 0.9);
  EXPECT_LE(v, 1.1);
  r = run("gammacap --set " + demo("complex-line.json") + " --unitaries 4 --seed 11 --fiber-res 32 --proj-res 16");
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_LT(json::parse(r.out)["result"]["value"].get<double>(), 1e-3);
}

TEST_F(CliTest, ExtendThenEval) {
  auto r = run("extend --seq " + demo("geometric.json") + " --samples " + demo("circle-samples.json") +
               " --config " + demo("config.json") + " --out cert.json");
  ASSERT_EQ(r.code, 0) << r.err;
  const auto cert = json::parse(slurp(path("cert.json")));
  EXPECT_EQ(cert["certificate"]["C1"].get<double>(), 1.0);
  EXPECT_GE(cert["certificate"]["C2"].get<double>(), 0.9);
  EXPECT_TRUE(fs::exists(path("cert.boundary.csv")));

  r = run("eval --cert cert.json --seq " + demo("geometric.json") + " --z1 0.1 --z2 2 --tol 1e-10");
  ASSERT_EQ(r.code, 0) << r.err;
  const auto val = json::parse(r.out)["result"]["value"];
  EXPECT_NEAR(val[0].get<double>(), 1.25, 1e-10);
  EXPECT_EQ(val[1].get<double>(), 0.0);

  r = run("eval --cert cert.json --seq " + demo("geometric.json") + " --z1=0,0 --z2=-3,1");
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(json::parse(r.out)["result"]["value"][0].get<double>(), 1.0);
  EXPECT_EQ(json::parse(r.out)["result"]["tail_bound"].get<double>(), 0.0);
}

TEST_F(CliTest, NegativePathsExitThree) {
  auto r = run("extend --seq " + demo("geometric.json") + " --samples " + demo("single-sample.json"));
  EXPECT_EQ(r.code, 3);
  EXPECT_NE(r.err.find("AllStrataPolar"), std::string::npos);
  EXPECT_NE(r.err.find("stratify"), std::string::npos);

  ASSERT_EQ(run("extend --seq " + demo("geometric.json") + " --samples " + demo("circle-samples.json") +
                " --out cert.json").code, 0);
  r = run("eval --cert cert.json --seq " + demo("geometric.json") + " --z1 0.9 --z2 2");
  EXPECT_EQ(r.code, 3);
  EXPECT_NE(r.err.find("OutsideCertifiedDomain"), std::string::npos);

  r = run("extend --seq " + demo("geometric.json") + " --samples " + demo("circle-samples.json") +
          " --domain uniform");
  EXPECT_EQ(r.code, 3);
  EXPECT_NE(r.err.find("NotSublinear"), std::string::npos);
}

TEST_F(CliTest, UniformDomainForSqrtDegree) {
  const auto r = run("extend --seq " + demo("sqrt-degree.json") + " --samples " + demo("half-circle-samples.json") +
                     " --config " + demo("uniform-config.json"));
  ASSERT_EQ(r.code, 0) << r.err;
  const auto cert = json::parse(r.out)["certificate"];
  EXPECT_EQ(cert["kind"], "uniform");
  EXPECT_EQ(cert["exponent"].get<double>(), 0.0);
}

TEST_F(CliTest, InputErrorsExitTwo) {
  std::ofstream(path("bad.json")) << "{not json";
  std::ofstream(path("neg.json")) << R"({"shape":"disk","center":[0,0],"radius":-1})";
  EXPECT_EQ(run("cap --set bad.json").code, 2);
  EXPECT_EQ(run("cap --set missing.json").code, 2);
  EXPECT_EQ(run("cap --set neg.json").code, 2);
  EXPECT_EQ(run("cap --set " + demo("disk.json") + " --n 2").code, 2);
  EXPECT_EQ(run("cap").code, 2);
  EXPECT_EQ(run("frobnicate").code, 2);
  EXPECT_EQ(run("eval --cert bad.json --seq " + demo("geometric.json") + " --z1 0 --z2 0").code, 2);
  EXPECT_EQ(run("eval --cert " + demo("disk.json") + " --seq " + demo("geometric.json") + " --z1 0 --z2 abc").code, 2);
}

TEST_F(CliTest, ReRunsAreByteIdentical) {
  const std::string ext = "extend --seq " + demo("geometric-2.json") + " --samples " + demo("circle-samples.json");
  ASSERT_EQ(run(ext + " --out a.json").code, 0);
  ASSERT_EQ(run(ext + " --out b.json").code, 0);
  EXPECT_EQ(slurp(path("a.json")), slurp(path("b.json")));
  EXPECT_EQ(slurp(path("a.boundary.csv")), slurp(path("b.boundary.csv")));

  const std::string gc = "gammacap --set " + demo("bidisk.json") + " --unitaries 3 --seed 42 --fiber-res 24 --proj-res 16";
  ASSERT_EQ(run(gc + " --out a.json").code, 0);
  ASSERT_EQ(run(gc + " --out b.json").code, 0);
  EXPECT_EQ(slurp(path("a.json")), slurp(path("b.json")));
  // A different seed changes the manifest and the sampled unitaries.
  ASSERT_EQ(run("gammacap --set " + demo("bidisk.json") + " --unitaries 3 --seed 43 --fiber-res 24 --proj-res 16 --out c.json").code, 0);
  EXPECT_NE(slurp(path("a.json")), slurp(path("c.json")));
}
