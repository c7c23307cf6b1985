#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <unistd.h>

#include "cli/commands.hpp"
#include "cli/manifest.hpp"
#include "nvdrift/csv_io.hpp"
#include "nvdrift/keyvalue.hpp"

namespace fs = std::filesystem;
using namespace nvdrift;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run_cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
    root_ = fs::temp_directory_path() / ("nvdrift_cli_" + std::to_string(::getpid()) + "_" + info->name());
    fs::remove_all(root_);
    fs::create_directories(root_);
  }
  void TearDown() override { fs::remove_all(root_); }

  std::string path(const std::string& rel) const { return (root_ / rel).string(); }

  std::string simulate(const std::string& dir, std::vector<std::string> extra = {}) {
    std::vector<std::string> args{"simulate", "--seed", "1", "--out", path(dir)};
    args.insert(args.end(), extra.begin(), extra.end());
    const auto r = run_cli(args);
    EXPECT_EQ(r.code, 0) << r.err;
    return path(dir);
  }

  fs::path root_;
};

}  // namespace

TEST(Sha256, KnownDigest) {
  EXPECT_EQ(cli::sha256_hex("abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  EXPECT_EQ(cli::sha256_hex(""), "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
}

TEST_F(CliTest, SimulateTrainEvaluateHappyPath) {
  const auto sim = simulate("sim");
  for (const char* f : {"T1.csv", "T2.csv", "X.csv", "Y.csv", "Z.csv", "nu_res.csv", "rabi_scan.csv",
                        "rabi_trace.csv", "ground_truth.txt", "scenario.txt", "simulate.manifest.json"}) {
    EXPECT_TRUE(fs::exists(fs::path(sim) / f)) << f;
  }
  auto r = run_cli({"train", "--in", sim, "--out", path("models"), "--split-days", "2.5"});
  ASSERT_EQ(r.code, 0) << r.err;
  for (const char* t : {"X", "Y", "Z", "nu_res"}) {
    EXPECT_TRUE(fs::exists(fs::path(path("models")) / ("model_" + std::string(t) + ".txt"))) << t;
  }
  r = run_cli({"evaluate", "--in", sim, "--models", path("models"), "--out", path("eval")});
  ASSERT_EQ(r.code, 0) << r.err;
  for (const char* f : {"report.txt", "report.csv", "residuals_X.csv", "evaluate.manifest.json"}) {
    EXPECT_TRUE(fs::exists(fs::path(path("eval")) / f)) << f;
  }
  EXPECT_NE(slurp(fs::path(path("eval")) / "report.csv").find("in_window_fraction,X,1,"), std::string::npos);
}

TEST_F(CliTest, TrainOnThreeRowsFailsWithoutOutputs) {
  fs::create_directories(path("tiny"));
  std::ofstream(path("tiny/data.csv")) << "timestamp,T1,T2,X\n0,13.1,17,1\n10,13.2,17.5,2\n20,13.1,18,3\n";
  const auto r = run_cli({"train", "--in", path("tiny/data.csv"), "--out", path("models"), "--train-until", "100"});
  EXPECT_NE(r.code, 0);
  EXPECT_EQ(r.err.find("error kind=PipelineError code=InsufficientRows"), 0u) << r.err;
  EXPECT_EQ(std::count(r.err.begin(), r.err.end(), '\n'), 1);
  EXPECT_FALSE(fs::exists(path("models")) && !fs::is_empty(path("models")));
}

TEST_F(CliTest, CorrelateMatchesGolden) {
  const auto sim = simulate("sim");
  const auto r = run_cli({"correlate", "--in", sim, "--out", path("corr"), "--image"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto csv = slurp(fs::path(path("corr")) / "correlation.csv");
  EXPECT_EQ(csv, slurp(fs::path(NVDRIFT_GOLDEN_DIR) / "correlation_seed1.csv"));
  EXPECT_TRUE(fs::exists(fs::path(path("corr")) / "correlation.ppm"));
}

TEST_F(CliTest, CorrelateMatrixShapeAndDiagonal) {
  const auto sim = simulate("sim");
  ASSERT_EQ(run_cli({"correlate", "--in", sim, "--out", path("corr")}).code, 0);
  std::istringstream in(slurp(fs::path(path("corr")) / "correlation.csv"));
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "variable,T1,T2,X,Y,Z");
  int row = 0;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::stringstream ls(line);
    for (std::string cell; std::getline(ls, cell, ',');) cells.push_back(cell);
    ASSERT_EQ(cells.size(), 6u);
    EXPECT_EQ(cells[static_cast<std::size_t>(row) + 1], "1");
    ++row;
  }
  EXPECT_EQ(row, 5);
}

TEST_F(CliTest, RerunsAreByteIdentical) {
  const auto a = simulate("a");
  const auto b = simulate("b");
  for (const auto& entry : fs::directory_iterator(a)) {
    const auto name = entry.path().filename();
    if (name == "simulate.manifest.json") continue;  // records its own --out path
    EXPECT_EQ(slurp(entry.path()), slurp(fs::path(b) / name)) << name;
  }
  ASSERT_EQ(run_cli({"train", "--in", a, "--out", path("m")}).code, 0);
  const auto first = slurp(fs::path(path("m")) / "train.manifest.json");
  const auto model = slurp(fs::path(path("m")) / "model_X.txt");
  ASSERT_EQ(run_cli({"train", "--in", a, "--out", path("m")}).code, 0);
  EXPECT_EQ(slurp(fs::path(path("m")) / "train.manifest.json"), first);
  EXPECT_EQ(slurp(fs::path(path("m")) / "model_X.txt"), model);
}

TEST_F(CliTest, ManifestHashesMatchInputs) {
  const auto sim = simulate("sim");
  ASSERT_EQ(run_cli({"train", "--in", sim, "--out", path("m")}).code, 0);
  const auto manifest = slurp(fs::path(path("m")) / "train.manifest.json");
  const auto digest = cli::sha256_hex(slurp(fs::path(sim) / "X.csv"));
  EXPECT_NE(manifest.find(digest), std::string::npos);
  EXPECT_NE(manifest.find("\"command\": \"train\""), std::string::npos);
  EXPECT_NE(manifest.find(cli::sha256_hex(slurp(fs::path(path("m")) / "model_X.txt"))), std::string::npos);
}

TEST_F(CliTest, MalformedCsvIsInputErrorWithLine) {
  fs::create_directories(path("bad"));
  std::ofstream(path("bad/X.csv")) << "timestamp,value\n0,1\n10,oops\n";
  const auto r = run_cli({"ingest", "--in", path("bad/X.csv"), "--out", path("out")});
  EXPECT_EQ(r.code, cli::kExitInput);
  EXPECT_EQ(r.err.find("error kind=InputError code=ParseError"), 0u) << r.err;
  EXPECT_NE(r.err.find("X.csv:3:"), std::string::npos) << r.err;
  EXPECT_FALSE(fs::exists(path("out")) && !fs::is_empty(path("out")));
}

TEST_F(CliTest, UsageErrors) {
  EXPECT_EQ(run_cli({}).code, cli::kExitUsage);
  EXPECT_EQ(run_cli({"frobnicate"}).code, cli::kExitUsage);
  EXPECT_EQ(run_cli({"train", "--in", "x"}).code, cli::kExitUsage);
  const auto r = run_cli({"evaluate", "--in", "x", "--out", "y", "--models", "z", "--window", "1,2"});
  EXPECT_EQ(r.code, cli::kExitUsage);
  EXPECT_EQ(r.err.find("error kind=UsageError"), 0u) << r.err;
  EXPECT_EQ(run_cli({"--help"}).code, 0);
}

TEST_F(CliTest, MissingInputIsInputError) {
  const auto r = run_cli({"train", "--in", path("nope"), "--out", path("m")});
  EXPECT_EQ(r.code, cli::kExitInput);
  EXPECT_EQ(r.err.find("error kind=InputError code=IoError"), 0u) << r.err;
}

TEST_F(CliTest, IngestRoundTripAndCorrection) {
  const auto sim = simulate("sim", {"--discontinuity"});
  ASSERT_EQ(run_cli({"ingest", "--in", sim, "--out", path("plain")}).code, 0);
  const auto original = load_dataset(sim);
  const auto ingested = load_dataset(path("plain/dataset.csv"));
  for (const auto& s : original.series()) EXPECT_EQ(ingested.get(s.name()), s) << s.name();

  const auto gt = KeyValueFile::parse(slurp(fs::path(sim) / "ground_truth.txt"), "gt");
  const std::string t_break(gt.get_string("discontinuity.t_break"));
  const auto r = run_cli({"ingest", "--in", sim, "--out", path("fixed"), "--correct",
                          "Y:" + t_break + ":" + std::string(gt.get_string("discontinuity.offset_y"))});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto fixed = load_dataset(path("fixed/dataset.csv"));
  const auto& y0 = original.get("Y");
  const auto& y1 = fixed.get("Y");
  ASSERT_EQ(y0.size(), y1.size());
  EXPECT_NEAR(y1[y1.size() - 1].value - y0[y0.size() - 1].value, -0.227, 1e-12);
  EXPECT_EQ(y1[0].value, y0[0].value);
}

TEST_F(CliTest, RabiFitBothKinds) {
  const auto sim = simulate("sim", {"--noiseless"});
  auto r = run_cli({"rabi-fit", "--in", sim + "/rabi_scan.csv", "--out", path("rf")});
  ASSERT_EQ(r.code, 0) << r.err;
  auto kv = KeyValueFile::parse(slurp(fs::path(path("rf")) / "rabi_fit.txt"), "fit");
  EXPECT_EQ(kv.get_string("kind"), "lorentzian");
  EXPECT_NEAR(kv.get_double("fwhm_mhz"), 1.55, 1e-6 * 1.55);
  r = run_cli({"rabi-fit", "--in", sim + "/rabi_trace.csv", "--out", path("rt")});
  ASSERT_EQ(r.code, 0) << r.err;
  kv = KeyValueFile::parse(slurp(fs::path(path("rt")) / "rabi_fit.txt"), "fit");
  EXPECT_EQ(kv.get_string("kind"), "sine");
  EXPECT_NEAR(kv.get_double("contrast_percent"), 31.0, 1e-6);

  r = run_cli({"evaluate", "--in", sim, "--models", path("none"), "--out", path("e")});
  EXPECT_EQ(r.code, cli::kExitInput);
}

TEST_F(CliTest, ReportWithoutModelsAndFwhmFromFit) {
  const auto sim = simulate("sim");
  ASSERT_EQ(run_cli({"rabi-fit", "--in", sim + "/rabi_scan.csv", "--out", path("rf")}).code, 0);
  const auto r = run_cli({"report", "--in", sim, "--rabi-fit", path("rf/rabi_fit.txt"), "--out", path("rep")});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto csv = slurp(fs::path(path("rep")) / "report.csv");
  EXPECT_NE(csv.find("drift_rate,X,"), std::string::npos);
  EXPECT_NE(csv.find("half_contrast_threshold,nu_res,"), std::string::npos);
  EXPECT_NE(r.out.find("Drift rates"), std::string::npos);
}
