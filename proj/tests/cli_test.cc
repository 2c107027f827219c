// tests/cli_test.cc

// Copyright 2026  The spkfuse Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

#include "cli.h"
#include "spkfuse/spkfuse.h"

namespace spkfuse {
namespace {

namespace fs = std::filesystem;

struct RunResult {
  int code;
  std::string out, err;
};

RunResult run_cli(std::vector<std::string> args) {
  args.insert(args.begin(), "spkfuse");
  std::vector<const char *> argv;
  for (const auto &a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path &p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void spit(const fs::path &p, const std::string &s) {
  std::ofstream(p, std::ios::binary) << s;
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("spkfuse_cli_" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()) +
            "_" + ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }
  std::string path(const std::string &name) const { return (dir_ / name).string(); }

  void make_synth(std::uint64_t seed = 3, std::size_t speakers = 12) {
    auto r = run_cli({"synth", "--speakers", std::to_string(speakers), "--utts", "4",
                      "--dim", "16", "--within-std", "0.3", "--between-std", "1.0",
                      "--seed", std::to_string(seed), "--out-emb", path("emb.txt"),
                      "--out-trials", path("trials.txt")});
    ASSERT_EQ(r.code, 0) << r.err;
  }

  fs::path dir_;
};

TEST_F(CliTest, SynthMatchesLibrary) {
  make_synth();
  SynthSpec spec;
  spec.n_speakers = 12;
  spec.utts_per_speaker = 4;
  spec.dim = 16;
  spec.within_std = 0.3;
  spec.seed = 3;
  SynthData d = generate(spec);
  EXPECT_EQ(read_embeddings(slurp(path("emb.txt")), EmbeddingFormat::kText), d.embeddings);
  EXPECT_EQ(parse_trial_list(slurp(path("trials.txt"))), d.trials);
}

TEST_F(CliTest, ScoreAndEvaluateMatchLibrary) {
  make_synth();
  auto r = run_cli({"score", "--emb", path("emb.txt"), "--trials", path("trials.txt"),
                    "--out", path("s.txt")});
  ASSERT_EQ(r.code, 0) << r.err;
  EmbeddingSet emb = read_embeddings(slurp(path("emb.txt")), EmbeddingFormat::kText);
  TrialList trials = parse_trial_list(slurp(path("trials.txt")));
  ScoreSet lib = score_trials(emb, trials);
  EXPECT_EQ(parse_score_file(slurp(path("s.txt"))), lib);

  auto ev = run_cli({"evaluate", "--scores", path("s.txt"), "--trials",
                     path("trials.txt"), "--kv"});
  ASSERT_EQ(ev.code, 0) << ev.err;
  ErrorReport rep = evaluate(lib, trials);
  EXPECT_NE(ev.out.find("eer=" + format_double(rep.eer) + "\n"), std::string::npos);
  EXPECT_NE(ev.out.find("min_dcf=" + format_double(rep.min_dcf) + "\n"), std::string::npos);
  EXPECT_TRUE(ev.err.empty());

  auto mm = run_cli({"score", "--emb", path("emb.txt"), "--trials", path("trials.txt"),
                     "--out", path("mm.txt"), "--normalize", "minmax"});
  ASSERT_EQ(mm.code, 0);
  EXPECT_EQ(parse_score_file(slurp(path("mm.txt"))), minmax_normalize(lib));
}

TEST_F(CliTest, EvaluatePerfectScores) {
  spit(path("t.txt"), "1 a b\n0 a c\n");
  spit(path("s.txt"), "a b 0\na c -4\n");
  auto r = run_cli({"evaluate", "--scores", path("s.txt"), "--trials", path("t.txt")});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("EER(%) 0 "), std::string::npos);
  EXPECT_NE(r.out.find("minDCF(p=0.05) 0 "), std::string::npos);
  EXPECT_NE(r.out.find("targets 1 nontargets 1"), std::string::npos);
}

TEST_F(CliTest, EvaluateMismatchedPairs) {
  spit(path("t.txt"), "1 a b\n0 a c\n");
  spit(path("s.txt"), "a b 0\na d -4\n");
  auto r = run_cli({"evaluate", "--scores", path("s.txt"), "--trials", path("t.txt")});
  EXPECT_EQ(r.code, cli::kData);
  EXPECT_FALSE(r.err.empty());
  EXPECT_TRUE(r.out.empty());
}

TEST_F(CliTest, UnlabeledTrialsScore) {
  spit(path("e.txt"), "a 0 0\nb 3 4\n");
  spit(path("t.txt"), "a b\n");
  auto r = run_cli({"score", "--emb", path("e.txt"), "--trials", path("t.txt"), "--out",
                    path("s.txt")});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(slurp(path("s.txt")), "a b -5\n");
}

TEST_F(CliTest, TsneDeterministicWithDiagnostics) {
  make_synth(4, 6);
  std::vector<std::string> args{"tsne", "--emb", path("emb.txt"), "--trials",
                                path("trials.txt"), "--out", path("a.txt"),
                                "--perplexity", "5", "--iters", "300", "--seed", "7"};
  ASSERT_EQ(run_cli(args).code, 0);
  args[6] = path("b.txt");
  ASSERT_EQ(run_cli(args).code, 0);
  EXPECT_EQ(slurp(path("a.txt")), slurp(path("b.txt")));
  EXPECT_TRUE(fs::exists(path("a.txt.diag")));

  TsneConfig c;
  c.perplexity = 5;
  c.iterations = 300;
  c.seed = 7;
  EmbeddingSet emb = read_embeddings(slurp(path("emb.txt")), EmbeddingFormat::kText);
  TrialList trials = parse_trial_list(slurp(path("trials.txt")));
  EXPECT_EQ(parse_score_file(slurp(path("a.txt"))), tsne_scores(emb, trials, c));
}

TEST_F(CliTest, TsneTooFewUtterances) {
  spit(path("e.txt"), "a 0 0\nb 3 4\n");
  spit(path("t.txt"), "a b\n");
  auto r = run_cli({"tsne", "--emb", path("e.txt"), "--trials", path("t.txt"), "--out",
                    path("s.txt")});
  EXPECT_NE(r.code, 0);
  EXPECT_FALSE(fs::exists(path("s.txt")));
}

TEST_F(CliTest, FuseSingleInputOpt) {
  make_synth();
  ASSERT_EQ(run_cli({"score", "--emb", path("emb.txt"), "--trials", path("trials.txt"),
                     "--out", path("s.txt")})
                .code,
            0);
  auto r = run_cli({"fuse", "--scores", path("s.txt"), "--trials", path("trials.txt"),
                    "--out", path("f.txt"), "--mode", "opt"});
  ASSERT_EQ(r.code, 0) << r.err;
  const std::string report = slurp(path("f.txt.weights"));
  EXPECT_EQ(report.substr(0, report.find('\n')), "weights 1");
  EXPECT_EQ(slurp(path("f.txt")), slurp(path("s.txt")));
}

TEST_F(CliTest, FuseOptNeedsLabels) {
  spit(path("t.txt"), "a b\na c\n");
  spit(path("s.txt"), "a b 0\na c -4\n");
  auto r = run_cli({"fuse", "--scores", path("s.txt"), "--trials", path("t.txt"),
                    "--out", path("f.txt"), "--mode", "opt"});
  EXPECT_EQ(r.code, cli::kData);
  EXPECT_FALSE(fs::exists(path("f.txt")));
  auto avg = run_cli({"fuse", "--scores", path("s.txt"), path("s.txt"), "--trials",
                      path("t.txt"), "--out", path("f.txt"), "--mode", "avg"});
  EXPECT_EQ(avg.code, 0) << avg.err;
}

TEST_F(CliTest, FuseMatchesLibrary) {
  spit(path("t.txt"), "1 a b\n0 a c\n1 c d\n0 b d\n");
  spit(path("s1.txt"), "a b 0.5\na c 0.7\nc d 0.2\nb d 0.1\n");
  spit(path("s2.txt"), "b d 3\nc d 9\na c 1\na b 8\n");
  auto r = run_cli({"fuse", "--scores", path("s1.txt"), path("s2.txt"), "--trials",
                    path("t.txt"), "--out", path("f.txt"), "--objective", "eer",
                    "--step", "0.25", "--normalize", "minmax"});
  ASSERT_EQ(r.code, 0) << r.err;
  std::vector<ScoreSet> sets{parse_score_file(slurp(path("s1.txt"))),
                             parse_score_file(slurp(path("s2.txt")))};
  TrialList t = parse_trial_list(slurp(path("t.txt")));
  FusionResult lib = optimize_fusion(minmax_normalize_systems(align_score_sets(sets)), t,
                                     FusionObjective::kEer, 0.25);
  lib.fused = align_to_trials(lib.fused, t);
  EXPECT_EQ(slurp(path("f.txt.weights")), write_fusion_report(lib));
  EXPECT_EQ(parse_score_file(slurp(path("f.txt"))), lib.fused);
}

TEST_F(CliTest, ExtractWavs) {
  AudioSignal silence;
  silence.samples.assign(32000, 0.0);
  spit(path("quiet.wav"), encode_wav(silence));
  AudioSignal tone;
  for (int i = 0; i < 16000; ++i)
    tone.samples.push_back(0.3 * std::sin(2 * std::numbers::pi * 300.0 * i / 16000.0));
  spit(path("tone.wav"), encode_wav(tone));
  auto r = run_cli({"extract", "--wav", path("quiet.wav"), path("tone.wav"), "--out",
                    path("f.emb"), "--format", "binary"});
  ASSERT_EQ(r.code, 0) << r.err;
  EmbeddingSet f = read_embeddings(slurp(path("f.emb")), EmbeddingFormat::kBinary);
  ASSERT_EQ(f.at("quiet").size(), 198u);
  EXPECT_EQ(f.dim(), 64u);
  for (const auto &row : f.at("quiet"))
    for (float v : row) EXPECT_EQ(v, static_cast<float>(std::log(1e-10)));
  EXPECT_EQ(f.at("tone").size(), 98u);

  auto missing = run_cli({"extract", "--wav", path("nope.wav"), "--out", path("g.emb")});
  EXPECT_NE(missing.code, 0);
}

TEST_F(CliTest, UsageErrors) {
  EXPECT_EQ(run_cli({}).code, cli::kUsage);
  EXPECT_EQ(run_cli({"bogus"}).code, cli::kUsage);
  EXPECT_EQ(run_cli({"evaluate", "--scores", "x", "--trials", "y", "--frobnicate"}).code,
            cli::kUsage);
  EXPECT_EQ(run_cli({"evaluate", "--scores", "x", "--trials", "y", "--p-target", "5e-2"})
                .code,
            cli::kUsage);
  auto help = run_cli({"--help"});
  EXPECT_EQ(help.code, 0);
  EXPECT_NE(help.out.find("fuse"), std::string::npos);
}

TEST_F(CliTest, NumericalDegeneracyExitCode) {
  // An absurd step size drives the optimizer to non-finite coordinates.
  make_synth(5, 4);
  auto r = run_cli({"tsne", "--emb", path("emb.txt"), "--trials", path("trials.txt"),
                    "--out", path("s.txt"), "--perplexity", "3", "--learning-rate",
                    "1" + std::string(300, '0'), "--iters", "60"});
  EXPECT_EQ(r.code, cli::kNumerical) << r.err;
  EXPECT_FALSE(fs::exists(path("s.txt")));
}

}  // namespace
}  // namespace spkfuse
