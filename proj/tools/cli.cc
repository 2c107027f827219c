// tools/cli.cc

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

#include "cli.h"

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <regex>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <unistd.h>

#include "spkfuse/spkfuse.h"

namespace spkfuse::cli {

namespace {

namespace fs = std::filesystem;

std::string read_file(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::kIo, "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Writes every (path, content) pair through a temporary file in the target
// directory followed by rename, so a failing command leaves no partial file.
void write_files_atomic(
    const std::vector<std::pair<std::string, std::string>> &files) {
  std::vector<std::pair<std::string, std::string>> staged;
  try {
    for (const auto &[path, content] : files) {
      std::string tmp = path + ".tmp." + std::to_string(::getpid());
      std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
      if (!out) throw Error(ErrorKind::kIo, "cannot write " + path);
      out.write(content.data(), static_cast<std::streamsize>(content.size()));
      out.close();
      if (!out) throw Error(ErrorKind::kIo, "cannot write " + path);
      staged.emplace_back(tmp, path);
    }
    for (const auto &[tmp, path] : staged) fs::rename(tmp, path);
  } catch (...) {
    std::error_code ec;
    for (const auto &[tmp, path] : staged) fs::remove(tmp, ec);
    throw;
  }
}

EmbeddingSet load_embeddings(const std::string &path) {
  std::string data = read_file(path);
  const bool binary = data.size() >= 4 && data.compare(0, 4, "EMB1") == 0;
  return read_embeddings(data, binary ? EmbeddingFormat::kBinary
                                      : EmbeddingFormat::kText);
}

TrialList load_trials(const std::string &path) {
  return parse_trial_list(read_file(path));
}

ScoreSet load_scores(const std::string &path) {
  return parse_score_file(read_file(path));
}

const CLI::Validator &decimal() {
  static const CLI::Validator v(
      [](std::string &s) -> std::string {
        static const std::regex re(R"(^[+-]?([0-9]+(\.[0-9]*)?|\.[0-9]+)$)");
        return std::regex_match(s, re) ? std::string()
                                       : "expected a decimal number, got " + s;
      },
      "DECIMAL");
  return v;
}

EmbeddingFormat parse_format(const std::string &s) {
  return s == "binary" ? EmbeddingFormat::kBinary : EmbeddingFormat::kText;
}

void add_dcf_flags(CLI::App *cmd, DcfParams &dcf) {
  cmd->add_option("--p-target", dcf.p_target, "Prior probability of a target")
      ->check(decimal());
  cmd->add_option("--c-miss", dcf.c_miss, "Cost of a miss")->check(decimal());
  cmd->add_option("--c-fa", dcf.c_fa, "Cost of a false alarm")
      ->check(decimal());
}

// --- extract ---------------------------------------------------------------

struct ExtractArgs {
  std::vector<std::string> wavs;
  std::string out;
  std::string format = "text";
  FeatureConfig features;
};

void do_extract(const ExtractArgs &a) {
  EmbeddingSet emb;
  for (const std::string &path : a.wavs) {
    const std::string id = fs::path(path).stem().string();
    if (emb.contains(id))
      throw Error(ErrorKind::kDuplicate, "two inputs share the stem '" + id + "'");
    append_features(emb, id, log_mel(read_wav(path), a.features));
  }
  write_files_atomic({{a.out, write_embeddings(emb, parse_format(a.format))}});
}

// --- score -----------------------------------------------------------------

struct ScoreArgs {
  std::string emb, trials, out;
  std::string normalize = "none";
};

void do_score(const ScoreArgs &a) {
  ScoreSet s = score_trials(load_embeddings(a.emb), load_trials(a.trials));
  if (a.normalize == "minmax") s = minmax_normalize(s);
  write_files_atomic({{a.out, write_score_file(s)}});
}

// --- tsne ------------------------------------------------------------------

struct TsneArgs {
  std::string emb, trials, out, diag;
  TsneConfig config;
};

void do_tsne(const TsneArgs &a) {
  const TsneScoring r =
      tsne_embed_trials(load_embeddings(a.emb), load_trials(a.trials), a.config);
  const std::string diag = a.diag.empty() ? a.out + ".diag" : a.diag;
  write_files_atomic({{a.out, write_score_file(r.scores)},
                      {diag, write_tsne_diagnostics(r)}});
}

// --- fuse ------------------------------------------------------------------

struct FuseArgs {
  std::vector<std::string> scores;
  std::string trials, out, report;
  std::string mode = "opt";
  std::string objective = "mindcf";
  std::string normalize = "none";
  double step = 0.05;
  DcfParams dcf;
};

void do_fuse(const FuseArgs &a) {
  const TrialList trials = load_trials(a.trials);
  std::vector<ScoreSet> sets;
  for (const std::string &p : a.scores) sets.push_back(load_scores(p));
  AlignedScores aligned = align_score_sets(sets);
  if (a.normalize == "minmax") aligned = minmax_normalize_systems(aligned);

  if (a.mode == "avg") {
    const ScoreSet fused = align_to_trials(average_fuse(aligned), trials);
    write_files_atomic({{a.out, write_score_file(fused)}});
    return;
  }
  if (!trials.labeled())
    throw Error(ErrorKind::kMissing, "--mode opt needs a labeled trial list");
  const FusionObjective obj = a.objective == "eer" ? FusionObjective::kEer
                                                   : FusionObjective::kMinDcf;
  FusionResult r = optimize_fusion(aligned, trials, obj, a.step, a.dcf);
  r.fused = align_to_trials(r.fused, trials);
  const std::string report = a.report.empty() ? a.out + ".weights" : a.report;
  write_files_atomic({{a.out, write_score_file(r.fused)},
                      {report, write_fusion_report(r)}});
}

// --- evaluate --------------------------------------------------------------

struct EvaluateArgs {
  std::string scores, trials;
  DcfParams dcf;
  bool kv = false;
};

void do_evaluate(const EvaluateArgs &a, std::ostream &out) {
  const ErrorReport r =
      evaluate(load_scores(a.scores), load_trials(a.trials), a.dcf);
  if (a.kv) {
    out << "eer=" << format_double(r.eer) << '\n'
        << "eer_percent=" << format_double(r.eer * 100.0) << '\n'
        << "eer_threshold=" << format_double(r.eer_threshold) << '\n'
        << "min_dcf=" << format_double(r.min_dcf) << '\n'
        << "dcf_threshold=" << format_double(r.dcf_threshold) << '\n'
        << "p_target=" << format_double(a.dcf.p_target) << '\n'
        << "n_target=" << r.n_target << '\n'
        << "n_nontarget=" << r.n_nontarget << '\n';
  } else {
    out << "EER(%) " << format_double(r.eer * 100.0) << " at "
        << format_double(r.eer_threshold) << '\n'
        << "minDCF(p=" << format_double(a.dcf.p_target) << ") "
        << format_double(r.min_dcf) << " at "
        << format_double(r.dcf_threshold) << '\n'
        << "targets " << r.n_target << " nontargets " << r.n_nontarget
        << '\n';
  }
}

// --- synth -----------------------------------------------------------------

struct SynthArgs {
  SynthSpec spec;
  std::string out_emb, out_trials;
  std::string format = "text";
};

void do_synth(const SynthArgs &a) {
  const SynthData d = generate(a.spec);
  write_files_atomic(
      {{a.out_emb, write_embeddings(d.embeddings, parse_format(a.format))},
       {a.out_trials, write_trial_list(d.trials)}});
}

}  // namespace

int run(int argc, const char *const *argv, std::ostream &out,
        std::ostream &err) {
  CLI::App app{"spkfuse: speaker-verification scoring, t-SNE normalization, "
               "score fusion and evaluation"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all");

  const auto format_check = CLI::IsMember({"text", "binary"});
  const auto normalize_check = CLI::IsMember({"minmax", "none"});

  ExtractArgs ex;
  auto *extract = app.add_subcommand("extract", "Log mel-filterbank features");
  extract->add_option("--wav", ex.wavs, "16 kHz PCM16 mono WAV files")
      ->required()
      ->check(CLI::ExistingFile);
  extract->add_option("--out", ex.out, "Output feature file")->required();
  extract->add_option("--n-mels", ex.features.n_mels, "Mel bands");
  extract->add_option("--nfft", ex.features.nfft, "FFT size");
  extract->add_option("--fmin", ex.features.f_min, "Lowest filter edge (Hz)")
      ->check(decimal());
  extract->add_option("--fmax", ex.features.f_max, "Highest filter edge (Hz)")
      ->check(decimal());
  extract->add_option("--format", ex.format, "text or binary")
      ->check(format_check);

  ScoreArgs sc;
  auto *score = app.add_subcommand("score", "Negative Euclidean trial scoring");
  score->add_option("--emb", sc.emb, "Embedding file")->required();
  score->add_option("--trials", sc.trials, "Trial list")->required();
  score->add_option("--out", sc.out, "Output score file")->required();
  score->add_option("--normalize", sc.normalize, "minmax or none")
      ->check(normalize_check);

  TsneArgs ts;
  auto *tsne = app.add_subcommand("tsne", "t-SNE normalized distance scoring");
  tsne->add_option("--emb", ts.emb, "Embedding file")->required();
  tsne->add_option("--trials", ts.trials, "Trial list")->required();
  tsne->add_option("--out", ts.out, "Output score file")->required();
  tsne->add_option("--diag", ts.diag,
                   "Diagnostics file (default: <out>.diag)");
  tsne->add_option("--dim", ts.config.out_dim, "Output dimension");
  tsne->add_option("--perplexity", ts.config.perplexity, "Target perplexity")
      ->check(decimal());
  tsne->add_option("--iters", ts.config.iterations, "Iterations");
  tsne->add_option("--seed", ts.config.seed, "Random seed");
  tsne->add_option("--learning-rate", ts.config.learning_rate, "Step size")
      ->check(decimal());
  tsne->add_option("--momentum-early", ts.config.momentum_early,
                   "Momentum before the switch")
      ->check(decimal());
  tsne->add_option("--momentum-late", ts.config.momentum_late,
                   "Momentum after the switch")
      ->check(decimal());
  tsne->add_option("--momentum-switch", ts.config.momentum_switch_iter,
                   "Iteration at which momentum switches");
  tsne->add_option("--exaggeration", ts.config.early_exaggeration,
                   "Early exaggeration factor")
      ->check(decimal());
  tsne->add_option("--exaggeration-iters", ts.config.exaggeration_iters,
                   "Iterations with exaggerated P");
  tsne->add_option("--perplexity-tol", ts.config.perplexity_tolerance,
                   "Perplexity search tolerance")
      ->check(decimal());
  tsne->add_option("--max-bisections", ts.config.perplexity_max_bisections,
                   "Perplexity search bisection budget");

  FuseArgs fu;
  auto *fuse = app.add_subcommand("fuse", "Average or optimum score fusion");
  fuse->add_option("--scores", fu.scores, "Score files, one per system")
      ->required();
  fuse->add_option("--trials", fu.trials, "Trial list")->required();
  fuse->add_option("--out", fu.out, "Output fused score file")->required();
  fuse->add_option("--report", fu.report,
                   "Weight report for --mode opt (default: <out>.weights)");
  fuse->add_option("--mode", fu.mode, "avg or opt")
      ->check(CLI::IsMember({"avg", "opt"}));
  fuse->add_option("--objective", fu.objective, "mindcf or eer")
      ->check(CLI::IsMember({"mindcf", "eer"}));
  fuse->add_option("--step", fu.step, "Weight grid step")->check(decimal());
  fuse->add_option("--normalize", fu.normalize, "minmax or none")
      ->check(normalize_check);
  add_dcf_flags(fuse, fu.dcf);

  EvaluateArgs ev;
  auto *evaluate_cmd = app.add_subcommand("evaluate", "EER and minDCF");
  evaluate_cmd->add_option("--scores", ev.scores, "Score file")->required();
  evaluate_cmd->add_option("--trials", ev.trials, "Labeled trial list")
      ->required();
  evaluate_cmd->add_flag("--kv", ev.kv, "Print key=value lines");
  add_dcf_flags(evaluate_cmd, ev.dcf);

  SynthArgs sy;
  auto *synth = app.add_subcommand("synth", "Synthetic embeddings and trials");
  synth->add_option("--speakers", sy.spec.n_speakers, "Speakers")->required();
  synth->add_option("--utts", sy.spec.utts_per_speaker,
                    "Utterances per speaker")
      ->required();
  synth->add_option("--dim", sy.spec.dim, "Embedding dimension")->required();
  synth->add_option("--within-std", sy.spec.within_std,
                    "Within-speaker standard deviation")
      ->required()
      ->check(decimal());
  synth->add_option("--between-std", sy.spec.between_std,
                    "Between-speaker standard deviation")
      ->required()
      ->check(decimal());
  synth->add_option("--seed", sy.spec.seed, "Random seed")->required();
  synth->add_option("--out-emb", sy.out_emb, "Output embedding file")
      ->required();
  synth->add_option("--out-trials", sy.out_trials, "Output trial list")
      ->required();
  synth->add_option("--format", sy.format, "text or binary")
      ->check(format_check);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp &) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp &) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError &e) {
    err << "spkfuse: " << e.what() << '\n';
    return kUsage;
  }

  try {
    if (*extract) do_extract(ex);
    if (*score) do_score(sc);
    if (*tsne) do_tsne(ts);
    if (*fuse) do_fuse(fu);
    if (*evaluate_cmd) do_evaluate(ev, out);
    if (*synth) do_synth(sy);
  } catch (const Error &e) {
    err << "spkfuse: " << e.what() << '\n';
    return e.kind() == ErrorKind::kNumerical ? kNumerical : kData;
  } catch (const std::exception &e) {
    err << "spkfuse: " << e.what() << '\n';
    return kData;
  }
  return kOk;
}

}  // namespace spkfuse::cli
