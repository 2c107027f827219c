// tests/acceptance.cc

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

// Acceptance suite. Prints one PASS/FAIL line per criterion and exits
// nonzero when any criterion fails.

#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <limits>
#include <random>
#include <string>
#include <vector>

#include "oracles.h"
#include "spkfuse/spkfuse.h"

namespace {

using namespace spkfuse;
using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass;
  std::string detail;
};

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(const char *f, ...) __attribute__((format(printf, 1, 2)));
std::string fmt(const char *f, ...) {
  char buf[512];
  va_list ap;
  va_start(ap, f);
  std::vsnprintf(buf, sizeof buf, f, ap);
  va_end(ap);
  return buf;
}

// 1. Library metrics equal the brute-force sweep oracle exactly.
Outcome metric_oracle() {
  std::mt19937_64 gen(101);
  std::uniform_int_distribution<std::size_t> size(2, 1000);
  std::size_t mismatches = 0;
  double lib_time = 0.0;
  const auto t0 = Clock::now();
  for (int rep = 0; rep < 200; ++rep) {
    std::vector<double> s;
    std::vector<bool> l;
    oracle::random_trials(gen, size(gen), s, l, rep % 3 == 0);
    const auto t1 = Clock::now();
    const OperatingValue e = eer(s, l), d = min_dcf(s, l);
    lib_time += seconds_since(t1);
    const oracle::Value oe = oracle::eer(s, l), od = oracle::min_dcf(s, l);
    if (e.value != oe.value || e.threshold != oe.threshold ||
        d.value != od.value || d.threshold != od.threshold)
      ++mismatches;
  }
  const double total = seconds_since(t0);
  return {mismatches == 0 && total < 10.0,
          fmt("200 sets, %zu mismatches, %.3f s total (library %.3f s)",
              mismatches, total, lib_time)};
}

// 2. Strictly increasing transforms leave EER and minDCF bit-identical.
Outcome monotone_invariance() {
  std::mt19937_64 gen(202);
  std::uniform_int_distribution<std::size_t> size(2, 1000);
  const std::vector<std::function<double(double)>> transforms = {
      [](double x) { return 2.5 * x + 1.0; },
      [](double x) { return x * x * x; },
      [](double x) { return std::exp(x); }};
  std::size_t broken = 0;
  for (int rep = 0; rep < 50; ++rep) {
    std::vector<double> s;
    std::vector<bool> l;
    oracle::random_trials(gen, size(gen), s, l, rep % 2 == 0);
    const double e0 = eer(s, l).value, d0 = min_dcf(s, l).value;
    for (const auto &f : transforms) {
      std::vector<double> t(s.size());
      std::transform(s.begin(), s.end(), t.begin(), f);
      if (std::bit_cast<std::uint64_t>(eer(t, l).value) !=
              std::bit_cast<std::uint64_t>(e0) ||
          std::bit_cast<std::uint64_t>(min_dcf(t, l).value) !=
              std::bit_cast<std::uint64_t>(d0))
        ++broken;
    }
  }
  return {broken == 0, fmt("150 transformed sets, %zu differ", broken)};
}

Matrix random_matrix(std::mt19937_64 &gen, std::size_t r, std::size_t c) {
  std::normal_distribution<double> g(0.0, 1.0);
  Matrix m(r, c);
  for (double &v : m.data()) v = g(gen);
  return m;
}

oracle::Dense dense(const Matrix &m) {
  oracle::Dense d(m.rows(), std::vector<double>(m.cols()));
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) d[i][j] = m(i, j);
  return d;
}

// 3. Analytic KL gradient against central differences.
Outcome gradient_check() {
  std::mt19937_64 gen(303);
  std::uniform_int_distribution<std::size_t> npts(4, 10), dims(1, 8);
  double worst = 0.0;
  for (int rep = 0; rep < 25; ++rep) {
    const std::size_t n = npts(gen), d = dims(gen);
    Matrix x = random_matrix(gen, n, d);
    std::uniform_real_distribution<double> perp(1.5, static_cast<double>(n) - 1.5);
    Matrix p = joint_p(conditional_matrix(pairwise_sq_distances(x), perp(gen),
                                          1e-5, 50));
    Matrix y = random_matrix(gen, n, 2);
    auto a = low_dim_affinities(y);
    Matrix g = tsne_gradient(p, a.q, a.unnorm, y);
    auto fd = oracle::kl_gradient_fd(dense(p), dense(y));
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t k = 0; k < 2; ++k) {
        num += (g(i, k) - fd[i][k]) * (g(i, k) - fd[i][k]);
        den += fd[i][k] * fd[i][k];
      }
    worst = std::max(worst, std::sqrt(num / den));
  }
  return {worst <= 1e-5, fmt("25 instances, max relative error %.3g", worst)};
}

// 4. Probability mass is conserved on every iteration; sigma search hits
// the target perplexity.
Outcome distribution_invariants() {
  std::mt19937_64 gen(404);
  Matrix x = random_matrix(gen, 100, 10);
  TsneConfig cfg;
  cfg.seed = 4;
  double worst = 0.0;
  std::size_t views = 0;
  auto dev = [](double s) { return std::abs(s - 1.0); };
  run_tsne(x, cfg, [&](const TsneIterationView &v) {
    ++views;
    for (std::size_t i = 0; i < v.conditionals.rows(); ++i) {
      double s = 0.0;
      for (double c : v.conditionals.row(i)) s += c;
      worst = std::max(worst, dev(s));
    }
    worst = std::max({worst, dev(v.p.sum()), dev(v.q.sum())});
  });

  double worst_perp = 0.0;
  std::size_t imprecise = 0;
  std::uniform_int_distribution<std::size_t> len(10, 200);
  std::exponential_distribution<double> dist(0.5);
  for (int rep = 0; rep < 100; ++rep) {
    const std::size_t n = len(gen);
    std::vector<double> row(n);
    for (double &v : row) v = dist(gen);
    std::uniform_int_distribution<std::size_t> self_d(0, n - 1);
    const std::size_t self = self_d(gen);
    row[self] = 0.0;
    std::uniform_real_distribution<double> target_d(2.0,
                                                    std::min(50.0, n - 2.0));
    const double target = target_d(gen);
    const PerplexityResult r = perplexity_search(row, self, target);
    if (!r.precise) ++imprecise;
    const double h =
        oracle::entropy_bits(oracle::gaussian_row(row, self, r.sigma));
    worst_perp = std::max(worst_perp, std::abs(std::exp2(h) - target));
  }
  const bool ok = views == cfg.iterations && worst <= 1e-9 && worst_perp <= 1e-5;
  return {ok, fmt("%zu iterations, max |sum-1| %.3g; 100 rows, max perplexity "
                  "error %.3g (%zu flagged imprecise)",
                  views, worst, worst_perp, imprecise)};
}

// 5. KL at the end is no worse than right after exaggeration stops.
Outcome tsne_descent() {
  std::size_t descended = 0;
  double slowest = 0.0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    SynthSpec spec;
    spec.dim = 64;
    spec.seed = seed;
    SynthData data = generate(spec);
    TsneConfig cfg;
    cfg.seed = seed;
    const auto t0 = Clock::now();
    TsneScoring s = tsne_embed_trials(data.embeddings, data.trials, cfg);
    slowest = std::max(slowest, seconds_since(t0));
    const auto &trace = s.result.kl_trace;
    auto post = std::find_if(trace.begin(), trace.end(), [&](const KlRecord &r) {
      return r.iteration >= cfg.exaggeration_iters;
    });
    if (post != trace.end() && trace.back().kl <= post->kl) ++descended;
  }
  return {descended >= 19 && slowest < 30.0,
          fmt("%zu/20 runs descended, slowest run %.2f s", descended, slowest)};
}

ScoreSet add_noise_and_score(const SynthData &data, double noise,
                             std::uint64_t seed) {
  Rng rng(seed);
  EmbeddingSet noisy;
  for (const std::string &id : data.embeddings.ids())
    for (const auto &v : data.embeddings.at(id)) {
      std::vector<float> w(v.begin(), v.end());
      for (float &c : w) c = static_cast<float>(c + noise * rng.normal());
      noisy.add(id, std::move(w));
    }
  return score_trials(noisy, data.trials);
}

// 6. Grid inclusion ordering between optimum, average and single systems.
Outcome fusion_structure() {
  std::size_t held = 0;
  std::string first_bad;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    SynthSpec spec;
    spec.seed = seed;
    SynthData data = generate(spec);
    std::vector<ScoreSet> systems;
    systems.push_back(add_noise_and_score(data, 0.05, seed + 1000));
    systems.push_back(add_noise_and_score(data, 0.2, seed + 2000));
    for (double perp : {10.0, 30.0}) {
      TsneConfig cfg;
      cfg.perplexity = perp;
      cfg.seed = seed;
      systems.push_back(tsne_scores(data.embeddings, data.trials, cfg));
    }
    const AlignedScores aligned = align_score_sets(systems);
    const std::vector<bool> labels = data.trials.labels();
    const double opt = optimize_fusion(aligned, labels).objective_value;
    const double avg = min_dcf(average_fuse(aligned).scores(), labels).value;
    double best = std::numeric_limits<double>::infinity(), worst = -best;
    for (const auto &sys : aligned.systems) {
      const double v = min_dcf(sys, labels).value;
      best = std::min(best, v);
      worst = std::max(worst, v);
    }
    if (opt <= avg && avg <= worst && opt <= best && opt <= worst) {
      ++held;
    } else if (first_bad.empty()) {
      first_bad = fmt("; seed %llu: opt %.4f avg %.4f best %.4f worst %.4f",
                      static_cast<unsigned long long>(seed), opt, avg, best, worst);
    }
  }
  return {held == 10, fmt("%zu/10 seeds hold all orderings%s", held,
                          first_bad.c_str())};
}

// 7. optimize_fusion matches exhaustive enumeration.
Outcome fusion_brute_force() {
  std::mt19937_64 gen(707);
  std::uniform_int_distribution<std::size_t> ks(1, 3), size(2, 200);
  std::size_t mismatches = 0;
  for (int rep = 0; rep < 50; ++rep) {
    const std::size_t k = ks(gen), n = size(gen);
    std::vector<std::vector<double>> sys(k);
    std::vector<bool> labels;
    const bool ties = rep % 2 == 1;
    for (auto &s : sys) oracle::random_trials(gen, n, s, labels, ties);
    // Only the last draw's labels are kept; earlier systems act as noise.
    AlignedScores aligned;
    for (std::size_t t = 0; t < n; ++t)
      aligned.pairs.push_back({"e", "t" + std::to_string(t)});
    aligned.systems = sys;
    const bool dcf = rep % 3 != 2;
    const FusionResult r = optimize_fusion(
        aligned, labels, dcf ? FusionObjective::kMinDcf : FusionObjective::kEer,
        0.25);
    const oracle::FusionPick o = oracle::brute_force_fusion(sys, labels, 4, dcf);
    if (r.weights.values() != o.weights || r.objective_value != o.primary ||
        r.secondary_value != o.secondary || r.candidates_evaluated != o.candidates)
      ++mismatches;
  }
  return {mismatches == 0, fmt("50 instances, %zu mismatches", mismatches)};
}

// 8. Feature shapes, FFT accuracy and the mel anchor.
Outcome feature_pipeline() {
  std::mt19937_64 gen(808);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  AudioSignal sig;
  sig.samples.resize(32000);
  for (double &v : sig.samples) v = 0.5 * u(gen);
  const FeatureMatrix fm = log_mel(sig);
  const bool shape = fm.frames.rows() == 198 && fm.frames.cols() == 64;

  double worst = 0.0;
  for (int rep = 0; rep < 100; ++rep) {
    std::vector<double> frame(400);
    for (double &v : frame) v = u(gen);
    const std::vector<double> fast = power_spectrum(frame, 512);
    const std::vector<double> slow = oracle::naive_power(frame, 512);
    if (fast.size() != slow.size()) return {false, "spectrum size mismatch"};
    for (std::size_t k = 0; k < slow.size(); ++k)
      worst = std::max(worst, std::abs(fast[k] - slow[k]) / std::abs(slow[k]));
  }
  const double mel = hz_to_mel(1000.0);
  return {shape && worst <= 1e-6 && std::abs(mel - 1000.0) <= 1.0,
          fmt("shape %zux%zu, max spectrum relative error %.3g, mel(1000) %.4f",
              fm.frames.rows(), fm.frames.cols(), worst, mel)};
}

// 9. synth -> score -> evaluate, and tsne -> fuse(opt) on the same data.
Outcome end_to_end() {
  const auto t0 = Clock::now();
  SynthSpec spec;
  spec.seed = 9;
  SynthData data = generate(spec);
  const ScoreSet euclid = score_trials(data.embeddings, data.trials);
  const ErrorReport rep = evaluate(euclid, data.trials);
  const ScoreSet tsne = tsne_scores(data.embeddings, data.trials, TsneConfig{});
  std::vector<ScoreSet> systems{euclid, tsne};
  const FusionResult fused = optimize_fusion(align_score_sets(systems), data.trials);
  const ErrorReport frep = evaluate(fused.fused, data.trials);
  const double total = seconds_since(t0);
  const bool ok = rep.eer < 0.05 && rep.min_dcf < 0.5 &&
                  frep.min_dcf <= rep.min_dcf && total < 120.0;
  return {ok, fmt("euclidean EER %.4f%% minDCF %.4f; fused minDCF %.4f "
                  "(weights %g %g); %.2f s",
                  100.0 * rep.eer, rep.min_dcf, frep.min_dcf, fused.weights[0],
                  fused.weights[1], total)};
}

std::string random_id(std::mt19937_64 &gen) {
  static const char kChars[] = "abcdefghijklmnopqrstuvwxyz0123456789-_./";
  std::uniform_int_distribution<std::size_t> len(1, 12), ch(0, sizeof kChars - 2);
  std::string s;
  for (std::size_t i = len(gen); i > 0; --i) s += kChars[ch(gen)];
  return s;
}

// 10. Serialization round-trips.
Outcome round_trips() {
  std::mt19937_64 gen(1010);
  std::uniform_int_distribution<std::uint32_t> bits32;
  std::uniform_int_distribution<std::uint64_t> bits64;
  std::uniform_int_distribution<std::size_t> count(1, 20), dims(1, 16), reps(1, 3);
  std::size_t bad_bin = 0, bad_text = 0, bad_scores = 0;
  for (int rep = 0; rep < 1000; ++rep) {
    EmbeddingSet e;
    const std::size_t dim = dims(gen);
    for (std::size_t u = count(gen); u > 0; --u) {
      const std::string id = random_id(gen);
      for (std::size_t r = reps(gen); r > 0; --r) {
        std::vector<float> v(dim);
        for (float &c : v) {
          do {
            c = std::bit_cast<float>(bits32(gen));
          } while (!std::isfinite(c));
        }
        e.add(id, std::move(v));
      }
    }
    if (!(read_embeddings(write_embeddings(e, EmbeddingFormat::kBinary),
                          EmbeddingFormat::kBinary) == e))
      ++bad_bin;
    if (!(read_embeddings(write_embeddings(e, EmbeddingFormat::kText),
                          EmbeddingFormat::kText) == e))
      ++bad_text;

    std::vector<ScoreEntry> entries;
    for (std::size_t t = count(gen); t > 0; --t) {
      double v;
      do {
        v = std::bit_cast<double>(bits64(gen));
      } while (!std::isfinite(v));
      entries.push_back({random_id(gen), "t" + std::to_string(t), v});
    }
    const ScoreSet s(entries);
    if (!(parse_score_file(write_score_file(s)) == s)) ++bad_scores;
  }
  return {bad_bin + bad_text + bad_scores == 0,
          fmt("1000 rounds; failures: binary %zu, text %zu, scores %zu", bad_bin,
              bad_text, bad_scores)};
}

}  // namespace

int main() {
  struct Criterion {
    const char *name;
    Outcome (*run)();
  };
  const Criterion criteria[] = {
      {"C1 metric oracle equivalence", metric_oracle},
      {"C2 monotone invariance", monotone_invariance},
      {"C3 t-SNE gradient check", gradient_check},
      {"C4 t-SNE distribution invariants", distribution_invariants},
      {"C5 t-SNE descent", tsne_descent},
      {"C6 fusion optimality structure", fusion_structure},
      {"C7 fusion brute-force equivalence", fusion_brute_force},
      {"C8 feature pipeline", feature_pipeline},
      {"C9 end-to-end pipeline", end_to_end},
      {"C10 format round-trips", round_trips},
  };
  int failed = 0;
  for (const auto &c : criteria) {
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception &e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.pass) ++failed;
    std::printf("%s %s: %s\n", o.pass ? "PASS" : "FAIL", c.name, o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n",
              static_cast<int>(std::size(criteria)) - failed, std::size(criteria));
  return failed == 0 ? 0 : 1;
}
