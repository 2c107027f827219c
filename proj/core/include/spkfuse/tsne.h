// spkfuse/tsne.h

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

#ifndef SPKFUSE_TSNE_H_
#define SPKFUSE_TSNE_H_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "spkfuse/matrix.h"
#include "spkfuse/trial_io.h"

namespace spkfuse {

/// Exact t-SNE hyperparameters. Defaults are the customary values.
struct TsneConfig {
  std::size_t out_dim = 2;
  double perplexity = 30.0;
  std::size_t iterations = 1000;
  double learning_rate = 200.0;
  double momentum_early = 0.5;
  double momentum_late = 0.8;
  std::size_t momentum_switch_iter = 250;
  double early_exaggeration = 12.0;
  std::size_t exaggeration_iters = 250;
  double perplexity_tolerance = 1e-5;
  std::size_t perplexity_max_bisections = 50;
  std::uint64_t seed = 0;

  void validate() const;
};

/// KL(P || Q) after completing `iteration` updates (1-based).
struct KlRecord {
  std::size_t iteration;
  double kl;
};

struct TsneResult {
  Matrix points;                  // N x out_dim
  std::vector<KlRecord> kl_trace; // every 50 iterations and at the end
  std::vector<double> sigmas;     // Gaussian bandwidth per input point
  std::size_t imprecise_sigmas = 0;
};

struct PerplexityResult {
  double sigma;
  double perplexity;  // achieved 2^H, H in bits
  bool precise;       // |perplexity - target| <= tolerance
};

/// State handed to a run_tsne observer before each update. `p` is the
/// unexaggerated joint distribution; `q` is computed from `y`.
struct TsneIterationView {
  std::size_t iteration;  // 0-based index of the update about to happen
  bool exaggerated;
  const Matrix &conditionals;
  const Matrix &p;
  const Matrix &q;
  const Matrix &y;
};

using TsneObserver = std::function<void(const TsneIterationView &)>;

/// Entry (i, j) = ||x_i - x_j||^2 from direct differences; exact zero
/// diagonal and exact symmetry.
Matrix pairwise_sq_distances(const Matrix &points);

/// p_{j|i} proportional to exp(-d_ij / (2 sigma^2)) with p_{i|i} = 0. The
/// exponent is shifted by the smallest neighbor distance before exp, which
/// leaves the normalized row unchanged.
std::vector<double> conditional_probabilities(std::span<const double> sq_dist_row,
                                              std::size_t self, double sigma);

/**
   Finds sigma_i such that 2^H(P_i) matches `target`. Works on the precision
   beta = 1 / (2 sigma^2): the bracket is grown by doubling or halving from
   1 / mean(shifted distance), then bisected geometrically for at most
   `max_bisections` steps. When the tolerance is never reached the best
   sigma seen is returned with precise == false.
*/
PerplexityResult perplexity_search(std::span<const double> sq_dist_row,
                                   std::size_t self, double target,
                                   double tol = 1e-5,
                                   std::size_t max_bisections = 50);

/// Row-stochastic matrix of calibrated conditionals, one perplexity search
/// per row. Bandwidths are written to `sigmas` when non-null.
Matrix conditional_matrix(const Matrix &sq_dist, double perplexity,
                          double tol, std::size_t max_bisections,
                          std::vector<double> *sigmas = nullptr,
                          std::size_t *imprecise = nullptr);

/// p_ij = (p_{j|i} + p_{i|j}) / (2N).
Matrix joint_p(const Matrix &conditionals);

struct LowDimAffinities {
  Matrix q;       // normalized Student-t affinities
  Matrix unnorm;  // (1 + ||y_i - y_j||^2)^-1, zero diagonal
};

LowDimAffinities low_dim_affinities(const Matrix &y);

/// sum p_ij log(p_ij / q_ij) over p_ij > 0.
double kl_divergence(const Matrix &p, const Matrix &q);

/// dC/dy_i = 4 sum_j (p_ij - q_ij) (y_i - y_j) (1 + ||y_i - y_j||^2)^-1.
Matrix tsne_gradient(const Matrix &p, const Matrix &q, const Matrix &unnorm,
                     const Matrix &y);

/// Gradient descent with momentum and early exaggeration. Deterministic in
/// (points, config).
TsneResult run_tsne(const Matrix &points, const TsneConfig &config,
                    const TsneObserver &observer = {});

struct TsneScoring {
  ScoreSet scores;
  TsneResult result;
  std::vector<std::string> utterances;  // row order of result.points
};

/// Embeds every distinct trial utterance (mean of its segments, ordered by
/// first appearance in the trials) and scores each pair by the negative
/// Euclidean distance in the embedded space.
TsneScoring tsne_embed_trials(const EmbeddingSet &emb, const TrialList &trials,
                              const TsneConfig &config);

ScoreSet tsne_scores(const EmbeddingSet &emb, const TrialList &trials,
                     const TsneConfig &config);

/// "kl <iteration> <value>", "sigma <utt> <value>", "point <utt> y..." lines.
std::string write_tsne_diagnostics(const TsneScoring &scoring);

}  // namespace spkfuse

#endif  // SPKFUSE_TSNE_H_
