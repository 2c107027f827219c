// tsne.cc

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

#include "spkfuse/tsne.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <unordered_map>

#include "spkfuse/error.h"
#include "spkfuse/random.h"

namespace spkfuse {

namespace {

constexpr std::size_t kKlRecordEvery = 50;
constexpr std::size_t kMaxBracketSteps = 256;
constexpr double kInitStd = 1e-4;

void check_finite(double v, const char *name) {
  if (!std::isfinite(v))
    throw Error(ErrorKind::kInvalidArgument,
                std::string("t-SNE ") + name + " must be finite");
}

double min_neighbor(std::span<const double> row, std::size_t self) {
  double m = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < row.size(); ++j)
    if (j != self) m = std::min(m, row[j]);
  return m;
}

// Perplexity of the row at precision beta, from distances already shifted
// by the nearest-neighbor distance. exp(H in nats) equals 2^(H in bits).
double row_perplexity(std::span<const double> shifted, std::size_t self,
                       double beta) {
  double z = 0.0, weighted = 0.0;
  for (std::size_t j = 0; j < shifted.size(); ++j) {
    if (j == self) continue;
    const double w = std::exp(-beta * shifted[j]);
    z += w;
    weighted += w * shifted[j];
  }
  // H = log Z + beta * E[shifted distance]; z >= 1 because the nearest
  // neighbor contributes exp(0).
  const double h = std::log(z) + beta * weighted / z;
  return std::exp(h);
}

}  // namespace

void TsneConfig::validate() const {
  check_finite(perplexity, "perplexity");
  check_finite(learning_rate, "learning rate");
  check_finite(momentum_early, "momentum");
  check_finite(momentum_late, "momentum");
  check_finite(early_exaggeration, "early exaggeration");
  check_finite(perplexity_tolerance, "perplexity tolerance");
  if (out_dim == 0)
    throw Error(ErrorKind::kInvalidArgument, "t-SNE out_dim must be positive");
  if (!(perplexity > 1.0))
    throw Error(ErrorKind::kInvalidArgument, "t-SNE perplexity must exceed 1");
  if (iterations == 0)
    throw Error(ErrorKind::kInvalidArgument,
                "t-SNE iterations must be positive");
  if (!(learning_rate > 0.0))
    throw Error(ErrorKind::kInvalidArgument,
                "t-SNE learning rate must be positive");
  for (double m : {momentum_early, momentum_late})
    if (!(m >= 0.0 && m < 1.0))
      throw Error(ErrorKind::kInvalidArgument,
                  "t-SNE momentum must lie in [0, 1)");
  if (!(early_exaggeration >= 1.0))
    throw Error(ErrorKind::kInvalidArgument,
                "t-SNE early exaggeration must be >= 1");
  if (!(perplexity_tolerance > 0.0))
    throw Error(ErrorKind::kInvalidArgument,
                "t-SNE perplexity tolerance must be positive");
  if (perplexity_max_bisections == 0)
    throw Error(ErrorKind::kInvalidArgument,
                "t-SNE perplexity bisection budget must be positive");
}

Matrix pairwise_sq_distances(const Matrix &points) {
  const std::size_t n = points.rows(), d = points.cols();
  if (n < 2)
    throw Error(ErrorKind::kInvalidArgument,
                "pairwise distances need at least 2 points");
  Matrix out(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    auto xi = points.row(i);
    for (std::size_t j = i + 1; j < n; ++j) {
      auto xj = points.row(j);
      double s = 0.0;
      for (std::size_t k = 0; k < d; ++k) {
        const double diff = xi[k] - xj[k];
        s += diff * diff;
      }
      out(i, j) = s;
      out(j, i) = s;
    }
  }
  return out;
}

std::vector<double> conditional_probabilities(std::span<const double> row,
                                              std::size_t self, double sigma) {
  if (!(sigma > 0.0) || !std::isfinite(sigma))
    throw Error(ErrorKind::kInvalidArgument, "sigma must be positive");
  if (self >= row.size() || row.size() < 2)
    throw Error(ErrorKind::kInvalidArgument,
                "conditional row needs a self index and a neighbor");
  const double dmin = min_neighbor(row, self);
  if (!std::isfinite(dmin))
    throw Error(ErrorKind::kNumerical,
                "all neighbors at infinite distance; conditional row is "
                "degenerate");
  const double beta = 1.0 / (2.0 * sigma * sigma);
  std::vector<double> p(row.size(), 0.0);
  double z = 0.0;
  for (std::size_t j = 0; j < row.size(); ++j) {
    if (j == self) continue;
    p[j] = std::exp(-beta * (row[j] - dmin));
    z += p[j];
  }
  if (!(z > 0.0) || !std::isfinite(z))
    throw Error(ErrorKind::kNumerical, "conditional row normalizer is " +
                                           format_double(z));
  for (double &v : p) v /= z;
  return p;
}

PerplexityResult perplexity_search(std::span<const double> row,
                                   std::size_t self, double target,
                                   double tol, std::size_t max_bisections) {
  if (self >= row.size() || row.size() < 2)
    throw Error(ErrorKind::kInvalidArgument,
                "perplexity search needs a self index and a neighbor");
  const std::size_t neighbors = row.size() - 1;
  if (!(target >= 1.0) || target > static_cast<double>(neighbors))
    throw Error(ErrorKind::kInvalidArgument,
                "target perplexity " + format_double(target) +
                    " outside [1, " + std::to_string(neighbors) + "]");
  const double dmin = min_neighbor(row, self);
  if (!std::isfinite(dmin))
    throw Error(ErrorKind::kNumerical,
                "all neighbors at infinite distance; perplexity is undefined");

  std::vector<double> shifted(row.size(), 0.0);
  double mean = 0.0;
  for (std::size_t j = 0; j < row.size(); ++j) {
    if (j == self) continue;
    shifted[j] = row[j] - dmin;
    mean += shifted[j];
  }
  mean /= static_cast<double>(neighbors);

  double best_beta = 0.0, best_perp = 0.0;
  double best_err = std::numeric_limits<double>::infinity();
  // Returns perplexity(beta) - target and tracks the best beta seen.
  auto eval = [&](double beta) {
    const double perp = row_perplexity(shifted, self, beta);
    const double err = perp - target;
    if (std::abs(err) < best_err) {
      best_err = std::abs(err);
      best_beta = beta;
      best_perp = perp;
    }
    return err;
  };
  auto result = [&] {
    return PerplexityResult{std::sqrt(1.0 / (2.0 * best_beta)), best_perp,
                            best_err <= tol};
  };

  // Perplexity decreases monotonically in beta.
  double beta = (mean > 0.0 && std::isfinite(mean)) ? 1.0 / mean : 1.0;
  double f = eval(beta);
  if (std::abs(f) <= tol) return result();
  double lo, hi;
  if (f > 0.0) {
    lo = beta;
    hi = beta * 2.0;
    for (std::size_t s = 0; s < kMaxBracketSteps; ++s) {
      const double fh = eval(hi);
      if (std::abs(fh) <= tol) return result();
      if (fh < 0.0) break;
      lo = hi;
      hi *= 2.0;
    }
  } else {
    hi = beta;
    lo = beta / 2.0;
    for (std::size_t s = 0; s < kMaxBracketSteps; ++s) {
      const double fl = eval(lo);
      if (std::abs(fl) <= tol) return result();
      if (fl > 0.0) break;
      hi = lo;
      lo /= 2.0;
    }
  }
  for (std::size_t s = 0; s < max_bisections; ++s) {
    const double mid = std::sqrt(lo * hi);
    if (!(mid > lo && mid < hi)) break;  // bracket exhausted
    const double fm = eval(mid);
    if (std::abs(fm) <= tol) break;
    if (fm > 0.0)
      lo = mid;
    else
      hi = mid;
  }
  return result();
}

Matrix conditional_matrix(const Matrix &sq_dist, double perplexity,
                          double tol, std::size_t max_bisections,
                          std::vector<double> *sigmas,
                          std::size_t *imprecise) {
  const std::size_t n = sq_dist.rows();
  Matrix cond(n, n);
  if (sigmas) sigmas->assign(n, 0.0);
  if (imprecise) *imprecise = 0;
  for (std::size_t i = 0; i < n; ++i) {
    try {
      const PerplexityResult pr =
          perplexity_search(sq_dist.row(i), i, perplexity, tol, max_bisections);
      const std::vector<double> row =
          conditional_probabilities(sq_dist.row(i), i, pr.sigma);
      std::copy(row.begin(), row.end(), cond.row(i).begin());
      if (sigmas) (*sigmas)[i] = pr.sigma;
      if (imprecise && !pr.precise) ++*imprecise;
    } catch (const Error &e) {
      throw Error(e.kind(), "point " + std::to_string(i) + ": " + e.what());
    }
  }
  return cond;
}

Matrix joint_p(const Matrix &cond) {
  const std::size_t n = cond.rows();
  Matrix p(n, n);
  const double denom = 2.0 * static_cast<double>(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      const double v = (cond(i, j) + cond(j, i)) / denom;
      p(i, j) = v;
      p(j, i) = v;
    }
  return p;
}

LowDimAffinities low_dim_affinities(const Matrix &y) {
  const std::size_t n = y.rows(), d = y.cols();
  if (n < 2)
    throw Error(ErrorKind::kInvalidArgument,
                "low-dimensional affinities need at least 2 points");
  LowDimAffinities out{Matrix(n, n), Matrix(n, n)};
  double z = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    auto yi = y.row(i);
    for (std::size_t j = i + 1; j < n; ++j) {
      auto yj = y.row(j);
      double s = 0.0;
      for (std::size_t k = 0; k < d; ++k) {
        const double diff = yi[k] - yj[k];
        s += diff * diff;
      }
      const double u = 1.0 / (1.0 + s);
      out.unnorm(i, j) = u;
      out.unnorm(j, i) = u;
      z += 2.0 * u;
    }
  }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      out.q(i, j) = out.unnorm(i, j) / z;
  return out;
}

double kl_divergence(const Matrix &p, const Matrix &q) {
  if (p.rows() != q.rows() || p.cols() != q.cols())
    throw Error(ErrorKind::kDimension, "KL divergence: shape mismatch");
  double c = 0.0;
  for (std::size_t i = 0; i < p.rows(); ++i)
    for (std::size_t j = 0; j < p.cols(); ++j) {
      const double pij = p(i, j);
      if (pij <= 0.0) continue;
      const double qij = q(i, j);
      if (!(qij > 0.0))
        throw Error(ErrorKind::kNumerical,
                    "KL divergence is infinite: q(" + std::to_string(i) + ", " +
                        std::to_string(j) + ") = 0 where p > 0");
      c += pij * std::log(pij / qij);
    }
  return c;
}

Matrix tsne_gradient(const Matrix &p, const Matrix &q, const Matrix &unnorm,
                     const Matrix &y) {
  const std::size_t n = y.rows(), d = y.cols();
  if (p.rows() != n || p.cols() != n || q.rows() != n || q.cols() != n ||
      unnorm.rows() != n || unnorm.cols() != n)
    throw Error(ErrorKind::kDimension, "t-SNE gradient: shape mismatch");
  Matrix grad(n, d);
  for (std::size_t i = 0; i < n; ++i) {
    auto gi = grad.row(i);
    auto yi = y.row(i);
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      const double mult = 4.0 * (p(i, j) - q(i, j)) * unnorm(i, j);
      auto yj = y.row(j);
      for (std::size_t k = 0; k < d; ++k) gi[k] += mult * (yi[k] - yj[k]);
    }
  }
  return grad;
}

TsneResult run_tsne(const Matrix &points, const TsneConfig &config,
                    const TsneObserver &observer) {
  config.validate();
  const std::size_t n = points.rows();
  if (n < 3)
    throw Error(ErrorKind::kInvalidArgument,
                "t-SNE needs at least 3 points, got " + std::to_string(n));
  if (!(config.perplexity < static_cast<double>(n - 1)))
    throw Error(ErrorKind::kInvalidArgument,
                "perplexity " + format_double(config.perplexity) +
                    " must be below N - 1 = " + std::to_string(n - 1));
  for (double v : points.data())
    if (!std::isfinite(v))
      throw Error(ErrorKind::kNumerical, "t-SNE input contains non-finite values");

  TsneResult result;
  const Matrix cond = conditional_matrix(
      pairwise_sq_distances(points), config.perplexity,
      config.perplexity_tolerance, config.perplexity_max_bisections,
      &result.sigmas, &result.imprecise_sigmas);
  const Matrix p = joint_p(cond);
  Matrix p_exaggerated = p;
  for (double &v : p_exaggerated.data()) v *= config.early_exaggeration;

  const std::size_t dim = config.out_dim;
  Matrix y(n, dim);
  Rng rng(config.seed);
  for (double &v : y.data()) v = rng.normal() * kInitStd;
  Matrix velocity(n, dim);

  for (std::size_t it = 0; it < config.iterations; ++it) {
    const bool exaggerated = it < config.exaggeration_iters;
    const Matrix &p_used = exaggerated ? p_exaggerated : p;
    const LowDimAffinities aff = low_dim_affinities(y);
    if (observer) observer({it, exaggerated, cond, p, aff.q, y});
    const Matrix grad = tsne_gradient(p_used, aff.q, aff.unnorm, y);
    const double momentum = it < config.momentum_switch_iter
                                ? config.momentum_early
                                : config.momentum_late;
    auto vel = velocity.data();
    auto pos = y.data();
    auto g = grad.data();
    for (std::size_t k = 0; k < vel.size(); ++k) {
      vel[k] = momentum * vel[k] - config.learning_rate * g[k];
      pos[k] += vel[k];
    }
    // Keep the map centred; the cost is translation invariant.
    for (std::size_t c = 0; c < dim; ++c) {
      double mean = 0.0;
      for (std::size_t i = 0; i < n; ++i) mean += y(i, c);
      mean /= static_cast<double>(n);
      for (std::size_t i = 0; i < n; ++i) y(i, c) -= mean;
    }
    for (double v : y.data())
      if (!std::isfinite(v))
        throw Error(ErrorKind::kNumerical,
                    "t-SNE diverged at iteration " + std::to_string(it + 1));

    const std::size_t done = it + 1;
    if (done % kKlRecordEvery == 0 || done == config.iterations)
      result.kl_trace.push_back({done, kl_divergence(p, low_dim_affinities(y).q)});
  }
  result.points = std::move(y);
  return result;
}

TsneScoring tsne_embed_trials(const EmbeddingSet &emb, const TrialList &trials,
                              const TsneConfig &config) {
  std::vector<std::string> utts;
  std::unordered_map<std::string, std::size_t> row_of;
  for (const TrialPair &pair : trials.pairs())
    for (const std::string *id : {&pair.enroll, &pair.test})
      if (row_of.emplace(*id, utts.size()).second) utts.push_back(*id);
  if (utts.size() < 3)
    throw Error(ErrorKind::kInvalidArgument,
                "t-SNE scoring needs at least 3 distinct utterances, trials "
                "name " + std::to_string(utts.size()));

  Matrix x(utts.size(), emb.dim());
  for (std::size_t r = 0; r < utts.size(); ++r) {
    const auto &segs = emb.at(utts[r]);
    auto xr = x.row(r);
    for (const auto &v : segs)
      for (std::size_t k = 0; k < v.size(); ++k) xr[k] += v[k];
    for (double &v : xr) v /= static_cast<double>(segs.size());
  }

  TsneResult result = run_tsne(x, config);
  std::vector<ScoreEntry> entries;
  entries.reserve(trials.size());
  for (const TrialPair &pair : trials.pairs()) {
    auto a = result.points.row(row_of.at(pair.enroll));
    auto b = result.points.row(row_of.at(pair.test));
    double s = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) s += (a[k] - b[k]) * (a[k] - b[k]);
    entries.push_back({pair.enroll, pair.test, -std::sqrt(s)});
  }
  return {ScoreSet(std::move(entries)), std::move(result), std::move(utts)};
}

ScoreSet tsne_scores(const EmbeddingSet &emb, const TrialList &trials,
                     const TsneConfig &config) {
  return tsne_embed_trials(emb, trials, config).scores;
}

std::string write_tsne_diagnostics(const TsneScoring &scoring) {
  std::string out;
  for (const KlRecord &r : scoring.result.kl_trace)
    out += "kl " + std::to_string(r.iteration) + ' ' + format_double(r.kl) + '\n';
  out += "imprecise_sigmas " + std::to_string(scoring.result.imprecise_sigmas) +
         '\n';
  for (std::size_t i = 0; i < scoring.utterances.size(); ++i)
    out += "sigma " + scoring.utterances[i] + ' ' +
           format_double(scoring.result.sigmas[i]) + '\n';
  for (std::size_t i = 0; i < scoring.utterances.size(); ++i) {
    out += "point " + scoring.utterances[i];
    for (double v : scoring.result.points.row(i)) out += ' ' + format_double(v);
    out += '\n';
  }
  return out;
}

}  // namespace spkfuse
