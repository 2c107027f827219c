// fusion.cc

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

#include "spkfuse/fusion.h"

#include <algorithm>
#include <cmath>
#include <unordered_map>

#include "spkfuse/error.h"
#include "spkfuse/scoring.h"

namespace spkfuse {

FusionWeights::FusionWeights(std::vector<double> w) : w_(std::move(w)) {
  if (w_.empty())
    throw Error(ErrorKind::kInvalidArgument, "empty weight vector");
  double sum = 0.0;
  for (double x : w_) {
    if (!std::isfinite(x) || x < 0.0)
      throw Error(ErrorKind::kInvalidArgument,
                  "fusion weights must be finite and non-negative");
    sum += x;
  }
  if (std::abs(sum - 1.0) > 1e-9)
    throw Error(ErrorKind::kInvalidArgument,
                "fusion weights sum to " + format_double(sum) + ", not 1");
}

FusionWeights FusionWeights::uniform(std::size_t k) {
  if (k == 0) throw Error(ErrorKind::kInvalidArgument, "k must be positive");
  return FusionWeights(std::vector<double>(k, 1.0 / static_cast<double>(k)));
}

FusionWeights FusionWeights::unit(std::size_t k, std::size_t i) {
  if (i >= k) throw Error(ErrorKind::kInvalidArgument, "unit index out of range");
  std::vector<double> w(k, 0.0);
  w[i] = 1.0;
  return FusionWeights(std::move(w));
}

std::string_view objective_name(FusionObjective obj) {
  return obj == FusionObjective::kMinDcf ? "mindcf" : "eer";
}

ScoreSet weighted_fuse(const AlignedScores &aligned, const FusionWeights &w) {
  const std::size_t k = aligned.num_systems();
  if (w.size() != k)
    throw Error(ErrorKind::kInvalidArgument,
                std::to_string(w.size()) + " weights for " +
                    std::to_string(k) + " systems");
  std::vector<ScoreEntry> out;
  out.reserve(aligned.num_trials());
  for (std::size_t t = 0; t < aligned.num_trials(); ++t) {
    double s = 0.0;
    for (std::size_t i = 0; i < k; ++i) s += w[i] * aligned.systems[i][t];
    out.push_back({aligned.pairs[t].first, aligned.pairs[t].second, s});
  }
  return ScoreSet(std::move(out));
}

ScoreSet average_fuse(const AlignedScores &aligned) {
  return weighted_fuse(aligned, FusionWeights::uniform(aligned.num_systems()));
}

namespace {

void enumerate_lattice(std::size_t pos, std::size_t remaining, std::size_t m,
                       std::vector<std::size_t> &counts,
                       std::vector<FusionWeights> &out) {
  const std::size_t k = counts.size();
  if (pos + 1 == k) {
    counts[pos] = remaining;
    std::vector<double> w(k);
    for (std::size_t i = 0; i < k; ++i)
      w[i] = static_cast<double>(counts[i]) / static_cast<double>(m);
    out.emplace_back(std::move(w));
    return;
  }
  for (std::size_t c = remaining + 1; c-- > 0;) {
    counts[pos] = c;
    enumerate_lattice(pos + 1, remaining - c, m, counts, out);
  }
}

}  // namespace

std::vector<FusionWeights> simplex_grid(std::size_t k, double step) {
  if (k == 0) throw Error(ErrorKind::kInvalidArgument, "k must be positive");
  if (!(step > 0.0 && step <= 1.0))
    throw Error(ErrorKind::kInvalidArgument, "step must lie in (0, 1]");
  const double inv = 1.0 / step;
  const double m_real = std::round(inv);
  if (std::abs(inv - m_real) > 1e-9)
    throw Error(ErrorKind::kInvalidArgument,
                "1/step must be an integer, got step " + format_double(step));
  const auto m = static_cast<std::size_t>(m_real);
  std::vector<FusionWeights> out;
  std::vector<std::size_t> counts(k);
  enumerate_lattice(0, m, m, counts, out);
  if (m % k != 0) out.push_back(FusionWeights::uniform(k));
  return out;
}

ObjectivePair evaluate_objective(std::span<const double> scores,
                                 const std::vector<bool> &labels,
                                 FusionObjective objective,
                                 const DcfParams &dcf) {
  const std::vector<DetPoint> pts = det_points(scores, labels);
  const double d = min_dcf_from_points(pts, dcf).value;
  const double e = eer_from_points(pts).value;
  return objective == FusionObjective::kMinDcf ? ObjectivePair{d, e}
                                               : ObjectivePair{e, d};
}

FusionResult optimize_fusion(const AlignedScores &aligned,
                             const std::vector<bool> &labels,
                             FusionObjective objective, double step,
                             const DcfParams &dcf) {
  if (aligned.num_systems() == 0)
    throw Error(ErrorKind::kInvalidArgument, "no systems to fuse");
  if (labels.size() != aligned.num_trials())
    throw Error(ErrorKind::kMissing, "got " + std::to_string(labels.size()) +
                                         " labels for " +
                                         std::to_string(aligned.num_trials()) +
                                         " trials");
  dcf.validate();
  const std::vector<FusionWeights> grid =
      simplex_grid(aligned.num_systems(), step);

  std::size_t best = 0;
  ObjectivePair best_val{0.0, 0.0};
  for (std::size_t c = 0; c < grid.size(); ++c) {
    const ScoreSet fused = weighted_fuse(aligned, grid[c]);
    const ObjectivePair v =
        evaluate_objective(fused.scores(), labels, objective, dcf);
    bool better = c == 0;
    if (!better) {
      if (v.primary != best_val.primary)
        better = v.primary < best_val.primary;
      else if (v.secondary != best_val.secondary)
        better = v.secondary < best_val.secondary;
      else
        better = std::lexicographical_compare(
            grid[c].values().begin(), grid[c].values().end(),
            grid[best].values().begin(), grid[best].values().end());
    }
    if (better) {
      best = c;
      best_val = v;
    }
  }
  return FusionResult{grid[best],         weighted_fuse(aligned, grid[best]),
                      best_val.primary,   best_val.secondary,
                      objective,          grid.size()};
}

FusionResult optimize_fusion(const AlignedScores &aligned,
                             const TrialList &trials,
                             FusionObjective objective, double step,
                             const DcfParams &dcf) {
  if (!trials.labeled())
    throw Error(ErrorKind::kMissing,
                "optimum fusion needs a labeled trial list");
  std::unordered_map<PairKey, bool, PairKeyHash> label_of;
  label_of.reserve(trials.size());
  for (const TrialPair &p : trials.pairs())
    label_of.emplace(PairKey{p.enroll, p.test}, *p.label);
  if (label_of.size() != aligned.num_trials())
    throw Error(ErrorKind::kAlignment,
                "trial list has " + std::to_string(label_of.size()) +
                    " pairs, score sets have " +
                    std::to_string(aligned.num_trials()));
  std::vector<bool> labels;
  labels.reserve(aligned.num_trials());
  for (const PairKey &k : aligned.pairs) {
    auto it = label_of.find(k);
    if (it == label_of.end())
      throw Error(ErrorKind::kMissing,
                  "no label for pair " + k.first + " " + k.second);
    labels.push_back(it->second);
  }
  return optimize_fusion(aligned, labels, objective, step, dcf);
}

AlignedScores minmax_normalize_systems(const AlignedScores &aligned) {
  AlignedScores out = aligned;
  for (auto &row : out.systems) {
    std::vector<ScoreEntry> entries;
    entries.reserve(row.size());
    for (std::size_t t = 0; t < row.size(); ++t)
      entries.push_back({out.pairs[t].first, out.pairs[t].second, row[t]});
    row = minmax_normalize(ScoreSet(std::move(entries))).scores();
  }
  return out;
}

std::string write_fusion_report(const FusionResult &result) {
  std::string out = "weights";
  for (double w : result.weights.values()) {
    out += ' ';
    out += format_double(w);
  }
  out += "\nobjective ";
  out += objective_name(result.objective_kind);
  out += ' ';
  out += format_double(result.objective_value);
  out += '\n';
  out += write_score_file(result.fused);
  return out;
}

}  // namespace spkfuse
