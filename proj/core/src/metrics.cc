// metrics.cc

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

#include "spkfuse/metrics.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "spkfuse/error.h"

namespace spkfuse {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

}  // namespace

void DcfParams::validate() const {
  if (!(p_target > 0.0 && p_target < 1.0))
    throw Error(ErrorKind::kInvalidArgument, "p_target must lie in (0, 1)");
  if (!(c_miss > 0.0) || !(c_fa > 0.0) || !std::isfinite(c_miss) ||
      !std::isfinite(c_fa))
    throw Error(ErrorKind::kInvalidArgument, "DCF costs must be positive");
}

std::vector<DetPoint> det_points(std::span<const double> scores,
                                 const std::vector<bool> &labels) {
  if (scores.size() != labels.size())
    throw Error(ErrorKind::kAlignment,
                "got " + std::to_string(scores.size()) + " scores and " +
                    std::to_string(labels.size()) + " labels");
  std::size_t n_tgt = 0;
  for (bool l : labels) n_tgt += l ? 1 : 0;
  const std::size_t n_non = labels.size() - n_tgt;
  if (n_tgt == 0 || n_non == 0)
    throw Error(ErrorKind::kInvalidArgument,
                "need at least one target and one nontarget trial");
  for (double s : scores)
    if (!std::isfinite(s))
      throw Error(ErrorKind::kNumerical, "non-finite score");

  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return scores[a] < scores[b];
  });

  const double dt = static_cast<double>(n_tgt);
  const double dn = static_cast<double>(n_non);
  std::vector<DetPoint> points;
  points.push_back({-kInf, 1.0, 0.0});
  // Walk distinct values upwards. Before visiting value v, `miss` counts
  // targets strictly below v and `fa` counts nontargets at or above v.
  std::size_t miss = 0, fa = n_non;
  std::size_t i = 0;
  while (i < order.size()) {
    const double v = scores[order[i]];
    points.push_back({v, static_cast<double>(fa) / dn,
                      static_cast<double>(miss) / dt});
    while (i < order.size() && scores[order[i]] == v) {
      if (labels[order[i]])
        ++miss;
      else
        --fa;
      ++i;
    }
  }
  points.push_back({kInf, 0.0, 1.0});
  return points;
}

OperatingValue eer(std::span<const double> scores,
                   const std::vector<bool> &labels) {
  return eer_from_points(det_points(scores, labels));
}

OperatingValue eer_from_points(std::span<const DetPoint> pts) {
  for (std::size_t i = 1; i < pts.size(); ++i) {
    const double d_cur = pts[i].p_fa - pts[i].p_miss;
    if (d_cur > 0.0) continue;
    if (d_cur == 0.0) return {pts[i].p_fa, pts[i].threshold};
    const DetPoint &prev = pts[i - 1];
    const double d_prev = prev.p_fa - prev.p_miss;
    const double t = d_prev / (d_prev - d_cur);
    const double value = prev.p_fa + t * (pts[i].p_fa - prev.p_fa);
    double threshold;
    if (std::isfinite(prev.threshold) && std::isfinite(pts[i].threshold))
      threshold = prev.threshold + t * (pts[i].threshold - prev.threshold);
    else
      threshold = std::isfinite(prev.threshold) ? prev.threshold
                                                : pts[i].threshold;
    return {value, threshold};
  }
  // Unreachable: the reject-all point has P_fa - P_miss = -1.
  throw Error(ErrorKind::kNumerical, "EER crossing not found");
}

double detection_cost(double p_fa, double p_miss, const DcfParams &params) {
  const double cost = params.c_miss * p_miss * params.p_target +
                      params.c_fa * p_fa * (1.0 - params.p_target);
  if (!params.normalized) return cost;
  return cost / std::min(params.c_miss * params.p_target,
                         params.c_fa * (1.0 - params.p_target));
}

OperatingValue min_dcf(std::span<const double> scores,
                       const std::vector<bool> &labels,
                       const DcfParams &params) {
  params.validate();
  return min_dcf_from_points(det_points(scores, labels), params);
}

OperatingValue min_dcf_from_points(std::span<const DetPoint> pts,
                                   const DcfParams &params) {
  params.validate();
  OperatingValue best{kInf, kInf};
  for (const DetPoint &p : pts) {
    const double c = detection_cost(p.p_fa, p.p_miss, params);
    if (c < best.value) best = {c, p.threshold};
  }
  return best;
}

ErrorReport evaluate(const ScoreSet &scores, const TrialList &trials,
                     const DcfParams &params) {
  const std::vector<bool> labels = trials.labels();
  const std::vector<double> s = align_to_trials(scores, trials).scores();
  ErrorReport r;
  const OperatingValue e = eer(s, labels);
  const OperatingValue d = min_dcf(s, labels, params);
  r.eer = e.value;
  r.eer_threshold = e.threshold;
  r.min_dcf = d.value;
  r.dcf_threshold = d.threshold;
  for (bool l : labels) (l ? r.n_target : r.n_nontarget) += 1;
  return r;
}

}  // namespace spkfuse
