// spkfuse/metrics.h

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

#ifndef SPKFUSE_METRICS_H_
#define SPKFUSE_METRICS_H_

#include <cstddef>
#include <span>
#include <vector>

#include "spkfuse/trial_io.h"

namespace spkfuse {

/// Detection cost parameters. Defaults follow the VoxSRC 2020 convention.
struct DcfParams {
  double p_target = 0.05;
  double c_miss = 1.0;
  double c_fa = 1.0;
  bool normalized = true;

  /// Throws kInvalidArgument unless 0 < p_target < 1 and both costs > 0.
  void validate() const;
};

/// One operating point. A trial is accepted iff score >= threshold.
struct DetPoint {
  double threshold;
  double p_fa;
  double p_miss;
};

struct OperatingValue {
  double value;
  double threshold;
};

struct ErrorReport {
  double eer = 0.0;  // fraction in [0, 1]
  double eer_threshold = 0.0;
  double min_dcf = 0.0;
  double dcf_threshold = 0.0;
  std::size_t n_target = 0;
  std::size_t n_nontarget = 0;
};

/**
   Full threshold sweep in ascending threshold order: the accept-all point
   (threshold -inf), one point per distinct score, and the reject-all point
   (threshold +inf). P_fa is non-increasing and P_miss non-decreasing along
   the list. Requires at least one target and one nontarget.
*/
std::vector<DetPoint> det_points(std::span<const double> scores,
                                 const std::vector<bool> &labels);

/**
   Equal error rate. Finds the first DET point where P_fa - P_miss <= 0. An
   exact zero is returned as is; otherwise the crossing is linearly
   interpolated against the previous point:

     t   = d_prev / (d_prev - d_cur)
     eer = P_fa_prev + t * (P_fa_cur - P_fa_prev)

   The threshold is interpolated the same way when both ends are finite.
*/
OperatingValue eer(std::span<const double> scores,
                   const std::vector<bool> &labels);

/// Minimum detection cost over all DET points; ties resolve to the smallest
/// threshold.
OperatingValue min_dcf(std::span<const double> scores,
                       const std::vector<bool> &labels,
                       const DcfParams &params = {});

/// Sweeps over precomputed DET points (as returned by det_points).
OperatingValue eer_from_points(std::span<const DetPoint> points);
OperatingValue min_dcf_from_points(std::span<const DetPoint> points,
                                   const DcfParams &params);

/// Cost at a single operating point, normalized when params.normalized.
double detection_cost(double p_fa, double p_miss, const DcfParams &params);

/// EER and minDCF of `scores` against the labels of `trials`. Scores are
/// matched to trials by pair; both must cover the same pairs.
ErrorReport evaluate(const ScoreSet &scores, const TrialList &trials,
                     const DcfParams &params = {});

}  // namespace spkfuse

#endif  // SPKFUSE_METRICS_H_
