// spkfuse/fusion.h

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

#ifndef SPKFUSE_FUSION_H_
#define SPKFUSE_FUSION_H_

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "spkfuse/metrics.h"
#include "spkfuse/trial_io.h"

namespace spkfuse {

/// Convex combination weights: non-negative, summing to 1 within 1e-9.
class FusionWeights {
 public:
  explicit FusionWeights(std::vector<double> w);

  static FusionWeights uniform(std::size_t k);
  static FusionWeights unit(std::size_t k, std::size_t i);

  const std::vector<double> &values() const noexcept { return w_; }
  std::size_t size() const noexcept { return w_.size(); }
  double operator[](std::size_t i) const { return w_[i]; }

  friend bool operator==(const FusionWeights &, const FusionWeights &) = default;

 private:
  std::vector<double> w_;
};

enum class FusionObjective { kMinDcf, kEer };

std::string_view objective_name(FusionObjective obj);

struct FusionResult {
  FusionWeights weights;
  ScoreSet fused;
  double objective_value;
  double secondary_value;  // EER when optimizing minDCF, and vice versa
  FusionObjective objective_kind;
  std::size_t candidates_evaluated;
};

/// Per trial: sum_i w_i * s_i, accumulated in system order.
ScoreSet weighted_fuse(const AlignedScores &aligned, const FusionWeights &w);

/// weighted_fuse with weights 1/k.
ScoreSet average_fuse(const AlignedScores &aligned);

/**
   Every weight vector whose components are multiples of `step` and sum to
   one, enumerated with the first component descending (so (1, 0, ...) comes
   first). 1/step must be an integer m within 1e-9; components are stored as
   c/m. The uniform vector is appended when the lattice does not contain it.
*/
std::vector<FusionWeights> simplex_grid(std::size_t k, double step);

/// Value of `objective` (and the other metric) on one score vector.
struct ObjectivePair {
  double primary;
  double secondary;
};
ObjectivePair evaluate_objective(std::span<const double> scores,
                                 const std::vector<bool> &labels,
                                 FusionObjective objective,
                                 const DcfParams &dcf);

/**
   Exhaustive search over simplex_grid(k, step). The winner minimizes the
   objective; ties go to the lower secondary metric, then to the
   lexicographically smallest weight vector. `labels` follow the column
   order of `aligned`.
*/
FusionResult optimize_fusion(const AlignedScores &aligned,
                             const std::vector<bool> &labels,
                             FusionObjective objective = FusionObjective::kMinDcf,
                             double step = 0.05, const DcfParams &dcf = {});

/// As above, taking labels from a trial list covering exactly the aligned
/// pairs.
FusionResult optimize_fusion(const AlignedScores &aligned,
                             const TrialList &trials,
                             FusionObjective objective = FusionObjective::kMinDcf,
                             double step = 0.05, const DcfParams &dcf = {});

/// Applies minmax_normalize to every system row.
AlignedScores minmax_normalize_systems(const AlignedScores &aligned);

/// "weights w1 .. wk", "objective <kind> <value>", then the fused scores.
std::string write_fusion_report(const FusionResult &result);

}  // namespace spkfuse

#endif  // SPKFUSE_FUSION_H_
