// spkfuse/scoring.h

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

#ifndef SPKFUSE_SCORING_H_
#define SPKFUSE_SCORING_H_

#include <cstddef>
#include <span>
#include <vector>

#include "spkfuse/trial_io.h"

namespace spkfuse {

/// How utterances were cut before embedding extraction. kFull expects one
/// vector per utterance; kSegmented expects exactly `segment_count` vectors.
struct EvalMode {
  enum class Kind { kFull, kSegmented };
  Kind kind = Kind::kFull;
  std::size_t segment_count = 1;

  static EvalMode full() { return {}; }
  static EvalMode segmented(std::size_t count);
};

/// Mean over all segment pairs (i, j) of -||a_i - b_j||.
double score_pair(std::span<const EmbeddingSet::Vector> a,
                  std::span<const EmbeddingSet::Vector> b);

/// One negative-Euclidean score per trial, in trial order. Utterances may
/// carry any number of segments.
ScoreSet score_trials(const EmbeddingSet &emb, const TrialList &trials);

/// As above, but first checks every referenced utterance against `mode`.
ScoreSet score_trials(const EmbeddingSet &emb, const TrialList &trials,
                      EvalMode mode);

/// Affine map of the scores onto [0, 1]; a constant set maps to 0.5.
ScoreSet minmax_normalize(const ScoreSet &scores);

}  // namespace spkfuse

#endif  // SPKFUSE_SCORING_H_
