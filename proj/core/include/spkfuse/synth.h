// spkfuse/synth.h

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

#ifndef SPKFUSE_SYNTH_H_
#define SPKFUSE_SYNTH_H_

#include <cstddef>
#include <cstdint>

#include "spkfuse/trial_io.h"

namespace spkfuse {

struct SynthSpec {
  std::size_t n_speakers = 50;
  std::size_t utts_per_speaker = 5;
  std::size_t dim = 32;
  double within_std = 0.1;
  double between_std = 1.0;
  std::uint64_t seed = 0;

  void validate() const;
};

struct SynthData {
  EmbeddingSet embeddings;
  TrialList trials;
};

/**
   Gaussian speaker model. Draw order from a single Rng(seed):
     1. centroids, speaker-major: c_s[k] = between_std * normal()
     2. utterances, speaker-major then utterance then component:
        x[k] = c_s[k] + within_std * normal()
     3. nontarget pairs: a = index(N), b = index(N), redrawn while a and b
        share a speaker or the unordered pair was already drawn.
   Utterance ids are "spkSSSS-uttUUU". Trials list every same-speaker pair
   (i < j, speaker-major) followed by as many sampled cross-speaker pairs.
*/
SynthData generate(const SynthSpec &spec);

}  // namespace spkfuse

#endif  // SPKFUSE_SYNTH_H_
