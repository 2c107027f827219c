// synth.cc

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

#include "spkfuse/synth.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>
#include <utility>
#include <vector>

#include "spkfuse/error.h"
#include "spkfuse/random.h"

namespace spkfuse {

void SynthSpec::validate() const {
  if (n_speakers < 2)
    throw Error(ErrorKind::kInvalidArgument, "synth needs at least 2 speakers");
  if (utts_per_speaker < 2)
    throw Error(ErrorKind::kInvalidArgument,
                "synth needs at least 2 utterances per speaker");
  if (dim == 0)
    throw Error(ErrorKind::kInvalidArgument, "synth dimension must be positive");
  if (!(within_std > 0.0) || !std::isfinite(within_std) ||
      !(between_std > 0.0) || !std::isfinite(between_std))
    throw Error(ErrorKind::kInvalidArgument,
                "synth standard deviations must be positive and finite");
  if (!(between_std > within_std))
    throw Error(ErrorKind::kInvalidArgument,
                "synth between_std must exceed within_std");
}

SynthData generate(const SynthSpec &spec) {
  spec.validate();
  Rng rng(spec.seed);
  const std::size_t s_count = spec.n_speakers, u_count = spec.utts_per_speaker;

  std::vector<std::vector<double>> centroids(s_count,
                                             std::vector<double>(spec.dim));
  for (auto &c : centroids)
    for (double &v : c) v = spec.between_std * rng.normal();

  auto id_of = [](std::size_t s, std::size_t u) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "spk%04zu-utt%03zu", s, u);
    return std::string(buf);
  };

  EmbeddingSet emb;
  std::vector<std::string> ids;
  ids.reserve(s_count * u_count);
  for (std::size_t s = 0; s < s_count; ++s) {
    for (std::size_t u = 0; u < u_count; ++u) {
      EmbeddingSet::Vector v(spec.dim);
      for (std::size_t k = 0; k < spec.dim; ++k)
        v[k] = static_cast<float>(centroids[s][k] +
                                  spec.within_std * rng.normal());
      ids.push_back(id_of(s, u));
      emb.add(ids.back(), std::move(v));
    }
  }

  std::vector<TrialPair> pairs;
  for (std::size_t s = 0; s < s_count; ++s)
    for (std::size_t i = 0; i < u_count; ++i)
      for (std::size_t j = i + 1; j < u_count; ++j)
        pairs.push_back({ids[s * u_count + i], ids[s * u_count + j], true});

  const std::size_t n_targets = pairs.size();
  const std::size_t n_utts = ids.size();
  std::set<std::pair<std::size_t, std::size_t>> drawn;
  while (drawn.size() < n_targets) {
    const auto a = static_cast<std::size_t>(rng.index(n_utts));
    const auto b = static_cast<std::size_t>(rng.index(n_utts));
    if (a / u_count == b / u_count) continue;
    if (!drawn.insert({std::min(a, b), std::max(a, b)}).second) continue;
    pairs.push_back({ids[a], ids[b], false});
  }
  return {std::move(emb), TrialList(std::move(pairs))};
}

}  // namespace spkfuse
