// scoring.cc

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

#include "spkfuse/scoring.h"

#include <algorithm>
#include <cmath>

#include "spkfuse/error.h"

namespace spkfuse {

EvalMode EvalMode::segmented(std::size_t count) {
  if (count == 0)
    throw Error(ErrorKind::kInvalidArgument, "segment count must be >= 1");
  return {Kind::kSegmented, count};
}

double score_pair(std::span<const EmbeddingSet::Vector> a,
                  std::span<const EmbeddingSet::Vector> b) {
  if (a.empty() || b.empty())
    throw Error(ErrorKind::kInvalidArgument, "score_pair: empty segment list");
  const std::size_t d = a.front().size();
  auto check = [d](std::span<const EmbeddingSet::Vector> s) {
    for (const auto &v : s)
      if (v.size() != d)
        throw Error(ErrorKind::kDimension, "score_pair: dimension mismatch");
  };
  check(a);
  check(b);
  double total = 0.0;
  for (const auto &x : a) {
    for (const auto &y : b) {
      double sq = 0.0;
      for (std::size_t k = 0; k < d; ++k) {
        const double diff = static_cast<double>(x[k]) - static_cast<double>(y[k]);
        sq += diff * diff;
      }
      total -= std::sqrt(sq);
    }
  }
  return total / static_cast<double>(a.size() * b.size());
}

ScoreSet score_trials(const EmbeddingSet &emb, const TrialList &trials) {
  std::vector<ScoreEntry> out;
  out.reserve(trials.size());
  for (const TrialPair &p : trials.pairs())
    out.push_back({p.enroll, p.test, score_pair(emb.at(p.enroll),
                                                emb.at(p.test))});
  return ScoreSet(std::move(out));
}

ScoreSet score_trials(const EmbeddingSet &emb, const TrialList &trials,
                      EvalMode mode) {
  const std::size_t expected =
      mode.kind == EvalMode::Kind::kFull ? 1 : mode.segment_count;
  for (const TrialPair &p : trials.pairs()) {
    for (const std::string *id : {&p.enroll, &p.test}) {
      const std::size_t n = emb.at(*id).size();
      if (n != expected)
        throw Error(ErrorKind::kDimension,
                    "utterance '" + *id + "' has " + std::to_string(n) +
                        " segment(s), evaluation mode expects " +
                        std::to_string(expected));
    }
  }
  return score_trials(emb, trials);
}

ScoreSet minmax_normalize(const ScoreSet &scores) {
  const auto &e = scores.entries();
  auto [lo_it, hi_it] = std::minmax_element(
      e.begin(), e.end(),
      [](const ScoreEntry &a, const ScoreEntry &b) { return a.score < b.score; });
  const double lo = lo_it->score, hi = hi_it->score;
  std::vector<ScoreEntry> out(e);
  for (ScoreEntry &s : out) {
    if (hi == lo) {
      s.score = 0.5;
    } else if (s.score == hi) {
      s.score = 1.0;  // pin the endpoint against rounding
    } else {
      s.score = (s.score - lo) / (hi - lo);
    }
  }
  return ScoreSet(std::move(out));
}

}  // namespace spkfuse
