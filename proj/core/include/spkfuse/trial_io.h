// spkfuse/trial_io.h

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

#ifndef SPKFUSE_TRIAL_IO_H_
#define SPKFUSE_TRIAL_IO_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace spkfuse {

/// (enroll, test) key used for duplicate detection and alignment.
using PairKey = std::pair<std::string, std::string>;

struct PairKeyHash {
  std::size_t operator()(const PairKey &k) const noexcept;
};

/// True for a non-empty token without whitespace.
bool is_valid_utterance_id(std::string_view id);

struct TrialPair {
  std::string enroll;
  std::string test;
  std::optional<bool> label;  // true = same speaker (target)

  friend bool operator==(const TrialPair &, const TrialPair &) = default;
};

/// Non-empty ordered list of unique trial pairs. Either every pair carries a
/// label or none does.
class TrialList {
 public:
  explicit TrialList(std::vector<TrialPair> pairs);

  const std::vector<TrialPair> &pairs() const noexcept { return pairs_; }
  std::size_t size() const noexcept { return pairs_.size(); }
  bool labeled() const noexcept { return pairs_.front().label.has_value(); }

  /// Labels in trial order; throws kMissing when the list is unlabeled.
  std::vector<bool> labels() const;

  friend bool operator==(const TrialList &, const TrialList &) = default;

 private:
  std::vector<TrialPair> pairs_;
};

struct ScoreEntry {
  std::string enroll;
  std::string test;
  double score = 0.0;

  friend bool operator==(const ScoreEntry &, const ScoreEntry &) = default;
};

/// Non-empty ordered list of finite scores. Entry order is the alignment
/// identity used by fusion.
class ScoreSet {
 public:
  explicit ScoreSet(std::vector<ScoreEntry> entries);

  const std::vector<ScoreEntry> &entries() const noexcept { return entries_; }
  std::size_t size() const noexcept { return entries_.size(); }
  std::vector<double> scores() const;

  friend bool operator==(const ScoreSet &, const ScoreSet &) = default;

 private:
  std::vector<ScoreEntry> entries_;
};

/// Utterance id to one or more float vectors of a common dimension.
/// Utterances keep their first-insertion order.
class EmbeddingSet {
 public:
  using Vector = std::vector<float>;

  EmbeddingSet() = default;

  /// Appends a segment vector to `id`, creating the utterance if needed.
  void add(const std::string &id, Vector v);

  std::size_t dim() const noexcept { return dim_; }
  std::size_t size() const noexcept { return ids_.size(); }
  bool empty() const noexcept { return ids_.empty(); }
  bool contains(const std::string &id) const { return index_.count(id) != 0; }

  /// Utterance ids in insertion order.
  const std::vector<std::string> &ids() const noexcept { return ids_; }

  /// Segments of `id`; throws kMissing naming the id when absent.
  const std::vector<Vector> &at(const std::string &id) const;

  friend bool operator==(const EmbeddingSet &a, const EmbeddingSet &b);

 private:
  std::size_t dim_ = 0;
  std::vector<std::string> ids_;
  std::vector<std::vector<Vector>> segments_;
  std::unordered_map<std::string, std::size_t> index_;
};

enum class EmbeddingFormat { kText, kBinary };

/// k systems by n trials, rows in the order the sets were given, columns in
/// the first set's pair order.
struct AlignedScores {
  std::vector<PairKey> pairs;
  std::vector<std::vector<double>> systems;

  std::size_t num_systems() const noexcept { return systems.size(); }
  std::size_t num_trials() const noexcept { return pairs.size(); }
};

TrialList parse_trial_list(std::string_view text);
std::string write_trial_list(const TrialList &trials);

ScoreSet parse_score_file(std::string_view text);
std::string write_score_file(const ScoreSet &scores);

/// `data` holds text or raw bytes depending on `format`.
EmbeddingSet read_embeddings(std::string_view data, EmbeddingFormat format);
std::string write_embeddings(const EmbeddingSet &emb, EmbeddingFormat format);

AlignedScores align_score_sets(std::span<const ScoreSet> sets);

/// Reorders `scores` into trial order. Every trial must be scored exactly
/// once and no extra pairs may be present.
ScoreSet align_to_trials(const ScoreSet &scores, const TrialList &trials);

/// Shortest decimal text that parses back to exactly `v`.
std::string format_double(double v);

/// Strict decimal parse of a finite double; nullopt on any failure.
std::optional<double> parse_double(std::string_view token);

}  // namespace spkfuse

#endif  // SPKFUSE_TRIAL_IO_H_
