// trial_io.cc

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

#include "spkfuse/trial_io.h"

#include <bit>
#include <charconv>
#include <cmath>
#include <cstring>
#include <functional>
#include <unordered_set>

#include "spkfuse/error.h"

namespace spkfuse {

namespace {

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\r'; }

// Splits `text` into lines and each line into whitespace-separated tokens.
// Calls fn(line_number, tokens) for every non-empty line.
template <typename Fn>
void for_each_line(std::string_view text, Fn &&fn) {
  std::size_t line_no = 0;
  std::vector<std::string_view> tokens;
  while (!text.empty()) {
    std::size_t nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{}
                                        : text.substr(nl + 1);
    ++line_no;
    tokens.clear();
    std::size_t i = 0;
    while (i < line.size()) {
      while (i < line.size() && is_space(line[i])) ++i;
      std::size_t start = i;
      while (i < line.size() && !is_space(line[i])) ++i;
      if (i > start) tokens.push_back(line.substr(start, i - start));
    }
    if (!tokens.empty()) fn(line_no, tokens);
  }
}

void check_id(const std::string &id, const char *what) {
  if (!is_valid_utterance_id(id))
    throw Error(ErrorKind::kInvalidArgument,
                std::string("invalid ") + what + " utterance id '" + id + "'");
}

// Little-endian helpers for the EMB1 format.
template <typename T>
void put_le(std::string &out, T v) {
  for (std::size_t i = 0; i < sizeof(T); ++i)
    out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

class ByteReader {
 public:
  explicit ByteReader(std::string_view data) : data_(data) {}

  template <typename T>
  T get_le(const char *what) {
    need(sizeof(T), what);
    T v = 0;
    for (std::size_t i = 0; i < sizeof(T); ++i)
      v |= static_cast<T>(static_cast<unsigned char>(data_[pos_ + i]))
           << (8 * i);
    pos_ += sizeof(T);
    return v;
  }

  std::string_view get_bytes(std::size_t n, const char *what) {
    need(n, what);
    std::string_view s = data_.substr(pos_, n);
    pos_ += n;
    return s;
  }

  bool at_end() const { return pos_ == data_.size(); }

 private:
  void need(std::size_t n, const char *what) const {
    if (data_.size() - pos_ < n)
      throw ParseError(0, std::string("truncated embedding payload reading ") +
                              what + " at byte " + std::to_string(pos_));
  }

  std::string_view data_;
  std::size_t pos_ = 0;
};

}  // namespace

std::size_t PairKeyHash::operator()(const PairKey &k) const noexcept {
  std::size_t h1 = std::hash<std::string>{}(k.first);
  std::size_t h2 = std::hash<std::string>{}(k.second);
  return h1 ^ (h2 + 0x9e3779b97f4a7c15ULL + (h1 << 6) + (h1 >> 2));
}

bool is_valid_utterance_id(std::string_view id) {
  if (id.empty()) return false;
  for (char c : id)
    if (c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\v' ||
        c == '\f')
      return false;
  return true;
}

std::string format_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

std::optional<double> parse_double(std::string_view token) {
  if (!token.empty() && token.front() == '+') token.remove_prefix(1);
  if (token.empty()) return std::nullopt;
  double v = 0.0;
  auto res = std::from_chars(token.data(), token.data() + token.size(), v,
                             std::chars_format::general);
  if (res.ec != std::errc() || res.ptr != token.data() + token.size())
    return std::nullopt;
  if (!std::isfinite(v)) return std::nullopt;
  return v;
}

// ---------------------------------------------------------------------------
// TrialList

TrialList::TrialList(std::vector<TrialPair> pairs) : pairs_(std::move(pairs)) {
  if (pairs_.empty())
    throw Error(ErrorKind::kInvalidArgument, "trial list is empty");
  const bool has_label = pairs_.front().label.has_value();
  std::unordered_set<PairKey, PairKeyHash> seen;
  seen.reserve(pairs_.size());
  for (const TrialPair &p : pairs_) {
    check_id(p.enroll, "enroll");
    check_id(p.test, "test");
    if (p.label.has_value() != has_label)
      throw Error(ErrorKind::kInvalidArgument,
                  "trial list mixes labeled and unlabeled pairs");
    if (!seen.insert({p.enroll, p.test}).second)
      throw Error(ErrorKind::kDuplicate,
                  "duplicate trial pair " + p.enroll + " " + p.test);
  }
}

std::vector<bool> TrialList::labels() const {
  if (!labeled())
    throw Error(ErrorKind::kMissing, "trial list carries no labels");
  std::vector<bool> out;
  out.reserve(pairs_.size());
  for (const TrialPair &p : pairs_) out.push_back(*p.label);
  return out;
}

TrialList parse_trial_list(std::string_view text) {
  std::vector<TrialPair> pairs;
  std::optional<bool> labeled;
  std::unordered_set<PairKey, PairKeyHash> seen;
  for_each_line(text, [&](std::size_t line,
                          const std::vector<std::string_view> &tok) {
    TrialPair p;
    if (tok.size() == 3) {
      if (tok[0] == "1")
        p.label = true;
      else if (tok[0] == "0")
        p.label = false;
      else
        throw ParseError(line, "label must be 0 or 1, got '" +
                                   std::string(tok[0]) + "'");
      p.enroll = tok[1];
      p.test = tok[2];
    } else if (tok.size() == 2) {
      // A bare 0/1 first token reads as a label with a missing utterance.
      if (tok[0] == "0" || tok[0] == "1")
        throw ParseError(line, "labeled trial line needs 'label enroll test'");
      p.enroll = tok[0];
      p.test = tok[1];
    } else {
      throw ParseError(line, "expected 'label enroll test' or 'enroll test', "
                             "got " + std::to_string(tok.size()) + " tokens");
    }
    if (!labeled.has_value())
      labeled = p.label.has_value();
    else if (*labeled != p.label.has_value())
      throw ParseError(line, "mixed labeled and unlabeled trial lines");
    if (!seen.insert({p.enroll, p.test}).second)
      throw Error(ErrorKind::kDuplicate, "line " + std::to_string(line) +
                                             ": duplicate trial pair " +
                                             p.enroll + " " + p.test);
    pairs.push_back(std::move(p));
  });
  if (pairs.empty()) throw ParseError(0, "trial list is empty");
  return TrialList(std::move(pairs));
}

std::string write_trial_list(const TrialList &trials) {
  std::string out;
  for (const TrialPair &p : trials.pairs()) {
    if (p.label) out += *p.label ? "1 " : "0 ";
    out += p.enroll;
    out += ' ';
    out += p.test;
    out += '\n';
  }
  return out;
}

// ---------------------------------------------------------------------------
// ScoreSet

ScoreSet::ScoreSet(std::vector<ScoreEntry> entries)
    : entries_(std::move(entries)) {
  if (entries_.empty())
    throw Error(ErrorKind::kInvalidArgument, "score set is empty");
  for (const ScoreEntry &e : entries_) {
    check_id(e.enroll, "enroll");
    check_id(e.test, "test");
    if (!std::isfinite(e.score))
      throw Error(ErrorKind::kNumerical,
                  "non-finite score for pair " + e.enroll + " " + e.test);
  }
}

std::vector<double> ScoreSet::scores() const {
  std::vector<double> out;
  out.reserve(entries_.size());
  for (const ScoreEntry &e : entries_) out.push_back(e.score);
  return out;
}

ScoreSet parse_score_file(std::string_view text) {
  std::vector<ScoreEntry> entries;
  for_each_line(text, [&](std::size_t line,
                          const std::vector<std::string_view> &tok) {
    if (tok.size() != 3)
      throw ParseError(line, "expected 'enroll test score', got " +
                                 std::to_string(tok.size()) + " tokens");
    std::optional<double> v = parse_double(tok[2]);
    if (!v)
      throw ParseError(line, "invalid or non-finite score '" +
                                 std::string(tok[2]) + "'");
    entries.push_back({std::string(tok[0]), std::string(tok[1]), *v});
  });
  if (entries.empty()) throw ParseError(0, "score file is empty");
  return ScoreSet(std::move(entries));
}

std::string write_score_file(const ScoreSet &scores) {
  std::string out;
  for (const ScoreEntry &e : scores.entries()) {
    out += e.enroll;
    out += ' ';
    out += e.test;
    out += ' ';
    out += format_double(e.score);
    out += '\n';
  }
  return out;
}

// ---------------------------------------------------------------------------
// EmbeddingSet

void EmbeddingSet::add(const std::string &id, Vector v) {
  check_id(id, "embedding");
  if (v.empty())
    throw Error(ErrorKind::kDimension, "zero-dimension vector for " + id);
  if (dim_ == 0) {
    dim_ = v.size();
  } else if (v.size() != dim_) {
    throw Error(ErrorKind::kDimension,
                "dimension mismatch for " + id + ": expected " +
                    std::to_string(dim_) + ", got " + std::to_string(v.size()));
  }
  for (float x : v)
    if (!std::isfinite(x))
      throw Error(ErrorKind::kNumerical, "non-finite component in " + id);
  auto [it, inserted] = index_.try_emplace(id, ids_.size());
  if (inserted) {
    ids_.push_back(id);
    segments_.emplace_back();
  }
  segments_[it->second].push_back(std::move(v));
}

const std::vector<EmbeddingSet::Vector> &EmbeddingSet::at(
    const std::string &id) const {
  auto it = index_.find(id);
  if (it == index_.end())
    throw Error(ErrorKind::kMissing, "utterance '" + id + "' not found");
  return segments_[it->second];
}

bool operator==(const EmbeddingSet &a, const EmbeddingSet &b) {
  if (a.dim_ != b.dim_ || a.ids_ != b.ids_) return false;
  // Bitwise comparison so that -0.0f and 0.0f are distinguished.
  for (std::size_t u = 0; u < a.segments_.size(); ++u) {
    const auto &sa = a.segments_[u];
    const auto &sb = b.segments_[u];
    if (sa.size() != sb.size()) return false;
    for (std::size_t s = 0; s < sa.size(); ++s)
      if (sa[s].size() != sb[s].size() ||
          std::memcmp(sa[s].data(), sb[s].data(),
                      sa[s].size() * sizeof(float)) != 0)
        return false;
  }
  return true;
}

EmbeddingSet read_embeddings(std::string_view data, EmbeddingFormat format) {
  EmbeddingSet emb;
  if (format == EmbeddingFormat::kText) {
    for_each_line(data, [&](std::size_t line,
                            const std::vector<std::string_view> &tok) {
      if (tok.size() < 2)
        throw ParseError(line, "expected 'utt-id v1 ... vd'");
      EmbeddingSet::Vector v;
      v.reserve(tok.size() - 1);
      for (std::size_t i = 1; i < tok.size(); ++i) {
        std::string_view t = tok[i];
        if (t.front() == '+') t.remove_prefix(1);
        float f = 0.0f;
        auto res = std::from_chars(t.data(), t.data() + t.size(), f,
                                   std::chars_format::general);
        if (t.empty() || res.ec != std::errc() ||
            res.ptr != t.data() + t.size() || !std::isfinite(f))
          throw ParseError(line, "invalid or non-finite value '" +
                                     std::string(tok[i]) + "'");
        v.push_back(f);
      }
      try {
        emb.add(std::string(tok[0]), std::move(v));
      } catch (const Error &e) {
        if (e.kind() == ErrorKind::kDimension) throw;
        throw ParseError(line, e.what());
      }
    });
  } else {
    ByteReader in(data);
    std::string_view magic = in.get_bytes(4, "magic");
    if (magic != "EMB1") throw ParseError(0, "bad magic, expected 'EMB1'");
    const std::uint32_t count = in.get_le<std::uint32_t>("record count");
    for (std::uint32_t r = 0; r < count; ++r) {
      const std::uint16_t id_len = in.get_le<std::uint16_t>("id length");
      std::string id(in.get_bytes(id_len, "id"));
      const std::uint32_t dim = in.get_le<std::uint32_t>("dimension");
      if (dim == 0)
        throw Error(ErrorKind::kDimension,
                    "zero dimension in record " + std::to_string(r));
      EmbeddingSet::Vector v(dim);
      for (std::uint32_t i = 0; i < dim; ++i)
        v[i] = std::bit_cast<float>(in.get_le<std::uint32_t>("vector"));
      emb.add(id, std::move(v));
    }
    if (!in.at_end())
      throw ParseError(0, "trailing bytes after last embedding record");
  }
  if (emb.empty()) throw ParseError(0, "embedding payload has no vectors");
  return emb;
}

std::string write_embeddings(const EmbeddingSet &emb, EmbeddingFormat format) {
  std::string out;
  if (format == EmbeddingFormat::kText) {
    char buf[64];
    for (const std::string &id : emb.ids()) {
      for (const auto &v : emb.at(id)) {
        out += id;
        for (float x : v) {
          auto res = std::to_chars(buf, buf + sizeof(buf), x);
          out += ' ';
          out.append(buf, res.ptr);
        }
        out += '\n';
      }
    }
    return out;
  }
  std::uint64_t records = 0;
  for (const std::string &id : emb.ids()) records += emb.at(id).size();
  if (records > 0xffffffffULL)
    throw Error(ErrorKind::kInvalidArgument, "too many embedding records");
  out += "EMB1";
  put_le<std::uint32_t>(out, static_cast<std::uint32_t>(records));
  for (const std::string &id : emb.ids()) {
    if (id.size() > 0xffff)
      throw Error(ErrorKind::kInvalidArgument, "utterance id too long: " + id);
    for (const auto &v : emb.at(id)) {
      put_le<std::uint16_t>(out, static_cast<std::uint16_t>(id.size()));
      out += id;
      put_le<std::uint32_t>(out, static_cast<std::uint32_t>(v.size()));
      for (float x : v) put_le<std::uint32_t>(out, std::bit_cast<std::uint32_t>(x));
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Alignment

namespace {

std::unordered_map<PairKey, double, PairKeyHash> index_scores(
    const ScoreSet &set, std::size_t which) {
  std::unordered_map<PairKey, double, PairKeyHash> m;
  m.reserve(set.size());
  for (const ScoreEntry &e : set.entries())
    if (!m.emplace(PairKey{e.enroll, e.test}, e.score).second)
      throw Error(ErrorKind::kDuplicate,
                  "duplicate pair " + e.enroll + " " + e.test +
                      " in score set " + std::to_string(which));
  return m;
}

}  // namespace

AlignedScores align_score_sets(std::span<const ScoreSet> sets) {
  if (sets.empty())
    throw Error(ErrorKind::kInvalidArgument, "no score sets to align");
  AlignedScores out;
  // The first set defines the order; building its index also rejects
  // duplicates within it.
  index_scores(sets[0], 0);
  out.pairs.reserve(sets[0].size());
  for (const ScoreEntry &e : sets[0].entries())
    out.pairs.emplace_back(e.enroll, e.test);
  out.systems.push_back(sets[0].scores());
  for (std::size_t s = 1; s < sets.size(); ++s) {
    auto m = index_scores(sets[s], s);
    std::vector<double> row;
    row.reserve(out.pairs.size());
    for (const PairKey &k : out.pairs) {
      auto it = m.find(k);
      if (it == m.end())
        throw Error(ErrorKind::kAlignment, "pair " + k.first + " " + k.second +
                                               " missing from score set " +
                                               std::to_string(s));
      row.push_back(it->second);
    }
    if (m.size() != out.pairs.size()) {
      std::unordered_set<PairKey, PairKeyHash> ref(out.pairs.begin(),
                                                   out.pairs.end());
      for (const ScoreEntry &e : sets[s].entries())
        if (!ref.count({e.enroll, e.test}))
          throw Error(ErrorKind::kAlignment,
                      "pair " + e.enroll + " " + e.test + " in score set " +
                          std::to_string(s) + " missing from score set 0");
    }
    out.systems.push_back(std::move(row));
  }
  return out;
}

ScoreSet align_to_trials(const ScoreSet &scores, const TrialList &trials) {
  auto m = index_scores(scores, 0);
  std::vector<ScoreEntry> out;
  out.reserve(trials.size());
  for (const TrialPair &p : trials.pairs()) {
    auto it = m.find({p.enroll, p.test});
    if (it == m.end())
      throw Error(ErrorKind::kAlignment,
                  "trial " + p.enroll + " " + p.test + " has no score");
    out.push_back({p.enroll, p.test, it->second});
  }
  if (m.size() != trials.size())
    throw Error(ErrorKind::kAlignment,
                "score set contains " + std::to_string(m.size() - trials.size()) +
                    " pair(s) not in the trial list");
  return ScoreSet(std::move(out));
}

}  // namespace spkfuse
