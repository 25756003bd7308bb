// Copyright 2026 The satc Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace satc {

/// Opaque string identifier. Non-empty, free of tabs and line breaks, ordered
/// lexicographically (the order used for every tie-break in the library).
template <class Tag>
class Identifier {
 public:
  Identifier() = default;
  explicit Identifier(std::string value);

  const std::string& str() const noexcept { return value_; }

  friend auto operator<=>(const Identifier&, const Identifier&) = default;
  friend bool operator==(const Identifier&, const Identifier&) = default;

  static bool is_valid(std::string_view value) noexcept;

 private:
  std::string value_;
};

struct DocTag {};
struct ClassTag {};
using DocId = Identifier<DocTag>;
using ClassId = Identifier<ClassTag>;

/// Classifier outputs for every (document, class) pair. The sign of a score
/// is the binary decision (0 counts as negative), its magnitude the confidence.
class ScoreMatrix {
 public:
  struct Entry {
    DocId doc;
    ClassId cls;
    double score;
  };

  ScoreMatrix() = default;
  /// `scores` is doc-major: scores[d * classes.size() + c].
  ScoreMatrix(std::vector<DocId> docs, std::vector<ClassId> classes, std::vector<double> scores);

  /// Builds a matrix from unordered entries. Documents and classes keep their
  /// first-appearance order. Throws DataError on duplicates, missing pairs or
  /// non-finite scores.
  static ScoreMatrix from_entries(std::span<const Entry> entries);

  std::size_t num_docs() const noexcept { return docs_.size(); }
  std::size_t num_classes() const noexcept { return classes_.size(); }
  const std::vector<DocId>& docs() const noexcept { return docs_; }
  const std::vector<ClassId>& classes() const noexcept { return classes_; }
  std::span<const double> raw() const noexcept { return scores_; }

  double score(std::size_t doc, std::size_t cls) const { return scores_[doc * classes_.size() + cls]; }
  double score(const DocId& doc, const ClassId& cls) const;
  /// +1 or -1.
  int decision(std::size_t doc, std::size_t cls) const { return score(doc, cls) > 0.0 ? 1 : -1; }
  double confidence(std::size_t doc, std::size_t cls) const;

  std::optional<std::size_t> doc_index(const DocId& doc) const;
  std::optional<std::size_t> class_index(const ClassId& cls) const;
  /// Throws LookupError when absent.
  std::size_t require_doc(const DocId& doc) const;
  std::size_t require_class(const ClassId& cls) const;

  /// Rows for the given document indices, in that order.
  ScoreMatrix select_docs(std::span<const std::size_t> rows) const;

 private:
  void build_index();

  std::vector<DocId> docs_;
  std::vector<ClassId> classes_;
  std::vector<double> scores_;
  std::unordered_map<std::string, std::size_t> doc_pos_;
  std::unordered_map<std::string, std::size_t> class_pos_;
};

/// Positive (document, class) pairs; every other pair is negative.
class LabelSet {
 public:
  LabelSet() = default;

  void add(const DocId& doc, const ClassId& cls);
  bool contains(const DocId& doc, const ClassId& cls) const;
  std::size_t size() const noexcept { return pairs_.size(); }
  bool empty() const noexcept { return pairs_.empty(); }

  /// Positive pairs sorted by (doc, class).
  std::vector<std::pair<DocId, ClassId>> sorted_pairs() const;

  /// Doc-major 0/1 mask over `scores`. Throws DataError if any label
  /// references a document or class outside the matrix.
  std::vector<std::uint8_t> mask_for(const ScoreMatrix& scores) const;

  /// Labels of the given documents only.
  LabelSet restricted_to(std::span<const DocId> docs) const;

  /// "doc\tclass"; unique per pair since ids cannot contain tabs.
  static std::string key(const DocId& doc, const ClassId& cls);

 private:
  std::unordered_set<std::string> pairs_;
};

/// Cell counts of a binary contingency table. Counts are nonnegative reals
/// because test-set counts are usually estimates. tn is optional since no
/// F-measure reads it.
struct ContingencyTable {
  double tp = 0.0;
  double fp = 0.0;
  double fn = 0.0;
  std::optional<double> tn;

  bool valid() const noexcept;
  /// Throws DataError unless valid().
  void check() const;

  ContingencyTable& operator+=(const ContingencyTable& other);
  friend ContingencyTable operator+(ContingencyTable a, const ContingencyTable& b) { return a += b; }
  friend bool operator==(const ContingencyTable&, const ContingencyTable&) = default;
};

/// Parameters of the F-beta effectiveness function.
struct EffectivenessSpec {
  double beta = 1.0;
  void check() const;
};

enum class ErrorEvent : std::uint8_t { tp, fp, fn, tn };

/// Outcome of a binary decision against the truth.
constexpr ErrorEvent classify_event(int decision, bool truth) noexcept {
  if (decision > 0) return truth ? ErrorEvent::tp : ErrorEvent::fp;
  return truth ? ErrorEvent::fn : ErrorEvent::tn;
}

/// F-beta of a contingency table; 1 for the all-zero table (every document
/// correctly classified as negative).
double f_beta(const ContingencyTable& table, const EffectivenessSpec& spec = {});

/// 1 - f_beta.
double e_measure(const ContingencyTable& table, const EffectivenessSpec& spec = {});

/// Cell-wise sum.
ContingencyTable merge_tables(std::span<const ContingencyTable> tables);

/// True contingency tables per class (tn included) of `scores` decisions
/// against `truth`, in class order.
std::vector<ContingencyTable> true_tables(const ScoreMatrix& scores, const LabelSet& truth);

}  // namespace satc

template <class Tag>
struct std::hash<satc::Identifier<Tag>> {
  std::size_t operator()(const satc::Identifier<Tag>& id) const noexcept {
    return std::hash<std::string>{}(id.str());
  }
};
