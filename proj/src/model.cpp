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
#include "satc/model.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/core.h>

#include "satc/error.hpp"

namespace satc {

template <class Tag>
Identifier<Tag>::Identifier(std::string value) : value_(std::move(value)) {
  if (!is_valid(value_)) {
    throw DataError(fmt::format("invalid identifier '{}'", value_));
  }
}

template <class Tag>
bool Identifier<Tag>::is_valid(std::string_view value) noexcept {
  return !value.empty() && value.find_first_of("\t\r\n") == std::string_view::npos;
}

template class Identifier<DocTag>;
template class Identifier<ClassTag>;

// ---------------------------------------------------------------------------
// ScoreMatrix

ScoreMatrix::ScoreMatrix(std::vector<DocId> docs, std::vector<ClassId> classes,
                         std::vector<double> scores)
    : docs_(std::move(docs)), classes_(std::move(classes)), scores_(std::move(scores)) {
  if (scores_.size() != docs_.size() * classes_.size()) {
    throw DataError(fmt::format("score matrix has {} values for {} docs x {} classes",
                                scores_.size(), docs_.size(), classes_.size()));
  }
  for (double s : scores_) {
    if (!std::isfinite(s)) throw DataError("non-finite score");
  }
  build_index();
}

void ScoreMatrix::build_index() {
  doc_pos_.clear();
  class_pos_.clear();
  doc_pos_.reserve(docs_.size());
  for (std::size_t i = 0; i < docs_.size(); ++i) {
    if (!doc_pos_.emplace(docs_[i].str(), i).second) {
      throw DataError(fmt::format("duplicate document '{}'", docs_[i].str()));
    }
  }
  for (std::size_t j = 0; j < classes_.size(); ++j) {
    if (!class_pos_.emplace(classes_[j].str(), j).second) {
      throw DataError(fmt::format("duplicate class '{}'", classes_[j].str()));
    }
  }
}

ScoreMatrix ScoreMatrix::from_entries(std::span<const Entry> entries) {
  std::vector<DocId> docs;
  std::vector<ClassId> classes;
  std::unordered_map<std::string, std::size_t> dpos, cpos;
  for (const auto& e : entries) {
    if (dpos.emplace(e.doc.str(), docs.size()).second) docs.push_back(e.doc);
    if (cpos.emplace(e.cls.str(), classes.size()).second) classes.push_back(e.cls);
  }
  const std::size_t nc = classes.size();
  std::vector<double> scores(docs.size() * nc, 0.0);
  std::vector<std::uint8_t> seen(scores.size(), 0);
  for (const auto& e : entries) {
    if (!std::isfinite(e.score)) {
      throw DataError(fmt::format("non-finite score for ({}, {})", e.doc.str(), e.cls.str()));
    }
    const std::size_t at = dpos[e.doc.str()] * nc + cpos[e.cls.str()];
    if (seen[at]) {
      throw DataError(fmt::format("duplicate score for ({}, {})", e.doc.str(), e.cls.str()));
    }
    seen[at] = 1;
    scores[at] = e.score;
  }
  for (std::size_t at = 0; at < seen.size(); ++at) {
    if (!seen[at]) {
      throw DataError(fmt::format("missing score for ({}, {})", docs[at / nc].str(),
                                  classes[at % nc].str()));
    }
  }
  return ScoreMatrix(std::move(docs), std::move(classes), std::move(scores));
}

double ScoreMatrix::score(const DocId& doc, const ClassId& cls) const {
  return score(require_doc(doc), require_class(cls));
}

double ScoreMatrix::confidence(std::size_t doc, std::size_t cls) const {
  return std::fabs(score(doc, cls));
}

std::optional<std::size_t> ScoreMatrix::doc_index(const DocId& doc) const {
  auto it = doc_pos_.find(doc.str());
  if (it == doc_pos_.end()) return std::nullopt;
  return it->second;
}

std::optional<std::size_t> ScoreMatrix::class_index(const ClassId& cls) const {
  auto it = class_pos_.find(cls.str());
  if (it == class_pos_.end()) return std::nullopt;
  return it->second;
}

std::size_t ScoreMatrix::require_doc(const DocId& doc) const {
  if (auto i = doc_index(doc)) return *i;
  throw LookupError(fmt::format("unknown document '{}'", doc.str()));
}

std::size_t ScoreMatrix::require_class(const ClassId& cls) const {
  if (auto j = class_index(cls)) return *j;
  throw LookupError(fmt::format("unknown class '{}'", cls.str()));
}

ScoreMatrix ScoreMatrix::select_docs(std::span<const std::size_t> rows) const {
  const std::size_t nc = num_classes();
  std::vector<DocId> docs;
  std::vector<double> scores;
  docs.reserve(rows.size());
  scores.reserve(rows.size() * nc);
  for (std::size_t r : rows) {
    docs.push_back(docs_.at(r));
    scores.insert(scores.end(), scores_.begin() + r * nc, scores_.begin() + (r + 1) * nc);
  }
  return ScoreMatrix(std::move(docs), classes_, std::move(scores));
}

// ---------------------------------------------------------------------------
// LabelSet

std::string LabelSet::key(const DocId& doc, const ClassId& cls) {
  std::string k;
  k.reserve(doc.str().size() + cls.str().size() + 1);
  k += doc.str();
  k += '\t';
  k += cls.str();
  return k;
}

void LabelSet::add(const DocId& doc, const ClassId& cls) { pairs_.insert(key(doc, cls)); }

bool LabelSet::contains(const DocId& doc, const ClassId& cls) const {
  return pairs_.count(key(doc, cls)) != 0;
}

std::vector<std::pair<DocId, ClassId>> LabelSet::sorted_pairs() const {
  std::vector<std::pair<DocId, ClassId>> out;
  out.reserve(pairs_.size());
  for (const auto& k : pairs_) {
    const auto tab = k.find('\t');
    out.emplace_back(DocId(k.substr(0, tab)), ClassId(k.substr(tab + 1)));
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<std::uint8_t> LabelSet::mask_for(const ScoreMatrix& scores) const {
  const std::size_t nc = scores.num_classes();
  std::vector<std::uint8_t> mask(scores.num_docs() * nc, 0);
  for (const auto& k : pairs_) {
    const auto tab = k.find('\t');
    const auto d = scores.doc_index(DocId(k.substr(0, tab)));
    const auto c = scores.class_index(ClassId(k.substr(tab + 1)));
    if (!d || !c) {
      throw DataError(fmt::format("label ({}, {}) outside the scored universe",
                                  k.substr(0, tab), k.substr(tab + 1)));
    }
    mask[*d * nc + *c] = 1;
  }
  return mask;
}

LabelSet LabelSet::restricted_to(std::span<const DocId> docs) const {
  std::unordered_set<std::string> keep;
  for (const auto& d : docs) keep.insert(d.str());
  LabelSet out;
  for (const auto& k : pairs_) {
    if (keep.count(k.substr(0, k.find('\t')))) out.pairs_.insert(k);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Contingency tables and effectiveness

bool ContingencyTable::valid() const noexcept {
  auto ok = [](double v) { return std::isfinite(v) && v >= 0.0; };
  return ok(tp) && ok(fp) && ok(fn) && (!tn || ok(*tn));
}

void ContingencyTable::check() const {
  if (!valid()) {
    throw DataError(fmt::format("invalid contingency table (tp={}, fp={}, fn={})", tp, fp, fn));
  }
}

ContingencyTable& ContingencyTable::operator+=(const ContingencyTable& other) {
  tp += other.tp;
  fp += other.fp;
  fn += other.fn;
  if (tn && other.tn) {
    *tn += *other.tn;
  } else {
    tn.reset();
  }
  return *this;
}

void EffectivenessSpec::check() const {
  if (!(beta > 0.0) || !std::isfinite(beta)) {
    throw ConfigError(fmt::format("beta must be positive, got {}", beta));
  }
}

double f_beta(const ContingencyTable& t, const EffectivenessSpec& spec) {
  if (t.tp == 0.0 && t.fp == 0.0 && t.fn == 0.0) return 1.0;
  const double b2 = spec.beta * spec.beta;
  const double num = (1.0 + b2) * t.tp;
  return num / (num + t.fp + b2 * t.fn);
}

double e_measure(const ContingencyTable& table, const EffectivenessSpec& spec) {
  return 1.0 - f_beta(table, spec);
}

ContingencyTable merge_tables(std::span<const ContingencyTable> tables) {
  ContingencyTable out;
  out.tn = 0.0;
  for (const auto& t : tables) out += t;
  return out;
}

std::vector<ContingencyTable> true_tables(const ScoreMatrix& scores, const LabelSet& truth) {
  const auto mask = truth.mask_for(scores);
  const std::size_t nc = scores.num_classes();
  std::vector<ContingencyTable> tables(nc, ContingencyTable{0, 0, 0, 0.0});
  for (std::size_t d = 0; d < scores.num_docs(); ++d) {
    for (std::size_t c = 0; c < nc; ++c) {
      auto& t = tables[c];
      switch (classify_event(scores.decision(d, c), mask[d * nc + c] != 0)) {
        case ErrorEvent::tp: t.tp += 1; break;
        case ErrorEvent::fp: t.fp += 1; break;
        case ErrorEvent::fn: t.fn += 1; break;
        case ErrorEvent::tn: *t.tn += 1; break;
      }
    }
  }
  return tables;
}

}  // namespace satc
