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
#include "satc/dataio.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <unordered_map>

#include <fmt/format.h>

#include "satc/error.hpp"

namespace satc::io {

namespace {

// Reads lines, dropping one trailing CR. Blank lines are skipped.
class LineReader {
 public:
  LineReader(std::istream& in, std::string source) : in_(in), source_(std::move(source)) {}

  bool next(std::string& line) {
    while (std::getline(in_, line)) {
      ++number_;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (!line.empty()) return true;
    }
    return false;
  }
  std::size_t number() const noexcept { return number_; }
  // Errors before the first line (empty input) point at line 1.
  [[noreturn]] void fail(const std::string& what) const {
    throw ParseError(source_, number_ == 0 ? 1 : number_, what);
  }

 private:
  std::istream& in_;
  std::string source_;
  std::size_t number_ = 0;
};

std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t at = line.find(sep, start);
    if (at == std::string_view::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, at - start));
    start = at + 1;
  }
}

double parse_number(const LineReader& reader, std::string_view text, std::string_view what) {
  double value = 0.0;
  const char* first = text.data();
  const char* last = first + text.size();
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (text.empty() || ec != std::errc() || ptr != last) {
    reader.fail(fmt::format("{} '{}' is not a decimal number", what, text));
  }
  if (!std::isfinite(value)) reader.fail(fmt::format("{} '{}' is not finite", what, text));
  return value;
}

template <class Id>
Id parse_id(const LineReader& reader, std::string_view text, std::string_view what) {
  if (!Id::is_valid(text)) reader.fail(fmt::format("invalid {} id '{}'", what, text));
  return Id(std::string(text));
}

void expect_header(LineReader& reader, std::string& line, std::string_view header) {
  if (!reader.next(line)) reader.fail(fmt::format("missing header '{}'", header));
  if (line != header) reader.fail(fmt::format("expected header '{}'", header));
}

std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError(fmt::format("cannot open '{}'", path.string()));
  return in;
}

}  // namespace

std::string format_double(double value) { return fmt::format("{}", value); }

ScoreMatrix parse_scores(std::istream& in, const std::string& source) {
  LineReader reader(in, source);
  std::string line;
  expect_header(reader, line, "doc\tclass\tscore");
  std::vector<ScoreMatrix::Entry> entries;
  std::unordered_map<std::string, std::size_t> first_line;
  while (reader.next(line)) {
    const auto fields = split(line, '\t');
    if (fields.size() != 3) reader.fail(fmt::format("expected 3 TAB-separated fields, found {}", fields.size()));
    auto doc = parse_id<DocId>(reader, fields[0], "document");
    auto cls = parse_id<ClassId>(reader, fields[1], "class");
    const double score = parse_number(reader, fields[2], "score");
    const auto [it, inserted] = first_line.emplace(LabelSet::key(doc, cls), reader.number());
    if (!inserted) {
      reader.fail(fmt::format("duplicate pair ({}, {}), first seen on line {}", doc.str(), cls.str(),
                              it->second));
    }
    entries.push_back({std::move(doc), std::move(cls), score});
  }
  try {
    return ScoreMatrix::from_entries(entries);
  } catch (const DataError& e) {
    throw DataError(fmt::format("{}: {}", source, e.what()));
  }
}

ScoreMatrix load_scores(const std::filesystem::path& path) {
  auto in = open_input(path);
  return parse_scores(in, path.string());
}

void write_scores(std::ostream& out, const ScoreMatrix& scores) {
  fmt::memory_buffer buf;
  fmt::format_to(std::back_inserter(buf), "doc\tclass\tscore\n");
  for (std::size_t d = 0; d < scores.num_docs(); ++d) {
    for (std::size_t c = 0; c < scores.num_classes(); ++c) {
      fmt::format_to(std::back_inserter(buf), "{}\t{}\t{}\n", scores.docs()[d].str(),
                     scores.classes()[c].str(), scores.score(d, c));
    }
  }
  out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
}

LabelSet parse_labels(std::istream& in, const std::string& source) {
  LineReader reader(in, source);
  LabelSet labels;
  std::string line;
  bool first = true;
  while (reader.next(line)) {
    if (first && line == "doc\tclass") {
      first = false;
      continue;
    }
    first = false;
    const auto fields = split(line, '\t');
    if (fields.size() != 2) reader.fail(fmt::format("expected 2 TAB-separated fields, found {}", fields.size()));
    labels.add(parse_id<DocId>(reader, fields[0], "document"), parse_id<ClassId>(reader, fields[1], "class"));
  }
  return labels;
}

LabelSet load_labels(const std::filesystem::path& path) {
  auto in = open_input(path);
  return parse_labels(in, path.string());
}

void write_labels(std::ostream& out, const LabelSet& labels) {
  fmt::memory_buffer buf;
  fmt::format_to(std::back_inserter(buf), "doc\tclass\n");
  for (const auto& [doc, cls] : labels.sorted_pairs()) {
    fmt::format_to(std::back_inserter(buf), "{}\t{}\n", doc.str(), cls.str());
  }
  out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
}

std::map<ClassId, ContingencyTable> parse_training_counts(std::istream& in, const std::string& source) {
  LineReader reader(in, source);
  std::string line;
  expect_header(reader, line, "class\ttp\tfp\tfn");
  std::map<ClassId, ContingencyTable> counts;
  while (reader.next(line)) {
    const auto fields = split(line, '\t');
    if (fields.size() != 4) reader.fail(fmt::format("expected 4 TAB-separated fields, found {}", fields.size()));
    auto cls = parse_id<ClassId>(reader, fields[0], "class");
    ContingencyTable t;
    t.tp = parse_number(reader, fields[1], "tp");
    t.fp = parse_number(reader, fields[2], "fp");
    t.fn = parse_number(reader, fields[3], "fn");
    if (t.tp < 0 || t.fp < 0 || t.fn < 0) reader.fail("counts must be non-negative");
    if (!counts.emplace(cls, t).second) reader.fail(fmt::format("duplicate class '{}'", cls.str()));
  }
  return counts;
}

void write_training_counts(std::ostream& out, const TrainingEstimates& est) {
  fmt::memory_buffer buf;
  fmt::format_to(std::back_inserter(buf), "class\ttp\tfp\tfn\n");
  for (const auto& [cls, t] : est.counts) {
    fmt::format_to(std::back_inserter(buf), "{}\t{}\t{}\t{}\n", cls.str(), t.tp, t.fp, t.fn);
  }
  out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
}

void write_ranking(std::ostream& out, std::span<const RankedDoc> ranking) {
  fmt::memory_buffer buf;
  fmt::format_to(std::back_inserter(buf), "rank\tdoc\tutility\n");
  for (std::size_t i = 0; i < ranking.size(); ++i) {
    fmt::format_to(std::back_inserter(buf), "{}\t{}\t{}\n", i + 1, ranking[i].doc.str(), ranking[i].utility);
  }
  out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
}

std::vector<RankedDoc> parse_ranking(std::istream& in, const std::string& source) {
  LineReader reader(in, source);
  std::string line;
  expect_header(reader, line, "rank\tdoc\tutility");
  std::vector<RankedDoc> out;
  while (reader.next(line)) {
    const auto fields = split(line, '\t');
    if (fields.size() != 3) reader.fail(fmt::format("expected 3 TAB-separated fields, found {}", fields.size()));
    if (fields[0] != std::to_string(out.size() + 1)) reader.fail(fmt::format("expected rank {}", out.size() + 1));
    out.push_back({parse_id<DocId>(reader, fields[1], "document"), parse_number(reader, fields[2], "utility")});
  }
  return out;
}

void write_curve(std::ostream& out, std::span<const double> values) {
  fmt::memory_buffer buf;
  fmt::format_to(std::back_inserter(buf), "n,fraction,value\n");
  const std::size_t total = values.empty() ? 0 : values.size() - 1;
  for (std::size_t n = 0; n < values.size(); ++n) {
    const double fraction = total == 0 ? 0.0 : static_cast<double>(n) / static_cast<double>(total);
    fmt::format_to(std::back_inserter(buf), "{},{},{}\n", n, fraction, values[n]);
  }
  out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
}

std::vector<double> parse_curve(std::istream& in, const std::string& source) {
  LineReader reader(in, source);
  std::string line;
  expect_header(reader, line, "n,fraction,value");
  std::vector<double> values;
  while (reader.next(line)) {
    const auto fields = split(line, ',');
    if (fields.size() != 3) reader.fail(fmt::format("expected 3 comma-separated fields, found {}", fields.size()));
    if (fields[0] != std::to_string(values.size())) reader.fail(fmt::format("expected n = {}", values.size()));
    values.push_back(parse_number(reader, fields[2], "value"));
  }
  return values;
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError(fmt::format("cannot write '{}'", path.string()));
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw DataError(fmt::format("failed writing '{}'", path.string()));
}

std::string read_file(const std::filesystem::path& path) {
  auto in = open_input(path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace satc::io
