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

// Text formats. Layouts are frozen in docs/formats.md; every writer is
// deterministic byte for byte.

#include <filesystem>
#include <map>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "satc/estimation.hpp"
#include "satc/model.hpp"
#include "satc/ranking.hpp"

namespace satc::io {

/// "doc\tclass\tscore" header, then one TAB-separated record per pair.
ScoreMatrix parse_scores(std::istream& in, const std::string& source = "<scores>");
ScoreMatrix load_scores(const std::filesystem::path& path);
void write_scores(std::ostream& out, const ScoreMatrix& scores);

/// Positive pairs "doc\tclass", one per line; an optional "doc\tclass"
/// header is skipped. Absent pairs are negative.
LabelSet parse_labels(std::istream& in, const std::string& source = "<labels>");
LabelSet load_labels(const std::filesystem::path& path);
void write_labels(std::ostream& out, const LabelSet& labels);

/// "class\ttp\tfp\tfn" header, then one record per class. Sizes are not part
/// of this file.
std::map<ClassId, ContingencyTable> parse_training_counts(std::istream& in,
                                                          const std::string& source = "<estimates>");
void write_training_counts(std::ostream& out, const TrainingEstimates& est);

/// "rank\tdoc\tutility" header, ranks from 1.
void write_ranking(std::ostream& out, std::span<const RankedDoc> ranking);
std::vector<RankedDoc> parse_ranking(std::istream& in, const std::string& source = "<ranking>");

/// "n,fraction,value" header; values[n] is the curve after n documents and
/// fraction is n / (values.size() - 1).
void write_curve(std::ostream& out, std::span<const double> values);
std::vector<double> parse_curve(std::istream& in, const std::string& source = "<curve>");

/// Shortest decimal text that reads back to the same double.
std::string format_double(double value);

/// Writes `content` to `path`, creating parent directories.
void write_file(const std::filesystem::path& path, const std::string& content);
std::string read_file(const std::filesystem::path& path);

}  // namespace satc::io
