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
#include "satc/bundle.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <fmt/core.h>
#include <json.hpp>

#include "satc/dataio.hpp"
#include "satc/error.hpp"
#include "satc/random.hpp"

namespace satc {

namespace fs = std::filesystem;

namespace {

constexpr const char* kManifest = "bundle.json";
constexpr const char* kTestScores = "test_scores.tsv";
constexpr const char* kTestLabels = "test_labels.tsv";
constexpr const char* kEstimates = "estimates.tsv";
constexpr const char* kCvScores = "cv_scores.tsv";
constexpr const char* kTrainLabels = "train_labels.tsv";

// A test matrix read from a file without records has no classes; such an
// empty bundle accepts any training classes.
void require_same_classes(const ScoreMatrix& test, const std::vector<ClassId>& other, const char* what) {
  if (test.num_docs() == 0) return;
  std::vector<ClassId> a = test.classes();
  std::vector<ClassId> b = other;
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  if (a != b) throw DataError(fmt::format("{} classes differ from the test classes", what));
}

std::string to_text(auto&& writer) {
  std::ostringstream ss;
  writer(ss);
  return ss.str();
}

}  // namespace

void DatasetBundle::check() const {
  if (counts.has_value() == cv.has_value()) {
    throw DataError("a bundle needs exactly one of training counts and CV scores");
  }
  if (gold) (void)gold->mask_for(test_scores);
  if (counts) {
    if (counts->train_size < 1) throw DataError("training counts need a positive train_size");
    std::vector<ClassId> classes;
    for (const auto& [cls, t] : counts->counts) {
      if (!t.valid()) throw DataError(fmt::format("invalid training counts for class '{}'", cls.str()));
      classes.push_back(cls);
    }
    require_same_classes(test_scores, classes, "training count");
  }
  if (cv) {
    (void)cv->labels.mask_for(cv->scores);
    require_same_classes(test_scores, cv->scores.classes(), "CV score");
  }
  if (sigma) CalibrationModel{*sigma}.check();
}

TrainingEstimates DatasetBundle::estimates() const {
  check();
  if (counts) {
    TrainingEstimates est;
    est.counts = counts->counts;
    est.train_size = counts->train_size;
    est.test_size = test_scores.num_docs();
    est.check();
    return est;
  }
  return derive_training_estimates(*cv, test_scores.num_docs());
}

ResolvedConfig resolve_config(const DatasetBundle& bundle, const MethodSpec& spec, std::optional<double> sigma,
                              const CalibrationGrid& grid) {
  ResolvedConfig out;
  std::optional<CalibrationModel> calibration;
  if (spec.method != Method::oracle2) {
    if (!sigma) sigma = bundle.sigma;
    if (sigma) {
      calibration = CalibrationModel{*sigma};
      calibration->check();
    } else if (bundle.cv) {
      calibration = spec.averaging == Averaging::macro ? calibrate_sigma_macro(*bundle.cv, grid)
                                                       : calibrate_sigma_micro(*bundle.cv, grid);
    } else {
      throw ConfigError("no sigma given and the bundle has no CV scores to fit one");
    }
    out.sigma_used = calibration->sigma;
  }
  const TrainingEstimates est = bundle.estimates();
  const LabelSet* gold = bundle.gold ? &*bundle.gold : nullptr;
  out.config = make_config(spec, calibration, &est, gold);
  return out;
}

DatasetBundle load_bundle(const fs::path& dir) {
  if (!fs::is_directory(dir)) throw DataError(fmt::format("bundle '{}' is not a directory", dir.string()));
  DatasetBundle b;
  b.name = dir.filename().string();
  nlohmann::json manifest = nlohmann::json::object();
  if (fs::exists(dir / kManifest)) {
    try {
      manifest = nlohmann::json::parse(io::read_file(dir / kManifest));
    } catch (const nlohmann::json::exception& e) {
      throw DataError(fmt::format("{}: {}", (dir / kManifest).string(), e.what()));
    }
    if (!manifest.is_object()) throw DataError(fmt::format("{}: expected an object", (dir / kManifest).string()));
  }
  try {
    if (manifest.contains("name")) b.name = manifest.at("name").get<std::string>();
    if (manifest.contains("sigma")) b.sigma = manifest.at("sigma").get<double>();
  } catch (const nlohmann::json::exception& e) {
    throw DataError(fmt::format("{}: {}", (dir / kManifest).string(), e.what()));
  }

  b.test_scores = io::load_scores(dir / kTestScores);
  if (fs::exists(dir / kTestLabels)) b.gold = io::load_labels(dir / kTestLabels);

  const bool has_counts = fs::exists(dir / kEstimates);
  const bool has_cv = fs::exists(dir / kCvScores) || fs::exists(dir / kTrainLabels);
  if (has_counts == has_cv) {
    throw DataError(fmt::format("bundle '{}' needs exactly one of {} and {} + {}", dir.string(), kEstimates,
                                kCvScores, kTrainLabels));
  }
  try {
    if (has_counts) {
      if (!manifest.contains("train_size")) {
        throw DataError(fmt::format("{}: train_size is required with {}", (dir / kManifest).string(), kEstimates));
      }
      DirectCounts c;
      c.train_size = manifest.at("train_size").get<std::size_t>();
      const std::string text = io::read_file(dir / kEstimates);
      std::istringstream in(text);
      c.counts = io::parse_training_counts(in, (dir / kEstimates).string());
      b.counts = std::move(c);
    } else {
      CvScores cv;
      cv.scores = io::load_scores(dir / kCvScores);
      cv.labels = io::load_labels(dir / kTrainLabels);
      if (manifest.contains("cv_folds")) cv.folds = manifest.at("cv_folds").get<int>();
      b.cv = std::move(cv);
    }
  } catch (const nlohmann::json::exception& e) {
    throw DataError(fmt::format("{}: {}", (dir / kManifest).string(), e.what()));
  }
  b.check();
  return b;
}

void save_bundle(const DatasetBundle& bundle, const fs::path& dir) {
  bundle.check();
  fs::create_directories(dir);
  nlohmann::json manifest = {{"name", bundle.name}};
  if (bundle.sigma) manifest["sigma"] = *bundle.sigma;
  if (bundle.counts) manifest["train_size"] = bundle.counts->train_size;
  if (bundle.cv) manifest["cv_folds"] = bundle.cv->folds;
  io::write_file(dir / kManifest, manifest.dump(2) + "\n");
  io::write_file(dir / kTestScores, to_text([&](std::ostream& o) { io::write_scores(o, bundle.test_scores); }));
  if (bundle.gold) {
    io::write_file(dir / kTestLabels, to_text([&](std::ostream& o) { io::write_labels(o, *bundle.gold); }));
  }
  if (bundle.counts) {
    TrainingEstimates est;
    est.counts = bundle.counts->counts;
    io::write_file(dir / kEstimates, to_text([&](std::ostream& o) { io::write_training_counts(o, est); }));
  } else {
    io::write_file(dir / kCvScores, to_text([&](std::ostream& o) { io::write_scores(o, bundle.cv->scores); }));
    io::write_file(dir / kTrainLabels, to_text([&](std::ostream& o) { io::write_labels(o, bundle.cv->labels); }));
  }
}

namespace {

struct Drawn {
  ScoreMatrix scores;
  LabelSet labels;
};

Drawn draw(const SyntheticSpec& spec, std::size_t docs, char prefix, Rng& rng,
           const std::vector<ClassId>& classes, const std::vector<double>& prevalence) {
  const int width = static_cast<int>(std::to_string(docs).size());
  std::vector<DocId> ids;
  ids.reserve(docs);
  for (std::size_t d = 0; d < docs; ++d) ids.emplace_back(fmt::format("{}{:0{}}", prefix, d + 1, width));
  Drawn out;
  std::vector<double> values(docs * classes.size());
  for (std::size_t d = 0; d < docs; ++d) {
    for (std::size_t c = 0; c < classes.size(); ++c) {
      // Drawing the decision before the truth keeps P(wrong | score) exactly
      // logistic whatever the class prior.
      const bool decision = rng.uniform() < prevalence[c];
      const double confidence = -spec.mean_confidence * std::log1p(-rng.uniform());
      const bool wrong = rng.uniform() < 1.0 / (1.0 + std::exp(spec.true_sigma * confidence));
      const bool positive = decision != wrong;
      values[d * classes.size() + c] = decision ? confidence : -confidence;
      if (positive) out.labels.add(ids[d], classes[c]);
    }
  }
  out.scores = ScoreMatrix(std::move(ids), classes, std::move(values));
  return out;
}

}  // namespace

DatasetBundle make_synthetic_bundle(const SyntheticSpec& spec) {
  if (spec.classes < 1) throw ConfigError("a synthetic bundle needs at least one class");
  if (!(spec.min_prevalence >= 0 && spec.min_prevalence <= spec.max_prevalence && spec.max_prevalence <= 1)) {
    throw ConfigError("synthetic prevalences must satisfy 0 <= min <= max <= 1");
  }
  if (!(spec.mean_confidence > 0) || !(spec.true_sigma > 0)) {
    throw ConfigError("synthetic mean_confidence and true_sigma must be positive");
  }
  Rng rng(spec.seed);
  const int width = static_cast<int>(std::to_string(spec.classes).size());
  std::vector<ClassId> classes;
  std::vector<double> prevalence;
  for (std::size_t c = 0; c < spec.classes; ++c) {
    classes.emplace_back(fmt::format("c{:0{}}", c + 1, width));
    const double t = spec.classes == 1 ? 0.5 : static_cast<double>(c) / static_cast<double>(spec.classes - 1);
    prevalence.push_back(spec.min_prevalence + t * (spec.max_prevalence - spec.min_prevalence));
  }
  DatasetBundle b;
  b.name = fmt::format("synthetic-{}", spec.seed);
  auto test = draw(spec, spec.test_docs, 't', rng, classes, prevalence);
  auto train = draw(spec, spec.train_docs, 'r', rng, classes, prevalence);
  b.test_scores = std::move(test.scores);
  b.gold = std::move(test.labels);
  b.cv = CvScores{std::move(train.scores), std::move(train.labels), 10};
  return b;
}

}  // namespace satc
