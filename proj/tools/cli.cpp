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
#include "cli.hpp"

#include <csignal>
#include <cstdlib>
#include <filesystem>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <pthread.h>

#include <CLI11.hpp>
#include <fmt/core.h>
#include <json.hpp>

#include "satc/bundle.hpp"
#include "satc/dataio.hpp"
#include "satc/error.hpp"
#include "satc/evaluation.hpp"
#include "satc/service.hpp"
#include "satc/simulation.hpp"

namespace satc::cli {

namespace {

namespace fs = std::filesystem;
using Json = nlohmann::json;

struct Options {
  std::string bundle;
  double beta = 1.0;
  std::string averaging = "macro";
  std::string method = "utheoretic";
  std::string strategy = "static";
  std::vector<double> xis;
  std::uint64_t seed = 1;
  std::string grid = "100:0.001:1000";
  std::string out;
  std::optional<double> sigma;
  std::size_t parts = 2;
  std::size_t trials = 1000;
  std::size_t annotators = 1;

  // serve
  std::string listen = "127.0.0.1:8080";
  std::string data_dir = "sessions";
  std::string bundle_root = ".";
  long ttl = 3600;

  // synth
  SyntheticSpec synth;
};

const std::vector<double> kDefaultXis = {0.05, 0.10, 0.20};

const char* env_or(const char* name, const char* fallback) {
  const char* v = std::getenv(name);
  return v != nullptr && *v != '\0' ? v : fallback;
}

Averaging averaging_of(const Options& o) {
  auto a = parse_averaging(o.averaging);
  if (!a) throw ConfigError(fmt::format("unknown averaging '{}'", o.averaging));
  return *a;
}

MethodSpec spec_of(const Options& o) {
  MethodSpec spec;
  auto m = parse_method(o.method);
  auto s = parse_strategy(o.strategy);
  if (!m) throw ConfigError(fmt::format("unknown method '{}'", o.method));
  if (!s) throw ConfigError(fmt::format("unknown strategy '{}'", o.strategy));
  spec.method = *m;
  spec.strategy = *s;
  spec.averaging = averaging_of(o);
  spec.effectiveness.beta = o.beta;
  spec.effectiveness.check();
  return spec;
}

CalibrationGrid grid_of(const Options& o) {
  std::istringstream in(o.grid);
  std::string count, lo, hi;
  if (!std::getline(in, count, ':') || !std::getline(in, lo, ':') || !std::getline(in, hi) ) {
    throw ConfigError(fmt::format("--grid expects COUNT:LO:HI, got '{}'", o.grid));
  }
  try {
    return CalibrationGrid::log_spaced(std::stoul(count), std::stod(lo), std::stod(hi));
  } catch (const std::logic_error&) {
    throw ConfigError(fmt::format("--grid expects COUNT:LO:HI, got '{}'", o.grid));
  }
}

std::vector<double> xis_of(const Options& o) { return o.xis.empty() ? kDefaultXis : o.xis; }

fs::path out_dir(const Options& o) { return o.out.empty() ? fs::path(env_or(kOutDirEnv, ".")) : fs::path(o.out); }

DatasetBundle require_bundle(const Options& o) {
  if (o.bundle.empty()) throw ConfigError("--bundle is required");
  return load_bundle(o.bundle);
}

const LabelSet& require_gold(const DatasetBundle& b) {
  if (!b.gold) throw ConfigError(fmt::format("bundle '{}' has no gold test labels", b.name));
  return *b.gold;
}

Json config_json(const Options& o, const DatasetBundle& b, const std::string& command,
                 const std::optional<ResolvedConfig>& resolved) {
  Json c = {{"command", command},
            {"bundle", b.name},
            {"averaging", o.averaging},
            {"beta", o.beta},
            {"xi", xis_of(o)},
            {"seed", o.seed},
            {"sigma", nullptr}};
  if (resolved) {
    c["method"] = o.method;
    c["strategy"] = o.strategy;
    c["gain_rule"] = gain_rule_name(resolved->config.gain_rule);
    if (resolved->sigma_used) c["sigma"] = *resolved->sigma_used;
  }
  return c;
}

Json ener_json(std::span<const EnerValue> values) {
  Json arr = Json::array();
  for (const auto& v : values) arr.push_back({{"xi", v.xi}, {"p", v.p}, {"value", v.value}});
  return arr;
}

std::string curve_text(std::span<const double> values) {
  std::ostringstream ss;
  io::write_curve(ss, values);
  return ss.str();
}

void emit(std::ostream& out, const fs::path& path, const std::string& content) {
  io::write_file(path, content);
  out << path.string() << '\n';
}

std::string run_tag(const Options& o) { return fmt::format("{}_{}_{}", o.method, o.strategy, o.averaging); }

int cmd_calibrate(const Options& o, std::ostream& out) {
  const auto b = require_bundle(o);
  if (!b.cv) throw DataError(fmt::format("bundle '{}' has no CV scores to calibrate on", b.name));
  const auto grid = grid_of(o);
  const auto averaging = averaging_of(o);
  const auto model =
      averaging == Averaging::macro ? calibrate_sigma_macro(*b.cv, grid) : calibrate_sigma_micro(*b.cv, grid);
  const auto pos = positive_counts(*b.cv);
  const auto exp = expected_positives(*b.cv, model.sigma);
  const double residual = averaging == Averaging::macro ? macro_residual(pos, exp) : micro_residual(pos, exp);
  const Json j = {{"bundle", b.name},
                  {"averaging", o.averaging},
                  {"sigma", model.sigma},
                  {"residual", residual},
                  {"grid", {{"count", grid.candidates.size()}, {"lo", grid.candidates.front()}, {"hi", grid.candidates.back()}}}};
  out << j.dump(2) << '\n';
  return kExitOk;
}

int cmd_rank(const Options& o, std::ostream& out) {
  const auto b = require_bundle(o);
  const auto resolved = resolve_config(b, spec_of(o), o.sigma, grid_of(o));
  if (resolved.config.strategy != Strategy::static_ranking) {
    throw ConfigError("rank emits static rankings only; use simulate or serve for dynamic ones");
  }
  if (o.annotators < 1) throw ConfigError("--annotators must be at least 1");
  const auto ranking = rank_static(b.test_scores, resolved.config);
  const fs::path dir = out_dir(o);
  if (o.annotators == 1) {
    std::ostringstream ss;
    io::write_ranking(ss, ranking);
    emit(out, dir / "ranking.tsv", ss.str());
    return kExitOk;
  }
  const auto parts = round_robin_split(ranking, o.annotators);
  for (std::size_t i = 0; i < parts.size(); ++i) {
    std::ostringstream ss;
    io::write_ranking(ss, parts[i]);
    emit(out, dir / fmt::format("ranking.part-{}.tsv", i + 1), ss.str());
  }
  return kExitOk;
}

int cmd_simulate(const Options& o, std::ostream& out) {
  const auto b = require_bundle(o);
  const auto& gold = require_gold(b);
  const auto resolved = resolve_config(b, spec_of(o), o.sigma, grid_of(o));
  const auto xis = xis_of(o);
  const auto run = simulate(b.test_scores, gold, resolved.config, xis);
  const auto& report = averaging_of(o) == Averaging::macro ? run.macro : run.micro;

  const fs::path dir = out_dir(o);
  const std::string tag = run_tag(o);
  const std::string er_file = fmt::format("er_{}.csv", tag);
  const std::string ner_file = fmt::format("ner_{}.csv", tag);
  Json excluded = Json::array();
  for (const auto& c : report.excluded) excluded.push_back(c.str());
  const Json j = {{"config", config_json(o, b, "simulate", resolved)},
                  {"num_docs", b.test_scores.num_docs()},
                  {"num_classes", b.test_scores.num_classes()},
                  {"result",
                   {{"ener", ener_json(report.ener)},
                    {"excluded_classes", excluded},
                    {"initial_error", report.error.front()},
                    {"curves", {{"er", er_file}, {"ner", ner_file}}}}}};
  emit(out, dir / er_file, curve_text(report.er));
  emit(out, dir / ner_file, curve_text(report.ner));
  emit(out, dir / fmt::format("report_{}.json", tag), j.dump(2) + "\n");
  return kExitOk;
}

int cmd_random_baseline(const Options& o, std::ostream& out) {
  const auto b = require_bundle(o);
  const auto& gold = require_gold(b);
  const auto averaging = averaging_of(o);
  EffectivenessSpec eff{o.beta};
  eff.check();
  if (o.trials < 1) throw ConfigError("--trials must be at least 1");
  const auto xis = xis_of(o);
  const auto mc = monte_carlo_random_ener(b.test_scores, gold, o.trials, o.seed, averaging, eff, xis);

  const fs::path dir = out_dir(o);
  const std::string tag = fmt::format("random_{}", o.averaging);
  const std::string er_file = fmt::format("er_{}.csv", tag);
  const std::string ner_file = fmt::format("ner_{}.csv", tag);
  Json config = config_json(o, b, "random-baseline", std::nullopt);
  config["trials"] = o.trials;
  const Json j = {{"config", config},
                  {"num_docs", b.test_scores.num_docs()},
                  {"num_classes", b.test_scores.num_classes()},
                  {"result", {{"ener", ener_json(mc.ener)}, {"curves", {{"er", er_file}, {"ner", ner_file}}}}}};
  emit(out, dir / er_file, curve_text(mc.mean_er));
  emit(out, dir / ner_file, curve_text(mc.mean_ner));
  emit(out, dir / fmt::format("report_{}.json", tag), j.dump(2) + "\n");
  return kExitOk;
}

int cmd_split_simulate(const Options& o, std::ostream& out) {
  const auto b = require_bundle(o);
  const auto& gold = require_gold(b);
  const auto resolved = resolve_config(b, spec_of(o), o.sigma, grid_of(o));
  const auto xis = xis_of(o);
  const auto split = split_simulate(b.test_scores, gold, resolved.config, xis, o.parts, o.seed);
  const auto& report = averaging_of(o) == Averaging::macro ? split.macro : split.micro;

  const fs::path dir = out_dir(o);
  const std::string tag = fmt::format("split_{}", run_tag(o));
  const std::string er_file = fmt::format("er_{}.csv", tag);
  const std::string ner_file = fmt::format("ner_{}.csv", tag);
  Json config = config_json(o, b, "split-simulate", resolved);
  config["parts"] = o.parts;
  Json sizes = Json::array();
  for (const auto& p : split.parts) sizes.push_back(p.size());
  const Json j = {{"config", config},
                  {"num_docs", b.test_scores.num_docs()},
                  {"num_classes", b.test_scores.num_classes()},
                  {"part_sizes", sizes},
                  {"result", {{"ener", ener_json(report.ener)}, {"curves", {{"er", er_file}, {"ner", ner_file}}}}}};
  emit(out, dir / er_file, curve_text(report.er));
  emit(out, dir / ner_file, curve_text(report.ner));
  emit(out, dir / fmt::format("report_{}.json", tag), j.dump(2) + "\n");
  return kExitOk;
}

int cmd_synth(const Options& o, std::ostream& out) {
  SyntheticSpec spec = o.synth;
  spec.seed = o.seed;
  const auto bundle = make_synthetic_bundle(spec);
  const fs::path dir = out_dir(o);
  save_bundle(bundle, dir);
  out << dir.string() << '\n';
  return kExitOk;
}

int cmd_serve(const Options& o, std::ostream& out) {
  const auto colon = o.listen.rfind(':');
  if (colon == std::string::npos) throw ConfigError(fmt::format("--listen expects HOST:PORT, got '{}'", o.listen));
  const std::string host = o.listen.substr(0, colon);
  int port = 0;
  try {
    port = std::stoi(o.listen.substr(colon + 1));
  } catch (const std::logic_error&) {
    throw ConfigError(fmt::format("--listen expects HOST:PORT, got '{}'", o.listen));
  }
  if (o.ttl < 1) throw ConfigError("--ttl must be positive");

  service::ServiceOptions options;
  options.data_dir = o.data_dir;
  options.bundle_root = o.bundle_root;
  options.ttl = std::chrono::seconds(o.ttl);
  service::SessionManager manager(options);
  service::Server server(manager);
  const int bound = server.bind(host, port);

  // SIGINT / SIGTERM stop the server from a dedicated thread.
  sigset_t signals;
  sigemptyset(&signals);
  sigaddset(&signals, SIGINT);
  sigaddset(&signals, SIGTERM);
  pthread_sigmask(SIG_BLOCK, &signals, nullptr);
  std::thread waiter([&] {
    int sig = 0;
    sigwait(&signals, &sig);
    server.stop();
  });
  out << fmt::format("listening on {}:{}", host, bound) << std::endl;
  server.run();
  pthread_kill(waiter.native_handle(), SIGTERM);
  waiter.join();
  return kExitOk;
}

void add_common(CLI::App* cmd, Options& o) {
  cmd->add_option("--bundle", o.bundle, "Dataset bundle directory");
  cmd->add_option("--beta", o.beta, "F-measure beta")->capture_default_str();
  cmd->add_option("--averaging", o.averaging, "macro or micro")
      ->check(CLI::IsMember({"macro", "micro"}))
      ->capture_default_str();
  cmd->add_option("--xi", o.xis, "Expected validated fraction (repeatable; default 0.05 0.10 0.20)")
      ->allow_extra_args(false);
  cmd->add_option("--seed", o.seed, "Seed for all randomness")->capture_default_str();
  cmd->add_option("--grid", o.grid, "Calibration grid COUNT:LO:HI, log-spaced")->capture_default_str();
  cmd->add_option("--out", o.out, fmt::format("Output directory (default ${} or .)", kOutDirEnv));
  cmd->add_option("--sigma", o.sigma, "Fixed calibration growth rate");
}

void add_method(CLI::App* cmd, Options& o) {
  cmd->add_option("--method", o.method, "baseline, utheoretic, oracle1 or oracle2")
      ->check(CLI::IsMember({"baseline", "utheoretic", "oracle1", "oracle2"}))
      ->capture_default_str();
  cmd->add_option("--strategy", o.strategy, "static or dynamic")
      ->check(CLI::IsMember({"static", "dynamic"}))
      ->capture_default_str();
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  Options o;
  o.data_dir = env_or("SATC_DATA_DIR", "sessions");
  o.bundle_root = env_or("SATC_BUNDLE_ROOT", ".");
  o.listen = env_or("SATC_LISTEN", "127.0.0.1:8080");
  o.ttl = std::strtol(env_or("SATC_SESSION_TTL", "3600"), nullptr, 10);

  CLI::App app("Utility-ordered validation of automatically classified documents", "satc");
  app.require_subcommand(1);
  app.set_version_flag("--version", "satc 0.1.0");

  auto* calibrate = app.add_subcommand("calibrate", "Fit the calibration growth rate on CV scores");
  add_common(calibrate, o);
  auto* rank = app.add_subcommand("rank", "Write a static ranking of the test documents");
  add_common(rank, o);
  add_method(rank, o);
  rank->add_option("--annotators", o.annotators, "Split the ranking round-robin into this many files")
      ->capture_default_str();
  auto* sim = app.add_subcommand("simulate", "Replay the gold labels and write curves and a report");
  add_common(sim, o);
  add_method(sim, o);
  auto* random = app.add_subcommand("random-baseline", "Monte Carlo estimate of the random ranker");
  add_common(random, o);
  random->add_option("--trials", o.trials, "Number of random permutations")->capture_default_str();
  auto* split = app.add_subcommand("split-simulate", "Simulate on random parts of the test set");
  add_common(split, o);
  add_method(split, o);
  split->add_option("--parts", o.parts, "Number of parts")->capture_default_str();
  auto* serve = app.add_subcommand("serve", "Run the validation session service");
  serve->add_option("--listen", o.listen, "HOST:PORT (env SATC_LISTEN)")->capture_default_str();
  serve->add_option("--data-dir", o.data_dir, "Session log directory (env SATC_DATA_DIR)")->capture_default_str();
  serve->add_option("--bundle-root", o.bundle_root, "Directory holding bundles (env SATC_BUNDLE_ROOT)")
      ->capture_default_str();
  serve->add_option("--ttl", o.ttl, "Idle seconds before a session leaves memory (env SATC_SESSION_TTL)")
      ->capture_default_str();
  auto* synth = app.add_subcommand("synth", "Write a synthetic dataset bundle");
  synth->add_option("--out", o.out, "Bundle directory");
  synth->add_option("--seed", o.seed, "Seed")->capture_default_str();
  synth->add_option("--docs", o.synth.test_docs, "Test documents")->capture_default_str();
  synth->add_option("--train-docs", o.synth.train_docs, "Training documents")->capture_default_str();
  synth->add_option("--classes", o.synth.classes, "Classes")->capture_default_str();
  synth->add_option("--true-sigma", o.synth.true_sigma, "Growth rate used to draw errors")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::CallForVersion&) {
    out << app.version() << '\n';
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "satc: " << e.what() << "; run 'satc --help' for usage\n";
    return kExitUsage;
  }

  try {
    if (calibrate->parsed()) return cmd_calibrate(o, out);
    if (rank->parsed()) return cmd_rank(o, out);
    if (sim->parsed()) return cmd_simulate(o, out);
    if (random->parsed()) return cmd_random_baseline(o, out);
    if (split->parsed()) return cmd_split_simulate(o, out);
    if (serve->parsed()) return cmd_serve(o, out);
    if (synth->parsed()) return cmd_synth(o, out);
  } catch (const ConfigError& e) {
    err << "satc: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "satc: " << e.what() << '\n';
    return kExitData;
  }
  return kExitUsage;
}

}  // namespace satc::cli
