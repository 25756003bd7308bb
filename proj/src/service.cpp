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
#include "satc/service.hpp"

#include <atomic>
#include <fstream>
#include <random>
#include <regex>
#include <sstream>

#include <fmt/core.h>
#include <httplib.h>

#include "satc/dataio.hpp"
#include "satc/session.hpp"

namespace satc::service {

namespace fs = std::filesystem;

namespace {

std::string random_hex() {
  std::random_device rd;
  std::uint64_t hi = (std::uint64_t{rd()} << 32) ^ rd();
  std::uint64_t lo = (std::uint64_t{rd()} << 32) ^ rd();
  return fmt::format("{:016x}{:016x}", hi, lo);
}

bool valid_session_id(const std::string& id) {
  if (id.size() != 32) return false;
  return std::all_of(id.begin(), id.end(), [](char c) { return (c >= '0' && c <= '9') || (c >= 'a' && c <= 'f'); });
}

std::int64_t wall_ms() {
  return std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::system_clock::now().time_since_epoch())
      .count();
}

// Runs `body`, mapping library errors onto HTTP statuses.
template <class F>
Json guarded(F&& body) {
  try {
    return body();
  } catch (const ServiceError&) {
    throw;
  } catch (const ProtocolError& e) {
    throw ServiceError(409, e.what());
  } catch (const Error& e) {
    throw ServiceError(422, e.what());
  } catch (const Json::exception& e) {
    throw ServiceError(400, fmt::format("malformed request: {}", e.what()));
  }
}

template <class T>
T field(const Json& request, const char* name, T fallback) {
  if (!request.contains(name) || request.at(name).is_null()) return fallback;
  return request.at(name).get<T>();
}

// Normalized creation parameters; also the log header.
struct SessionParams {
  std::string bundle;
  MethodSpec spec;
  std::optional<double> sigma;

  Json to_json() const {
    Json j = {{"bundle", bundle},
              {"method", method_name(spec.method)},
              {"strategy", strategy_name(spec.strategy)},
              {"averaging", averaging_name(spec.averaging)},
              {"beta", spec.effectiveness.beta},
              {"sigma", nullptr}};
    if (sigma) j["sigma"] = *sigma;
    return j;
  }

  static SessionParams from_json(const Json& request) {
    if (!request.is_object()) throw ServiceError(400, "request body must be a JSON object");
    SessionParams p;
    if (!request.contains("bundle")) throw ServiceError(422, "missing field 'bundle'");
    p.bundle = request.at("bundle").get<std::string>();
    const auto method = field<std::string>(request, "method", "utheoretic");
    const auto strategy = field<std::string>(request, "strategy", "static");
    const auto averaging = field<std::string>(request, "averaging", "macro");
    auto m = parse_method(method);
    auto s = parse_strategy(strategy);
    auto a = parse_averaging(averaging);
    if (!m) throw ServiceError(422, fmt::format("unknown method '{}'", method));
    if (!s) throw ServiceError(422, fmt::format("unknown strategy '{}'", strategy));
    if (!a) throw ServiceError(422, fmt::format("unknown averaging '{}'", averaging));
    p.spec.method = *m;
    p.spec.strategy = *s;
    p.spec.averaging = *a;
    p.spec.effectiveness.beta = field<double>(request, "beta", 1.0);
    p.spec.effectiveness.check();
    if (request.contains("sigma") && !request.at("sigma").is_null()) p.sigma = request.at("sigma").get<double>();
    return p;
  }
};

}  // namespace

struct SessionEntry {
  std::string id;
  std::string token;
  fs::path log_path;
  SessionParams params;
  std::shared_ptr<const DatasetBundle> bundle;
  RankingConfig config;

  std::mutex write;  // serializes every mutation below
  std::unique_ptr<ValidationSession> session;
  bool closed = false;
  double initial_macro = 0.0;
  double initial_micro = 0.0;
  Json trajectory = Json::array();

  std::shared_ptr<const Json> snapshot;  // read with std::atomic_load
  std::atomic<Clock::rep> last_access{0};

  std::string status() const {
    if (closed) return "closed";
    return session->exhausted() ? "exhausted" : "active";
  }

  Json config_echo() const {
    Json j = params.to_json();
    j["gain_rule"] = gain_rule_name(config.gain_rule);
    return j;
  }

  void touch() { last_access.store(Clock::now().time_since_epoch().count()); }

  // Caller holds `write`.
  void publish() {
    Json m = {{"session_id", id},
              {"status", status()},
              {"num_docs", session->model().num_docs()},
              {"validated", session->validated_count()},
              {"remaining", session->remaining()},
              {"config", config_echo()},
              {"initial", {{"macro", initial_macro}, {"micro", initial_micro}}},
              {"estimated_f", {{"macro", session->estimated_f_macro()}, {"micro", session->estimated_f_micro()}}},
              {"trajectory", trajectory}};
    std::atomic_store(&snapshot, std::shared_ptr<const Json>(std::make_shared<Json>(std::move(m))));
  }

  // Applies one submission. Caller holds `write`; the session must have
  // `doc` pending. Returns the trajectory point.
  void apply(const DocId& doc, const std::vector<ClassId>& flipped, std::int64_t time_ms) {
    session->apply_correction(doc, flipped);
    Json names = Json::array();
    for (const auto& c : flipped) names.push_back(c.str());
    trajectory.push_back({{"n", session->validated_count()},
                          {"doc", doc.str()},
                          {"flipped", names},
                          {"macro", session->estimated_f_macro()},
                          {"micro", session->estimated_f_micro()},
                          {"time_ms", time_ms}});
  }

  void append_log(const Json& record) {
    std::ofstream out(log_path, std::ios::binary | std::ios::app);
    out << record.dump() << '\n';
    out.flush();
    if (!out) throw ServiceError(500, fmt::format("cannot append to session log '{}'", log_path.string()));
  }
};

namespace {

std::shared_ptr<SessionEntry> make_entry(std::string id, std::string token, SessionParams params,
                                         std::shared_ptr<const DatasetBundle> bundle, const fs::path& log_path) {
  auto entry = std::make_shared<SessionEntry>();
  entry->id = std::move(id);
  entry->token = std::move(token);
  entry->log_path = log_path;
  auto resolved = resolve_config(*bundle, params.spec, params.sigma);
  params.sigma = resolved.sigma_used;
  entry->params = std::move(params);
  entry->bundle = std::move(bundle);
  entry->config = std::move(resolved.config);
  entry->session = std::make_unique<ValidationSession>(entry->bundle->test_scores, entry->config);
  entry->initial_macro = entry->session->estimated_f_macro();
  entry->initial_micro = entry->session->estimated_f_micro();
  entry->touch();
  return entry;
}

std::vector<ClassId> parse_flipped(const Json& request) {
  std::vector<ClassId> flipped;
  if (!request.contains("flipped")) return flipped;
  const Json& list = request.at("flipped");
  if (!list.is_array()) throw ServiceError(400, "'flipped' must be an array of class ids");
  for (const auto& c : list) flipped.emplace_back(c.get<std::string>());
  return flipped;
}

void check_token(const SessionEntry& entry, const std::string& token) {
  if (token.empty()) throw ServiceError(401, fmt::format("missing {} header", kTokenHeader));
  if (token != entry.token) throw ServiceError(403, "session token does not match");
}

}  // namespace

SessionManager::SessionManager(ServiceOptions options) : options_(std::move(options)) {
  fs::create_directories(options_.data_dir);
}

SessionManager::~SessionManager() = default;

std::shared_ptr<const DatasetBundle> SessionManager::bundle(const std::string& name) {
  const fs::path rel(name);
  if (name.empty() || rel.is_absolute()) throw ServiceError(422, "bundle must be a relative name");
  for (const auto& part : rel) {
    if (part == "..") throw ServiceError(422, "bundle name must stay below the bundle root");
  }
  {
    std::lock_guard lock(mutex_);
    if (auto it = bundles_.find(name); it != bundles_.end()) return it->second;
  }
  const fs::path dir = options_.bundle_root / rel;
  if (!fs::is_directory(dir)) throw ServiceError(404, fmt::format("unknown bundle '{}'", name));
  auto loaded = std::make_shared<const DatasetBundle>(load_bundle(dir));
  std::lock_guard lock(mutex_);
  return bundles_.emplace(name, std::move(loaded)).first->second;
}

Json SessionManager::create(const Json& request) {
  return guarded([&] {
    SessionParams params = SessionParams::from_json(request);
    auto b = bundle(params.bundle);
    const std::string id = random_hex();
    auto entry = make_entry(id, random_hex(), std::move(params), std::move(b), options_.data_dir / (id + ".jsonl"));
    std::lock_guard write(entry->write);
    entry->append_log({{"type", "create"},
                       {"id", entry->id},
                       {"token", entry->token},
                       {"params", entry->params.to_json()},
                       {"time_ms", wall_ms()}});
    entry->publish();
    {
      std::lock_guard lock(mutex_);
      sessions_.emplace(entry->id, entry);
    }
    return Json{{"session_id", entry->id},
                {"token", entry->token},
                {"status", entry->status()},
                {"num_docs", entry->session->model().num_docs()},
                {"config", entry->config_echo()}};
  });
}

std::shared_ptr<SessionEntry> SessionManager::find(const std::string& id) {
  if (!valid_session_id(id)) throw ServiceError(404, fmt::format("unknown session '{}'", id));
  {
    std::lock_guard lock(mutex_);
    if (auto it = sessions_.find(id); it != sessions_.end()) {
      it->second->touch();
      return it->second;
    }
  }
  const fs::path log_path = options_.data_dir / (id + ".jsonl");
  if (!fs::exists(log_path)) throw ServiceError(404, fmt::format("unknown session '{}'", id));

  // Replay: the state is a fold over the log.
  std::ifstream in(log_path, std::ios::binary);
  std::string line;
  std::shared_ptr<SessionEntry> entry;
  try {
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      const Json record = Json::parse(line);
      const std::string type = record.at("type").get<std::string>();
      if (type == "create") {
        if (entry) throw DataError("duplicate create record");
        auto params = SessionParams::from_json(record.at("params"));
        auto b = bundle(params.bundle);
        entry = make_entry(id, record.at("token").get<std::string>(), std::move(params), std::move(b), log_path);
      } else if (!entry) {
        throw DataError("log does not start with a create record");
      } else if (type == "validate") {
        const auto served = entry->session->next();
        const DocId doc(record.at("doc").get<std::string>());
        if (!served || *served != doc) throw DataError(fmt::format("logged document '{}' out of order", doc.str()));
        entry->apply(doc, parse_flipped(record), record.at("time_ms").get<std::int64_t>());
      } else if (type == "close") {
        entry->closed = true;
      } else {
        throw DataError(fmt::format("unknown record type '{}'", type));
      }
    }
  } catch (const std::exception& e) {
    throw ServiceError(500, fmt::format("cannot replay session '{}': {}", id, e.what()));
  }
  if (!entry) throw ServiceError(500, fmt::format("session log '{}' is empty", log_path.string()));
  {
    std::lock_guard write(entry->write);
    entry->publish();
  }
  std::lock_guard lock(mutex_);
  return sessions_.emplace(id, entry).first->second;
}

Json SessionManager::next(const std::string& id, const std::string& token) {
  return guarded([&] {
    auto entry = find(id);
    check_token(*entry, token);
    std::lock_guard write(entry->write);
    if (entry->closed) throw ServiceError(409, fmt::format("session '{}' is closed", id));
    const auto doc = entry->session->next();
    Json out = {{"session_id", id},
                {"status", entry->status()},
                {"validated", entry->session->validated_count()},
                {"remaining", entry->session->remaining()}};
    if (!doc) {
      out["doc"] = nullptr;
      out["classes"] = Json::array();
      return out;
    }
    const auto& model = entry->session->model();
    const auto& scores = entry->bundle->test_scores;
    const std::size_t i = *model.doc_position(*doc);
    Json classes = Json::array();
    for (std::size_t j = 0; j < model.num_classes(); ++j) {
      const ClassId& cls = model.classes()[j];
      classes.push_back({{"class", cls.str()},
                         {"score", scores.score(*doc, cls)},
                         {"predicted", model.decision(i, j) > 0},
                         {"error_probability", model.error_probability(i, j)}});
    }
    out["doc"] = doc->str();
    out["classes"] = std::move(classes);
    return out;
  });
}

Json SessionManager::validate(const std::string& id, const std::string& token, const Json& request) {
  return guarded([&] {
    auto entry = find(id);
    check_token(*entry, token);
    if (!request.is_object() || !request.contains("doc")) throw ServiceError(400, "body needs a 'doc' field");
    const DocId doc(request.at("doc").get<std::string>());
    const auto flipped = parse_flipped(request);
    std::lock_guard write(entry->write);
    if (entry->closed) throw ServiceError(409, fmt::format("session '{}' is closed", id));
    const auto time_ms = wall_ms();
    entry->apply(doc, flipped, time_ms);
    Json logged = Json::array();
    for (const auto& c : entry->trajectory.back().at("flipped")) logged.push_back(c);
    entry->append_log({{"type", "validate"}, {"doc", doc.str()}, {"flipped", logged}, {"time_ms", time_ms}});
    entry->publish();
    return Json{{"session_id", id},
                {"status", entry->status()},
                {"validated", entry->session->validated_count()},
                {"remaining", entry->session->remaining()},
                {"estimated_f",
                 {{"macro", entry->session->estimated_f_macro()}, {"micro", entry->session->estimated_f_micro()}}}};
  });
}

Json SessionManager::metrics(const std::string& id) {
  return guarded([&] {
    auto entry = find(id);
    return *std::atomic_load(&entry->snapshot);
  });
}

Json SessionManager::close(const std::string& id, const std::string& token) {
  return guarded([&] {
    auto entry = find(id);
    check_token(*entry, token);
    std::lock_guard write(entry->write);
    if (entry->closed) throw ServiceError(409, fmt::format("session '{}' is already closed", id));
    entry->append_log({{"type", "close"}, {"time_ms", wall_ms()}});
    entry->closed = true;
    entry->publish();
    return Json{{"session_id", id}, {"status", entry->status()}};
  });
}

std::size_t SessionManager::evict_idle(Clock::time_point now) {
  std::lock_guard lock(mutex_);
  std::size_t dropped = 0;
  const auto limit = std::chrono::duration_cast<Clock::duration>(options_.ttl).count();
  for (auto it = sessions_.begin(); it != sessions_.end();) {
    // use_count 1: no request holds the entry, and none can obtain it
    // without this lock.
    const bool idle = now.time_since_epoch().count() - it->second->last_access.load() > limit;
    if (idle && it->second.use_count() == 1) {
      it = sessions_.erase(it);
      ++dropped;
    } else {
      ++it;
    }
  }
  return dropped;
}

std::size_t SessionManager::cached_sessions() const {
  std::lock_guard lock(mutex_);
  return sessions_.size();
}

namespace {

void reply(httplib::Response& res, int status, const Json& body) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

template <class F>
void handle(httplib::Response& res, int ok_status, F&& body) {
  try {
    reply(res, ok_status, body());
  } catch (const ServiceError& e) {
    reply(res, e.status(), Json{{"error", e.what()}, {"status", e.status()}});
  } catch (const std::exception& e) {
    reply(res, 500, Json{{"error", e.what()}, {"status", 500}});
  }
}

Json parse_body(const httplib::Request& req) {
  try {
    return req.body.empty() ? Json::object() : Json::parse(req.body);
  } catch (const Json::exception& e) {
    throw ServiceError(400, fmt::format("malformed JSON body: {}", e.what()));
  }
}

}  // namespace

Server::Server(SessionManager& manager) : manager_(manager), http_(std::make_unique<httplib::Server>()) {
  auto& m = manager_;
  const auto token = [](const httplib::Request& req) { return req.get_header_value(kTokenHeader); };

  http_->set_pre_routing_handler([&m](const httplib::Request&, httplib::Response&) {
    m.evict_idle();
    return httplib::Server::HandlerResponse::Unhandled;
  });
  http_->Post("/sessions", [&m](const httplib::Request& req, httplib::Response& res) {
    handle(res, 201, [&] { return m.create(parse_body(req)); });
  });
  http_->Get(R"(/sessions/([^/]+)/next)", [&m, token](const httplib::Request& req, httplib::Response& res) {
    handle(res, 200, [&] { return m.next(req.matches[1], token(req)); });
  });
  http_->Post(R"(/sessions/([^/]+)/validate)", [&m, token](const httplib::Request& req, httplib::Response& res) {
    handle(res, 200, [&] { return m.validate(req.matches[1], token(req), parse_body(req)); });
  });
  http_->Get(R"(/sessions/([^/]+)/metrics)", [&m](const httplib::Request& req, httplib::Response& res) {
    handle(res, 200, [&] { return m.metrics(req.matches[1]); });
  });
  http_->Delete(R"(/sessions/([^/]+))", [&m, token](const httplib::Request& req, httplib::Response& res) {
    handle(res, 200, [&] { return m.close(req.matches[1], token(req)); });
  });
}

Server::~Server() { stop(); }

int Server::bind(const std::string& host, int port) {
  if (port == 0) {
    const int bound = http_->bind_to_any_port(host);
    if (bound < 0) throw ConfigError(fmt::format("cannot bind {}", host));
    return bound;
  }
  if (!http_->bind_to_port(host, port)) throw ConfigError(fmt::format("cannot bind {}:{}", host, port));
  return port;
}

void Server::run() { http_->listen_after_bind(); }

void Server::stop() {
  if (http_) http_->stop();
}

}  // namespace satc::service
