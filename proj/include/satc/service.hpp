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

// Validation sessions over HTTP. Payloads are frozen in docs/api.md.

#include <chrono>
#include <filesystem>
#include <memory>
#include <mutex>
#include <string>
#include <unordered_map>

#include <json.hpp>

#include "satc/bundle.hpp"
#include "satc/error.hpp"

namespace httplib {
class Server;
}

namespace satc::service {

using Json = nlohmann::json;
using Clock = std::chrono::steady_clock;

/// Failure with the HTTP status it maps to.
class ServiceError : public Error {
 public:
  ServiceError(int status, const std::string& what) : Error(what), status_(status) {}
  int status() const noexcept { return status_; }

 private:
  int status_;
};

struct ServiceOptions {
  /// Session logs live here, one <id>.jsonl file per session.
  std::filesystem::path data_dir;
  /// Bundle names in create requests are resolved below this directory.
  std::filesystem::path bundle_root;
  /// Sessions idle for longer are dropped from memory; their logs remain and
  /// they are replayed on the next access.
  std::chrono::seconds ttl{3600};
};

struct SessionEntry;

/// Owns the live sessions. Thread-safe: requests on different sessions run
/// concurrently, writes to one session are serialized, metrics come from an
/// immutable snapshot swapped in after every write.
class SessionManager {
 public:
  explicit SessionManager(ServiceOptions options);
  ~SessionManager();
  SessionManager(const SessionManager&) = delete;
  SessionManager& operator=(const SessionManager&) = delete;

  /// Body of POST /sessions; returns the 201 response body.
  Json create(const Json& request);
  Json next(const std::string& id, const std::string& token);
  Json validate(const std::string& id, const std::string& token, const Json& request);
  Json metrics(const std::string& id);
  Json close(const std::string& id, const std::string& token);

  /// Drops idle sessions from memory; returns how many were dropped.
  std::size_t evict_idle(Clock::time_point now = Clock::now());
  std::size_t cached_sessions() const;

  const ServiceOptions& options() const noexcept { return options_; }

 private:
  std::shared_ptr<SessionEntry> find(const std::string& id);
  std::shared_ptr<const DatasetBundle> bundle(const std::string& name);

  ServiceOptions options_;
  mutable std::mutex mutex_;
  std::unordered_map<std::string, std::shared_ptr<SessionEntry>> sessions_;
  std::unordered_map<std::string, std::shared_ptr<const DatasetBundle>> bundles_;
};

/// HTTP front end of a SessionManager.
class Server {
 public:
  explicit Server(SessionManager& manager);
  ~Server();
  Server(const Server&) = delete;
  Server& operator=(const Server&) = delete;

  /// Binds `host`; port 0 picks a free port. Returns the bound port.
  int bind(const std::string& host, int port);
  /// Serves until stop(). Call after bind().
  void run();
  void stop();

 private:
  SessionManager& manager_;
  std::unique_ptr<httplib::Server> http_;
};

/// Header carrying the session token on mutating requests.
inline constexpr const char* kTokenHeader = "X-Session-Token";

}  // namespace satc::service
