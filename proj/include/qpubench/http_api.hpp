// Copyright 2026 qpubench contributors
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

#include <memory>
#include <string>
#include <thread>

#include "qpubench/execution.hpp"

namespace qpubench {

/// JSON-over-HTTP job service:
///   POST /v1/jobs            -> 201 {"job_id": ...}
///   GET  /v1/jobs/{id}       -> job record without counts
///   GET  /v1/jobs/{id}/counts-> per-circuit counts
///   GET  /v1/device          -> device model document
/// Unknown ids give 404, malformed bodies 400.
class ApiServer {
 public:
  /// port 0 binds an ephemeral port.
  ApiServer(std::shared_ptr<JobManager> manager, std::string host = "127.0.0.1", int port = 0);
  ~ApiServer();

  void start();
  void stop();
  int port() const { return port_; }
  std::string base_url() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
  std::shared_ptr<JobManager> manager_;
  std::string host_;
  int port_ = 0;
  std::thread listener_;
};

/// Client-side Backend over the job service. Blocks in execute() by
/// polling the job until it reaches a terminal state.
class RemoteBackend : public Backend {
 public:
  /// Token (if any) is sent as a bearer Authorization header; defaults to
  /// the QPUBENCH_TOKEN environment variable.
  explicit RemoteBackend(std::string base_url, std::string token = "");
  ~RemoteBackend() override;

  std::string name() const override;
  DeviceModel device() const override;
  std::vector<Counts> execute(const JobRequest& request) override;

  double poll_interval_s = 0.01;
  double timeout_s = 600.0;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
  std::string base_url_;
};

}  // namespace qpubench
