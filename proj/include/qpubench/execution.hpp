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

#include <nlohmann/json.hpp>

#include <condition_variable>
#include <deque>
#include <memory>
#include <mutex>
#include <optional>
#include <thread>
#include <vector>

#include "qpubench/circuit.hpp"
#include "qpubench/device.hpp"
#include "qpubench/sim.hpp"

namespace qpubench {

struct JobRequest {
  std::vector<Circuit> circuits;
  std::uint64_t shots = 1024;
  std::optional<std::uint64_t> seed;
  nlohmann::json options;  // backend-specific knobs (noise flags, workers)

  void validate() const;
};

enum class JobState { Queued, Running, Done, Failed };
const char* job_state_name(JobState s);
JobState job_state_from_name(const std::string& name);

struct JobRecord {
  std::string job_id;
  JobState state = JobState::Queued;
  std::string submitted_at;  // ISO-8601 UTC
  std::string completed_at;
  std::uint64_t shots = 0;
  std::uint64_t seed_used = 0;
  std::vector<Counts> counts;  // per circuit, present when Done
  std::string error;
  double run_seconds = 0.0;
};

/// Synchronous execution surface shared by the local twin and remote
/// processors.
class Backend {
 public:
  virtual ~Backend() = default;
  virtual std::string name() const = 0;
  virtual DeviceModel device() const = 0;
  /// Blocking execution; throws BackendError on failure.
  virtual std::vector<Counts> execute(const JobRequest& request) = 0;
};

/// Digital-twin backend: executes circuits with run_noisy under the
/// configured channel flags. Per-circuit seeds derive from the request seed.
class LocalBackend : public Backend {
 public:
  LocalBackend(DeviceModel device, NoiseConfig noise);
  std::string name() const override;
  DeviceModel device() const override { return device_; }
  std::vector<Counts> execute(const JobRequest& request) override;
  const NoiseConfig& noise() const { return noise_; }

 private:
  DeviceModel device_;
  NoiseConfig noise_;
};

/// FIFO job queue over a backend: submit/poll/wait with
/// queued -> running -> {done, failed} state transitions.
class JobManager {
 public:
  explicit JobManager(std::shared_ptr<Backend> backend, int executors = 1);
  ~JobManager();
  JobManager(const JobManager&) = delete;
  JobManager& operator=(const JobManager&) = delete;

  std::string submit(JobRequest request);
  JobRecord get(const std::string& id) const;  // snapshot without counts
  JobRecord get_with_counts(const std::string& id) const;
  /// Blocks until terminal state; throws TimeoutError after `timeout_s`.
  JobRecord wait(const std::string& id, double timeout_s) const;
  bool has_job(const std::string& id) const;
  Backend& backend() { return *backend_; }

 private:
  void worker_loop();

  std::shared_ptr<Backend> backend_;
  mutable std::mutex mutex_;
  mutable std::condition_variable cv_;
  std::deque<std::string> queue_;
  std::map<std::string, JobRequest> requests_;
  std::map<std::string, JobRecord> records_;
  std::vector<std::thread> workers_;
  std::uint64_t next_id_ = 1;
  bool stopping_ = false;
};

/// Submits to the queue and blocks for a terminal record.
JobRecord submit_and_wait(JobManager& manager, JobRequest request, double timeout_s);

void to_json(nlohmann::json& j, const JobRequest& r);
void from_json(const nlohmann::json& j, JobRequest& r);
/// `with_counts` controls whether per-circuit counts are serialized.
nlohmann::json job_record_to_json(const JobRecord& r, bool with_counts);
JobRecord job_record_from_json(const nlohmann::json& j);

std::string iso_timestamp_now();

}  // namespace qpubench
