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

#include "qpubench/execution.hpp"

#include <chrono>
#include <cinttypes>
#include <cstdio>
#include <random>

namespace qpubench {

void JobRequest::validate() const {
  if (circuits.empty()) throw InvalidArgument("job needs at least one circuit");
  if (shots < 1) throw InvalidArgument("shots must be >= 1");
  for (auto& c : circuits) c.validate();
}

const char* job_state_name(JobState s) {
  switch (s) {
    case JobState::Queued:
      return "queued";
    case JobState::Running:
      return "running";
    case JobState::Done:
      return "done";
    default:
      return "failed";
  }
}

JobState job_state_from_name(const std::string& name) {
  if (name == "queued") return JobState::Queued;
  if (name == "running") return JobState::Running;
  if (name == "done") return JobState::Done;
  if (name == "failed") return JobState::Failed;
  throw InvalidArgument("unknown job state: " + name);
}

std::string iso_timestamp_now() {
  using namespace std::chrono;
  auto now = system_clock::now();
  auto secs = time_point_cast<seconds>(now);
  auto ms = duration_cast<milliseconds>(now - secs).count();
  std::time_t t = system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[40];
  std::snprintf(buf, sizeof buf, "%04d-%02d-%02dT%02d:%02d:%02d.%03dZ", tm.tm_year + 1900,
                tm.tm_mon + 1, tm.tm_mday, tm.tm_hour, tm.tm_min, tm.tm_sec,
                static_cast<int>(ms));
  return buf;
}

LocalBackend::LocalBackend(DeviceModel device, NoiseConfig noise)
    : device_(std::move(device)), noise_(noise) {
  device_.validate();
}

std::string LocalBackend::name() const {
  return std::string("local-twin[") + device_.name + "]";
}

std::vector<Counts> LocalBackend::execute(const JobRequest& request) {
  request.validate();
  NoiseConfig noise = noise_;
  const nlohmann::json opts =
      request.options.is_object() ? request.options : nlohmann::json::object();
  if (opts.contains("noise")) {
    const auto& n = opts.at("noise");
    noise.gate_depolarizing = n.value("gate_depolarizing", noise.gate_depolarizing);
    noise.idle_decoherence = n.value("idle_decoherence", noise.idle_decoherence);
    noise.readout_flip = n.value("readout_flip", noise.readout_flip);
    noise.drive_crosstalk = n.value("drive_crosstalk", noise.drive_crosstalk);
  }
  noise.workers = opts.value("workers", noise.workers);

  std::uint64_t base_seed;
  if (request.seed) {
    base_seed = *request.seed;
  } else {
    std::random_device rd;
    base_seed = (static_cast<std::uint64_t>(rd()) << 32) | rd();
  }

  std::vector<Counts> out;
  out.reserve(request.circuits.size());
  for (std::size_t i = 0; i < request.circuits.size(); ++i) {
    noise.seed = derive_seed(base_seed, i);
    try {
      out.push_back(run_noisy(request.circuits[i], device_, noise, request.shots));
    } catch (const Error& e) {
      throw BackendError(std::string("circuit ") + std::to_string(i) + ": " + e.what());
    }
  }
  return out;
}

JobManager::JobManager(std::shared_ptr<Backend> backend, int executors)
    : backend_(std::move(backend)) {
  if (!backend_) throw InvalidArgument("JobManager needs a backend");
  if (executors < 1) executors = 1;
  for (int i = 0; i < executors; ++i) workers_.emplace_back([this] { worker_loop(); });
}

JobManager::~JobManager() {
  {
    std::lock_guard lock(mutex_);
    stopping_ = true;
  }
  cv_.notify_all();
  for (auto& w : workers_) w.join();
}

std::string JobManager::submit(JobRequest request) {
  request.validate();
  std::lock_guard lock(mutex_);
  char buf[32];
  std::snprintf(buf, sizeof buf, "job-%06" PRIu64, next_id_++);
  std::string id = buf;
  JobRecord rec;
  rec.job_id = id;
  rec.state = JobState::Queued;
  rec.submitted_at = iso_timestamp_now();
  rec.shots = request.shots;
  records_[id] = rec;
  requests_[id] = std::move(request);
  queue_.push_back(id);
  cv_.notify_all();
  return id;
}

void JobManager::worker_loop() {
  for (;;) {
    std::string id;
    JobRequest request;
    {
      std::unique_lock lock(mutex_);
      cv_.wait(lock, [this] { return stopping_ || !queue_.empty(); });
      if (stopping_ && queue_.empty()) return;
      id = queue_.front();
      queue_.pop_front();
      request = requests_.at(id);
      records_[id].state = JobState::Running;
      if (request.seed) {
        records_[id].seed_used = *request.seed;
      } else {
        std::random_device rd;
        request.seed = (static_cast<std::uint64_t>(rd()) << 32) | rd();
        records_[id].seed_used = *request.seed;
      }
    }
    cv_.notify_all();

    auto t0 = std::chrono::steady_clock::now();
    std::vector<Counts> counts;
    std::string error;
    try {
      counts = backend_->execute(request);
    } catch (const std::exception& e) {
      error = e.what();
    }
    auto t1 = std::chrono::steady_clock::now();

    {
      std::lock_guard lock(mutex_);
      JobRecord& rec = records_[id];
      rec.completed_at = iso_timestamp_now();
      rec.run_seconds = std::chrono::duration<double>(t1 - t0).count();
      if (error.empty()) {
        rec.state = JobState::Done;
        rec.counts = std::move(counts);
      } else {
        rec.state = JobState::Failed;
        rec.error = error;
      }
      requests_.erase(id);
    }
    cv_.notify_all();
  }
}

JobRecord JobManager::get(const std::string& id) const {
  JobRecord rec = get_with_counts(id);
  rec.counts.clear();
  return rec;
}

JobRecord JobManager::get_with_counts(const std::string& id) const {
  std::lock_guard lock(mutex_);
  auto it = records_.find(id);
  if (it == records_.end()) throw InvalidArgument("unknown job id: " + id);
  return it->second;
}

bool JobManager::has_job(const std::string& id) const {
  std::lock_guard lock(mutex_);
  return records_.count(id) > 0;
}

JobRecord JobManager::wait(const std::string& id, double timeout_s) const {
  std::unique_lock lock(mutex_);
  auto it = records_.find(id);
  if (it == records_.end()) throw InvalidArgument("unknown job id: " + id);
  auto deadline = std::chrono::steady_clock::now() +
                  std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                      std::chrono::duration<double>(timeout_s));
  bool done = cv_.wait_until(lock, deadline, [&] {
    const JobRecord& r = records_.at(id);
    return r.state == JobState::Done || r.state == JobState::Failed;
  });
  if (!done) throw TimeoutError("job " + id + " did not finish in time");
  return records_.at(id);
}

JobRecord submit_and_wait(JobManager& manager, JobRequest request, double timeout_s) {
  std::string id = manager.submit(std::move(request));
  return manager.wait(id, timeout_s);
}

void to_json(nlohmann::json& j, const JobRequest& r) {
  j = nlohmann::json{{"schema_version", kSchemaVersion},
                     {"circuits", r.circuits},
                     {"shots", r.shots},
                     {"options", r.options.is_null() ? nlohmann::json::object() : r.options}};
  if (r.seed) j["seed"] = *r.seed;
}

void from_json(const nlohmann::json& j, JobRequest& r) {
  j.at("circuits").get_to(r.circuits);
  r.shots = j.at("shots").get<std::uint64_t>();
  r.seed.reset();
  if (j.contains("seed") && !j.at("seed").is_null()) r.seed = j.at("seed").get<std::uint64_t>();
  r.options = j.value("options", nlohmann::json::object());
}

nlohmann::json job_record_to_json(const JobRecord& r, bool with_counts) {
  nlohmann::json j{{"schema_version", kSchemaVersion},
                   {"job_id", r.job_id},
                   {"state", job_state_name(r.state)},
                   {"submitted_at", r.submitted_at},
                   {"completed_at", r.completed_at},
                   {"shots", r.shots},
                   {"seed_used", r.seed_used},
                   {"run_seconds", r.run_seconds},
                   {"error", r.error}};
  if (with_counts) {
    nlohmann::json counts = nlohmann::json::array();
    for (auto& c : r.counts) counts.push_back(c);
    j["counts"] = std::move(counts);
  }
  return j;
}

JobRecord job_record_from_json(const nlohmann::json& j) {
  JobRecord r;
  r.job_id = j.at("job_id").get<std::string>();
  r.state = job_state_from_name(j.at("state").get<std::string>());
  r.submitted_at = j.value("submitted_at", "");
  r.completed_at = j.value("completed_at", "");
  r.shots = j.value("shots", std::uint64_t{0});
  r.seed_used = j.value("seed_used", std::uint64_t{0});
  r.run_seconds = j.value("run_seconds", 0.0);
  r.error = j.value("error", "");
  if (j.contains("counts"))
    for (auto& c : j.at("counts")) r.counts.push_back(c.get<Counts>());
  return r;
}

}  // namespace qpubench
