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

#include "qpubench/http_api.hpp"

#include <httplib.h>

#include <chrono>
#include <cstdlib>

namespace qpubench {

namespace {

void reply_json(httplib::Response& res, int status, const nlohmann::json& body) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

void reply_error(httplib::Response& res, int status, const std::string& message) {
  reply_json(res, status, nlohmann::json{{"error", message}});
}

}  // namespace

struct ApiServer::Impl {
  httplib::Server server;
};

ApiServer::ApiServer(std::shared_ptr<JobManager> manager, std::string host, int port)
    : impl_(std::make_unique<Impl>()), manager_(std::move(manager)), host_(std::move(host)),
      port_(port) {
  if (!manager_) throw InvalidArgument("ApiServer needs a job manager");
  auto& s = impl_->server;

  s.Post("/v1/jobs", [this](const httplib::Request& req, httplib::Response& res) {
    JobRequest request;
    try {
      request = nlohmann::json::parse(req.body).get<JobRequest>();
      request.validate();
    } catch (const std::exception& e) {
      reply_error(res, 400, std::string("malformed job request: ") + e.what());
      return;
    }
    std::string id = manager_->submit(std::move(request));
    reply_json(res, 201, nlohmann::json{{"job_id", id}});
  });

  s.Get(R"(/v1/jobs/([^/]+)/counts)", [this](const httplib::Request& req,
                                             httplib::Response& res) {
    const std::string id = req.matches[1];
    if (!manager_->has_job(id)) {
      reply_error(res, 404, "unknown job id");
      return;
    }
    JobRecord rec = manager_->get_with_counts(id);
    if (rec.state != JobState::Done) {
      reply_error(res, 409, "job is not done");
      return;
    }
    nlohmann::json counts = nlohmann::json::array();
    for (auto& c : rec.counts) counts.push_back(c);
    reply_json(res, 200,
               nlohmann::json{{"schema_version", kSchemaVersion},
                              {"job_id", id},
                              {"counts", std::move(counts)}});
  });

  s.Get(R"(/v1/jobs/([^/]+))", [this](const httplib::Request& req, httplib::Response& res) {
    const std::string id = req.matches[1];
    if (!manager_->has_job(id)) {
      reply_error(res, 404, "unknown job id");
      return;
    }
    reply_json(res, 200, job_record_to_json(manager_->get(id), false));
  });

  s.Get("/v1/device", [this](const httplib::Request&, httplib::Response& res) {
    nlohmann::json j = manager_->backend().device();
    reply_json(res, 200, j);
  });
}

ApiServer::~ApiServer() { stop(); }

void ApiServer::start() {
  auto& s = impl_->server;
  if (port_ == 0) {
    port_ = s.bind_to_any_port(host_);
    if (port_ <= 0) throw IoError("failed to bind API server");
  } else if (!s.bind_to_port(host_, port_)) {
    throw IoError("failed to bind API server to port " + std::to_string(port_));
  }
  listener_ = std::thread([this] { impl_->server.listen_after_bind(); });
  // wait until the server accepts connections
  for (int i = 0; i < 200 && !impl_->server.is_running(); ++i)
    std::this_thread::sleep_for(std::chrono::milliseconds(5));
}

void ApiServer::stop() {
  if (listener_.joinable()) {
    impl_->server.stop();
    listener_.join();
  }
}

std::string ApiServer::base_url() const {
  return "http://" + host_ + ":" + std::to_string(port_);
}

struct RemoteBackend::Impl {
  httplib::Client client;
  std::string token;
  explicit Impl(const std::string& url) : client(url) {
    client.set_read_timeout(60, 0);
    client.set_connection_timeout(10, 0);
  }
  httplib::Headers headers() const {
    httplib::Headers h;
    if (!token.empty()) h.emplace("Authorization", "Bearer " + token);
    return h;
  }
};

RemoteBackend::RemoteBackend(std::string base_url, std::string token)
    : impl_(std::make_unique<Impl>(base_url)), base_url_(std::move(base_url)) {
  if (token.empty())
    if (const char* env = std::getenv("QPUBENCH_TOKEN")) token = env;
  impl_->token = std::move(token);
}

RemoteBackend::~RemoteBackend() = default;

std::string RemoteBackend::name() const { return "remote[" + base_url_ + "]"; }

DeviceModel RemoteBackend::device() const {
  auto res = impl_->client.Get("/v1/device", impl_->headers());
  if (!res || res->status != 200)
    throw BackendError("GET /v1/device failed" +
                       (res ? " with status " + std::to_string(res->status) : ""));
  return nlohmann::json::parse(res->body).get<DeviceModel>();
}

std::vector<Counts> RemoteBackend::execute(const JobRequest& request) {
  nlohmann::json body = request;
  auto post = impl_->client.Post("/v1/jobs", impl_->headers(), body.dump(), "application/json");
  if (!post || post->status != 201)
    throw BackendError("job submission failed" +
                       (post ? ": " + post->body : std::string(" (no response)")));
  std::string id = nlohmann::json::parse(post->body).at("job_id").get<std::string>();

  auto deadline = std::chrono::steady_clock::now() +
                  std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                      std::chrono::duration<double>(timeout_s));
  for (;;) {
    auto res = impl_->client.Get("/v1/jobs/" + id, impl_->headers());
    if (!res || res->status != 200) throw BackendError("polling job " + id + " failed");
    JobRecord rec = job_record_from_json(nlohmann::json::parse(res->body));
    if (rec.state == JobState::Failed) throw BackendError("remote job failed: " + rec.error);
    if (rec.state == JobState::Done) break;
    if (std::chrono::steady_clock::now() > deadline)
      throw TimeoutError("remote job " + id + " timed out");
    std::this_thread::sleep_for(std::chrono::duration<double>(poll_interval_s));
  }

  auto res = impl_->client.Get("/v1/jobs/" + id + "/counts", impl_->headers());
  if (!res || res->status != 200) throw BackendError("fetching counts for " + id + " failed");
  nlohmann::json j = nlohmann::json::parse(res->body);
  std::vector<Counts> out;
  for (auto& c : j.at("counts")) out.push_back(c.get<Counts>());
  return out;
}

}  // namespace qpubench
