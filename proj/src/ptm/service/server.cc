// Copyright 2026 The PTM Authors.
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

#include "ptm/service/server.h"

#include <charconv>

#include "ptm/graph/graph_json.h"
#include "ptm/hitl/hitl.h"

#define CPPHTTPLIB_OPENSSL_SUPPORT
#include "httplib.h"

namespace ptm {

namespace {

using httplib::Request;
using httplib::Response;

constexpr const char *kJson = "application/json";
const std::string kUser = R"(/api/v1/users/([A-Za-z0-9_.\-]+))";

void SendJson(Response &res, int status, const Json &body) {
  res.status = status;
  res.set_content(body.dump(2), kJson);
}

void SendEnvelope(Response &res, int status, std::string_view code, const std::string &message,
                  const std::string &detail) {
  SendJson(res, status, Json{{"code", code}, {"message", message}, {"detail", detail}});
}

Json Body(const Request &req) {
  if (req.body.empty()) Fail(ErrorCode::kInvalidArgument, "request body is empty");
  auto doc = TryParseJson(req.body);
  if (!doc || !doc->is_object()) {
    Fail(ErrorCode::kInvalidArgument, "request body must be a JSON object");
  }
  return *doc;
}

std::string StringField(const Json &body, const char *key) {
  if (!body.contains(key) || !body.at(key).is_string()) {
    Fail(ErrorCode::kInvalidArgument, std::string("field '") + key + "' must be a string");
  }
  return body.at(key).get<std::string>();
}

std::optional<int> IntParam(const Request &req, const char *key) {
  if (!req.has_param(key)) return std::nullopt;
  std::string v = req.get_param_value(key);
  int out = 0;
  auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || p != v.data() + v.size()) {
    Fail(ErrorCode::kInvalidArgument, std::string("query parameter '") + key + "' must be an integer");
  }
  return out;
}

}  // namespace

int HttpStatusFor(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return 400;
    case ErrorCode::kNotFound: return 404;
    case ErrorCode::kAlreadyExists: return 409;
    case ErrorCode::kFailedPrecondition: return 409;
    case ErrorCode::kParse: return 502;
    case ErrorCode::kUnavailable: return 503;
    case ErrorCode::kInternal: return 500;
  }
  return 500;
}

ApiServer::ApiServer(Pipeline &pipeline, std::string api_token)
    : pipeline_(pipeline), api_token_(std::move(api_token)), server_(std::make_unique<httplib::Server>()) {
  // httplib's defaults add SO_REUSEPORT, which lets a second server share a
  // busy port instead of failing.
  server_->set_socket_options([](socket_t sock) {
    int yes = 1;
    setsockopt(sock, SOL_SOCKET, SO_REUSEADDR, reinterpret_cast<const void *>(&yes), sizeof(yes));
  });
  Routes();
}

ApiServer::~ApiServer() { Stop(); }

int ApiServer::Bind(const std::string &host, int port) {
  if (port == 0) {
    int bound = server_->bind_to_any_port(host);
    if (bound > 0) return bound;
  } else if (server_->bind_to_port(host, port)) {
    return port;
  }
  Fail(ErrorCode::kUnavailable, "cannot bind " + host + ":" + std::to_string(port),
       "address in use or not available");
}

void ApiServer::Listen() { server_->listen_after_bind(); }

void ApiServer::Start() {
  thread_ = std::thread([this] { Listen(); });
  server_->wait_until_ready();
}

void ApiServer::Stop() {
  server_->stop();
  if (thread_.joinable()) thread_.join();
}

void ApiServer::Routes() {
  using Handler = std::function<void(const Request &, Response &)>;
  auto wrap = [this](Handler fn) {
    return [this, fn](const Request &req, Response &res) {
      if (!api_token_.empty() && req.get_header_value("Authorization") != "Bearer " + api_token_) {
        SendEnvelope(res, 401, "unauthenticated", "missing or wrong API token", "");
        return;
      }
      try {
        fn(req, res);
      } catch (const Error &e) {
        SendEnvelope(res, HttpStatusFor(e.code()), ErrorCodeName(e.code()), e.what(), e.detail());
      } catch (const Json::exception &e) {
        SendEnvelope(res, 400, ErrorCodeName(ErrorCode::kInvalidArgument), "malformed request", e.what());
      } catch (const std::exception &e) {
        SendEnvelope(res, 500, ErrorCodeName(ErrorCode::kInternal), e.what(), "");
      }
    };
  };
  auto &s = *server_;
  Pipeline &p = pipeline_;

  s.Get("/api/v1/health", wrap([](const Request &, Response &res) {
    SendJson(res, 200, Json{{"status", "ok"}});
  }));

  s.Post(kUser + "/journals", wrap([&p](const Request &req, Response &res) {
    if (req.body.empty()) Fail(ErrorCode::kInvalidArgument, "request body is empty");
    IngestResult r = p.Ingest(req.matches[1], req.body);
    Json rejected = Json::array();
    for (const auto &x : r.rejected) {
      rejected.push_back(Json{{"line", x.line}, {"id", x.id}, {"reason", x.reason}});
    }
    SendJson(res, 200, Json{{"accepted_ids", r.accepted_ids},
                            {"rejected", rejected},
                            {"corpus_size", r.corpus.size()}});
  }));

  s.Post(kUser + "/runs", wrap([&p](const Request &req, Response &res) {
    PipelinePhase phase = ParsePipelinePhase(StringField(Body(req), "phase"));
    std::string run_id = p.StartRun(req.matches[1], phase);
    SendJson(res, 202, Json{{"run_id", run_id}, {"phase", PipelinePhaseName(phase)}, {"status", "queued"}});
  }));

  s.Get(kUser + "/runs/([A-Za-z0-9_\\-]+)", wrap([&p](const Request &req, Response &res) {
    SendJson(res, 200, p.GetRun(req.matches[1], req.matches[2]));
  }));

  s.Get(kUser + "/progress", wrap([&p](const Request &req, Response &res) {
    SendJson(res, 200, p.Progress(req.matches[1]));
  }));

  s.Get(kUser + "/graph", wrap([&p](const Request &req, Response &res) {
    std::optional<int> version = IntParam(req, "version");
    if (req.has_param("layer")) {
      Layer layer = ParseLayer(req.get_param_value("layer"));
      SendJson(res, 200, p.LayerDocument(req.matches[1], layer, version));
    } else {
      SendJson(res, 200, p.GraphDocument(req.matches[1], version));
    }
  }));

  s.Get(kUser + "/nodes/([^/]+)/trace", wrap([&p](const Request &req, Response &res) {
    SendJson(res, 200, p.Trace(req.matches[1], req.matches[2]));
  }));

  s.Get(kUser + "/nodes/([^/]+)", wrap([&p](const Request &req, Response &res) {
    Json graph = p.GraphDocument(req.matches[1]);
    for (const Json &n : graph.at("nodes")) {
      if (n.at("id") == req.matches[2].str()) return SendJson(res, 200, n);
    }
    Fail(ErrorCode::kNotFound, "unknown node " + req.matches[2].str());
  }));

  s.Get(kUser + "/hitl/session", wrap([&p](const Request &req, Response &res) {
    SendJson(res, 200, SessionReport(p.Session(req.matches[1])));
  }));

  s.Get(kUser + "/hitl/next", wrap([&p](const Request &req, Response &res) {
    SendJson(res, 200, p.NextItem(req.matches[1]));
  }));

  s.Post(kUser + "/hitl/items/([A-Za-z0-9_\\-]+)/answer", wrap([&p](const Request &req, Response &res) {
    Json body = Body(req);
    if (body.value("skip", false)) {
      SendJson(res, 200, p.SkipItem(req.matches[1], req.matches[2]));
      return;
    }
    SendJson(res, 200, p.AnswerItem(req.matches[1], req.matches[2], StringField(body, "answer")));
  }));

  s.Post(kUser + "/likert", wrap([&p](const Request &req, Response &res) {
    Json body = Body(req);
    if (!body.contains("rating") || !body.at("rating").is_number_integer()) {
      Fail(ErrorCode::kInvalidArgument, "field 'rating' must be an integer 1-5");
    }
    LikertRecord r = p.RecordLikert(req.matches[1], StringField(body, "node_id"),
                                    StringField(body, "phase"), body.at("rating").get<int>());
    SendJson(res, 201, Json{{"user_id", r.user_id},
                            {"node_id", r.node_id},
                            {"layer", LayerName(r.layer)},
                            {"phase", ReviewPhaseName(r.phase)},
                            {"rating", r.rating}});
  }));

  s.Post(kUser + "/eval", wrap([&p](const Request &req, Response &res) {
    std::string condition = StringField(Body(req), "condition");
    if (condition != "pre" && condition != "post") {
      Fail(ErrorCode::kInvalidArgument, "condition must be pre or post");
    }
    PipelinePhase phase = condition == "pre" ? PipelinePhase::kEvaluatePre : PipelinePhase::kEvaluatePost;
    std::string run_id = p.StartRun(req.matches[1], phase);
    SendJson(res, 202, Json{{"run_id", run_id}, {"phase", PipelinePhaseName(phase)}, {"status", "queued"}});
  }));

  s.Get(kUser + "/eval/report", wrap([&p](const Request &req, Response &res) {
    std::string condition = req.has_param("condition") ? req.get_param_value("condition") : "pre";
    if (req.get_param_value("format") == "csv") {
      res.status = 200;
      res.set_content(p.EvalCsv(req.matches[1], condition), "text/csv");
      return;
    }
    SendJson(res, 200, p.EvalReport(req.matches[1], condition));
  }));

  s.set_error_handler([](const Request &req, Response &res) {
    if (!res.body.empty()) return;
    if (res.status == 404) {
      SendEnvelope(res, 404, ErrorCodeName(ErrorCode::kNotFound), "no route for " + req.method + " " + req.path, "");
    }
  });
}

}  // namespace ptm
