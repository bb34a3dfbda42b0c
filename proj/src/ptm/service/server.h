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

#ifndef PTM_SERVICE_SERVER_H_
#define PTM_SERVICE_SERVER_H_

#include <memory>
#include <string>
#include <thread>

#include "ptm/base/error.h"
#include "ptm/service/pipeline.h"

namespace httplib {
class Server;
}

namespace ptm {

// HTTP status used for each error code in the {code, message, detail}
// envelope.
int HttpStatusFor(ErrorCode code);

// JSON API under /api/v1 over one Pipeline. Long phases run as background
// jobs; clients poll GET .../runs/{run_id}.
class ApiServer {
 public:
  // A non-empty `api_token` requires "Authorization: Bearer <token>".
  ApiServer(Pipeline &pipeline, std::string api_token = "");
  ~ApiServer();

  // Port 0 picks a free port. Returns the bound port; kUnavailable when the
  // address is taken.
  int Bind(const std::string &host, int port);
  void Listen();  // blocks until Stop()
  void Start();   // Listen() on a background thread
  void Stop();

 private:
  void Routes();

  Pipeline &pipeline_;
  std::string api_token_;
  std::unique_ptr<httplib::Server> server_;
  std::thread thread_;
};

}  // namespace ptm

#endif  // PTM_SERVICE_SERVER_H_
