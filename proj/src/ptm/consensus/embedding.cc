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

#include "ptm/consensus/embedding.h"

#include <cmath>

#include "ptm/base/error.h"
#include "ptm/base/hash.h"
#include "ptm/base/json.h"
#include "ptm/base/text.h"
#include "ptm/base/url.h"

#define CPPHTTPLIB_OPENSSL_SUPPORT
#include "httplib.h"

namespace ptm {

namespace {

constexpr uint64_t kWordSeed = 0x9e3779b97f4a7c15ULL;
constexpr uint64_t kGramSeed = 0xc2b2ae3d27d4eb4fULL;

void AddFeature(Vector &v, std::string_view feature, uint64_t seed, double weight) {
  uint64_t h = Fnv1a64(feature, seed);
  size_t bucket = static_cast<size_t>(h % v.size());
  double sign = (h >> 63) ? -1.0 : 1.0;
  v[bucket] += sign * weight;
}

void Normalize(Vector &v) {
  double norm = 0;
  for (double x : v) norm += x * x;
  if (norm == 0) return;
  norm = std::sqrt(norm);
  for (double &x : v) x /= norm;
}

}  // namespace

Vector HashingEmbedder::EmbedOne(const std::string &text) const {
  Vector v(static_cast<size_t>(dim_), 0.0);
  for (const std::string &w : WordTokens(text)) {
    AddFeature(v, w, kWordSeed, 1.0);
    std::string padded = "<" + w + ">";
    for (size_t i = 0; i + 3 <= padded.size(); ++i) {
      AddFeature(v, std::string_view(padded).substr(i, 3), kGramSeed, 0.5);
    }
  }
  Normalize(v);
  return v;
}

std::vector<Vector> HashingEmbedder::Embed(const std::vector<std::string> &texts) {
  std::vector<Vector> out;
  out.reserve(texts.size());
  for (const auto &t : texts) out.push_back(EmbedOne(t));
  return out;
}

HttpEmbedder::HttpEmbedder(std::string endpoint, std::string api_key, std::string model,
                           int dim)
    : endpoint_(std::move(endpoint)),
      api_key_(std::move(api_key)),
      model_(std::move(model)),
      dim_(dim) {
  if (endpoint_.empty()) Fail(ErrorCode::kInvalidArgument, "embedding endpoint not configured");
}

std::vector<Vector> HttpEmbedder::Embed(const std::vector<std::string> &texts) {
  constexpr size_t kBatch = 64;
  auto [base, path] = SplitUrl(endpoint_);
  httplib::Client client(base);
  client.set_read_timeout(120, 0);
  httplib::Headers headers;
  if (!api_key_.empty()) headers.emplace("Authorization", "Bearer " + api_key_);

  std::vector<Vector> out;
  for (size_t start = 0; start < texts.size(); start += kBatch) {
    Json input = Json::array();
    for (size_t i = start; i < std::min(texts.size(), start + kBatch); ++i) {
      // Some servers reject empty strings; a single space embeds the same
      // way for every empty field, which is all consensus needs.
      input.push_back(texts[i].empty() ? std::string(" ") : texts[i]);
    }
    Json body{{"model", model_}, {"input", input}};
    auto res = client.Post(path, headers, body.dump(), "application/json");
    if (!res) {
      Fail(ErrorCode::kUnavailable, "embedding transport error: " + httplib::to_string(res.error()));
    }
    if (res->status != 200) {
      Fail(ErrorCode::kUnavailable, "embedding endpoint returned " + std::to_string(res->status),
           res->body);
    }
    Json reply = ParseJsonOrDie(res->body, "embedding reply");
    const Json &data = reply.at("data");
    if (data.size() != input.size()) {
      Fail(ErrorCode::kParse, "embedding reply has wrong item count");
    }
    for (const Json &item : data) {
      Vector v = item.at("embedding").get<Vector>();
      if (static_cast<int>(v.size()) != dim_) {
        Fail(ErrorCode::kParse, "embedding dimension " + std::to_string(v.size()) +
                                    " != configured " + std::to_string(dim_));
      }
      out.push_back(std::move(v));
    }
  }
  return out;
}

double Cosine(const Vector &a, const Vector &b) {
  double dot = 0, na = 0, nb = 0;
  for (size_t i = 0; i < a.size(); ++i) {
    dot += a[i] * b[i];
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  if (na == 0 || nb == 0) return 0.0;
  return dot / std::sqrt(na * nb);
}

double Euclidean(const Vector &a, const Vector &b) {
  double s = 0;
  for (size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(s);
}

}  // namespace ptm
