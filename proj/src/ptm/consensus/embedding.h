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

#ifndef PTM_CONSENSUS_EMBEDDING_H_
#define PTM_CONSENSUS_EMBEDDING_H_

#include <memory>
#include <string>
#include <vector>

namespace ptm {

using Vector = std::vector<double>;

// Maps texts to fixed-dimension vectors. Identical texts must map to
// identical vectors.
class EmbeddingProvider {
 public:
  virtual ~EmbeddingProvider() = default;
  virtual std::vector<Vector> Embed(const std::vector<std::string> &texts) = 0;
  virtual int dim() const = 0;
  virtual std::string name() const = 0;
};

// Offline provider: signed feature hashing of lowercased word unigrams and
// character trigrams, L2-normalized. The empty text maps to the zero vector.
class HashingEmbedder : public EmbeddingProvider {
 public:
  explicit HashingEmbedder(int dim = 384) : dim_(dim) {}
  std::vector<Vector> Embed(const std::vector<std::string> &texts) override;
  Vector EmbedOne(const std::string &text) const;
  int dim() const override { return dim_; }
  std::string name() const override { return "hashing-" + std::to_string(dim_); }

 private:
  int dim_;
};

// OpenAI-compatible embeddings endpoint: POST {"model", "input": [...]},
// reply {"data": [{"embedding": [...]}, ...]}. Batches requests.
class HttpEmbedder : public EmbeddingProvider {
 public:
  HttpEmbedder(std::string endpoint, std::string api_key, std::string model, int dim);
  std::vector<Vector> Embed(const std::vector<std::string> &texts) override;
  int dim() const override { return dim_; }
  std::string name() const override { return "http:" + model_; }

 private:
  std::string endpoint_;
  std::string api_key_;
  std::string model_;
  int dim_;
};

double Cosine(const Vector &a, const Vector &b);
double Euclidean(const Vector &a, const Vector &b);

}  // namespace ptm

#endif  // PTM_CONSENSUS_EMBEDDING_H_
