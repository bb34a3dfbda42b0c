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

#include "ptm/eval/semantics.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "ptm/consensus/hdbscan.h"
#include "ptm/consensus/reducer.h"
#include "ptm/eval/vocabulary.h"

namespace ptm {

std::vector<std::string> TopTerms(const std::vector<std::string> &texts, int top_n) {
  std::map<std::string, int> freq;
  for (const auto &t : texts) {
    for (const auto &w : ContentTokens(t)) freq[w]++;
  }
  std::vector<std::pair<std::string, int>> ranked(freq.begin(), freq.end());
  std::stable_sort(ranked.begin(), ranked.end(),
                   [](const auto &a, const auto &b) { return a.second > b.second; });
  std::vector<std::string> out;
  for (size_t i = 0; i < ranked.size() && static_cast<int>(i) < top_n; ++i) {
    out.push_back(ranked[i].first);
  }
  return out;
}

double CvCoherence(const std::vector<std::string> &terms,
                   const std::vector<std::string> &reference_texts, int window) {
  const size_t k = terms.size();
  if (k < 2) return 0.0;
  std::map<std::string, size_t> index;
  for (size_t i = 0; i < k; ++i) index.emplace(terms[i], i);

  // Boolean document per sliding window.
  long windows = 0;
  std::vector<long> single(k, 0);
  std::vector<long> joint(k * k, 0);
  auto count_window = [&](const std::vector<std::string> &tokens, size_t begin, size_t end) {
    std::set<size_t> present;
    for (size_t t = begin; t < end; ++t) {
      auto it = index.find(tokens[t]);
      if (it != index.end()) present.insert(it->second);
    }
    ++windows;
    for (size_t a : present) {
      single[a]++;
      for (size_t b : present) joint[a * k + b]++;
    }
  };
  for (const auto &text : reference_texts) {
    std::vector<std::string> tokens = ContentTokens(text);
    size_t w = static_cast<size_t>(std::max(1, window));
    if (tokens.size() <= w) {
      count_window(tokens, 0, tokens.size());
    } else {
      for (size_t s = 0; s + w <= tokens.size(); ++s) count_window(tokens, s, s + w);
    }
  }
  if (windows == 0) return 0.0;

  constexpr double kEps = 1e-12;
  const double total = static_cast<double>(windows);
  auto npmi = [&](size_t a, size_t b) {
    double pa = single[a] / total, pb = single[b] / total, pab = joint[a * k + b] / total;
    if (pa == 0 || pb == 0) return 0.0;
    double pmi = std::log((pab + kEps) / (pa * pb));
    return pmi / -std::log(pab + kEps);
  };
  std::vector<double> m(k * k);
  for (size_t a = 0; a < k; ++a)
    for (size_t b = 0; b < k; ++b) m[a * k + b] = npmi(a, b);

  std::vector<double> whole(k, 0.0);
  for (size_t a = 0; a < k; ++a)
    for (size_t j = 0; j < k; ++j) whole[j] += m[a * k + j];

  double sum = 0;
  for (size_t a = 0; a < k; ++a) {
    double dot = 0, na = 0, nw = 0;
    for (size_t j = 0; j < k; ++j) {
      dot += m[a * k + j] * whole[j];
      na += m[a * k + j] * m[a * k + j];
      nw += whole[j] * whole[j];
    }
    sum += (na == 0 || nw == 0) ? 0.0 : dot / std::sqrt(na * nw);
  }
  return sum / static_cast<double>(k);
}

std::optional<double> Silhouette(const std::vector<double> &d, size_t n,
                                 const std::vector<int> &labels) {
  std::map<int, std::vector<size_t>> clusters;
  for (size_t i = 0; i < n; ++i) {
    if (labels[i] != kNoise) clusters[labels[i]].push_back(i);
  }
  if (clusters.size() < 2) return std::nullopt;
  double total = 0;
  size_t counted = 0;
  for (const auto &[label, members] : clusters) {
    for (size_t i : members) {
      ++counted;
      if (members.size() == 1) continue;
      double a = 0;
      for (size_t j : members) a += d[i * n + j];
      a /= static_cast<double>(members.size() - 1);
      double b = std::numeric_limits<double>::infinity();
      for (const auto &[other, om] : clusters) {
        if (other == label) continue;
        double s = 0;
        for (size_t j : om) s += d[i * n + j];
        b = std::min(b, s / static_cast<double>(om.size()));
      }
      double denom = std::max(a, b);
      total += denom == 0 ? 0.0 : (b - a) / denom;
    }
  }
  return counted == 0 ? 0.0 : total / static_cast<double>(counted);
}

LayerSemantics MeasureLayer(Layer layer, const std::vector<std::string> &texts,
                            EmbeddingProvider &provider, int reduce_dim) {
  LayerSemantics out;
  out.layer = layer;
  out.node_count = static_cast<int>(texts.size());
  if (texts.size() < 3) return out;
  out.defined = true;

  std::vector<Vector> emb = provider.Embed(texts);
  const size_t n = emb.size();
  double sim_sum = 0;
  size_t pairs = 0;
  std::vector<double> cosine_distance(n * n, 0.0);
  for (size_t i = 0; i < n; ++i) {
    for (size_t j = i + 1; j < n; ++j) {
      double c = Cosine(emb[i], emb[j]);
      sim_sum += c;
      ++pairs;
      cosine_distance[i * n + j] = cosine_distance[j * n + i] = std::max(0.0, 1.0 - c);
    }
  }
  out.mean_pairwise_similarity = sim_sum / static_cast<double>(pairs);

  std::vector<Vector> reduced = emb.size() >= static_cast<size_t>(reduce_dim)
                                    ? PcaReduce(emb, reduce_dim)
                                    : emb;
  std::vector<double> euclid(n * n, 0.0);
  for (size_t i = 0; i < n; ++i)
    for (size_t j = i + 1; j < n; ++j) euclid[i * n + j] = euclid[j * n + i] = Euclidean(reduced[i], reduced[j]);
  std::vector<int> labels = Hdbscan(euclid, n);

  std::map<int, std::vector<size_t>> topics;
  for (size_t i = 0; i < n; ++i) {
    if (labels[i] != kNoise) topics[labels[i]].push_back(i);
  }
  out.topic_count = static_cast<int>(topics.size());
  if (topics.empty()) {
    for (size_t i = 0; i < n; ++i) topics[0].push_back(i);
  }

  double coherence = 0, within = 0;
  size_t within_pairs = 0;
  for (const auto &[label, members] : topics) {
    std::vector<std::string> docs;
    for (size_t i : members) docs.push_back(texts[i]);
    coherence += CvCoherence(TopTerms(docs), texts);
    for (size_t a = 0; a < members.size(); ++a) {
      for (size_t b = a + 1; b < members.size(); ++b) {
        within += 1.0 - cosine_distance[members[a] * n + members[b]];
        ++within_pairs;
      }
    }
  }
  out.coherence = std::clamp(coherence / static_cast<double>(topics.size()), 0.0, 1.0);
  out.within_topic_similarity = within_pairs ? within / static_cast<double>(within_pairs) : 0.0;
  out.silhouette = Silhouette(cosine_distance, n, labels);
  return out;
}

Json LayerSemanticsToJson(const LayerSemantics &s) {
  Json j{{"layer", LayerName(s.layer)}, {"node_count", s.node_count}, {"defined", s.defined}};
  if (!s.defined) return j;
  j["coherence"] = s.coherence;
  j["mean_pairwise_similarity"] = s.mean_pairwise_similarity;
  j["within_topic_similarity"] = s.within_topic_similarity;
  j["silhouette"] = s.silhouette ? Json(*s.silhouette) : Json(nullptr);
  j["topic_count"] = s.topic_count;
  return j;
}

}  // namespace ptm
