// Copyright (c) 2026 The adadurian Authors
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

#ifndef ADADURIAN_BATCHING_HPP_
#define ADADURIAN_BATCHING_HPP_

#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "adadurian/corpus.hpp"
#include "adadurian/rng.hpp"

namespace adadurian {
namespace corpus {

// Deterministic per-speaker split; every speaker keeps at least one record
// on each side.
inline std::pair<Manifest, Manifest> split_train_valid(const Manifest& m,
                                                       double valid_fraction,
                                                       std::uint64_t seed) {
  if (!(valid_fraction > 0.0 && valid_fraction < 1.0))
    throw ConfigError("valid_fraction must be in (0, 1)");

  std::map<int, std::vector<std::size_t>> by_speaker;
  for (std::size_t i = 0; i < m.records.size(); ++i)
    by_speaker[m.records[i].speaker_id].push_back(i);

  Rng rng(seed);
  std::vector<bool> is_valid(m.records.size(), false);
  for (auto& [speaker, indices] : by_speaker) {
    if (indices.size() < 2)
      throw ConfigError("speaker id " + std::to_string(speaker) +
                        " has fewer than 2 utterances; cannot split");
    const auto perm = rng.permutation(indices.size());
    auto n_valid = static_cast<std::size_t>(
        static_cast<double>(indices.size()) * valid_fraction);
    n_valid = std::max<std::size_t>(1, std::min(n_valid, indices.size() - 1));
    for (std::size_t k = 0; k < n_valid; ++k) is_valid[indices[perm[k]]] = true;
  }

  Manifest train, valid;
  train.vocabs = valid.vocabs = m.vocabs;
  train.signal = valid.signal = m.signal;
  train.dir = valid.dir = m.dir;
  for (std::size_t i = 0; i < m.records.size(); ++i)
    (is_valid[i] ? valid : train).records.push_back(m.records[i]);
  return {std::move(train), std::move(valid)};
}

// One epoch of globally shuffled batches. The permutation is seeded by
// seed + epoch, so each epoch reshuffles and reruns replay exactly.
class BatchIterator {
 public:
  BatchIterator(const Manifest& manifest, std::size_t batch_size, std::uint64_t seed,
                std::uint64_t epoch)
      : manifest_(manifest), batch_size_(batch_size) {
    if (batch_size < 1) throw ConfigError("batch_size must be >= 1");
    if (manifest.records.empty()) throw ConfigError("empty manifest");
    Rng rng(seed + epoch);
    order_ = rng.permutation(manifest.records.size());
  }

  std::optional<std::vector<const Utterance*>> next() {
    if (cursor_ >= order_.size()) return std::nullopt;
    std::vector<const Utterance*> batch;
    for (std::size_t i = 0; i < batch_size_ && cursor_ < order_.size(); ++i, ++cursor_)
      batch.push_back(&manifest_.records[order_[cursor_]]);
    return batch;
  }

  const std::vector<std::size_t>& order() const { return order_; }

 private:
  const Manifest& manifest_;
  std::size_t batch_size_;
  std::vector<std::size_t> order_;
  std::size_t cursor_ = 0;
};

}  // namespace corpus
}  // namespace adadurian

#endif  // ADADURIAN_BATCHING_HPP_
