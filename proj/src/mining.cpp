// Copyright 2026 The ProspectNet Authors
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

#include "prospectnet/mining.hpp"

#include <algorithm>
#include <limits>

#include "prospectnet/errors.hpp"

namespace prospectnet
{

double min_future_distance(const AgentTrack & a, const AgentTrack & b, std::size_t history_len)
{
  if (a.positions.size() != b.positions.size()) {
    throw ContractError("mining: tracks disagree on the timestamp grid");
  }
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t t = history_len; t < a.positions.size(); ++t) {
    if (a.valid[t] && b.valid[t]) {
      best = std::min(best, distance(a.positions[t], b.positions[t]));
    }
  }
  return best;
}

std::vector<std::pair<std::string, std::string>> mine_interactive_pairs(
  const Scenario & scenario, double threshold)
{
  std::vector<const AgentTrack *> predictable;
  for (const AgentTrack & track : scenario.tracks) {
    if (track.is_predictable) {
      predictable.push_back(&track);
    }
  }
  std::sort(predictable.begin(), predictable.end(),
            [](const AgentTrack * a, const AgentTrack * b) { return a->agent_id < b->agent_id; });

  std::vector<std::pair<std::string, std::string>> pairs;
  for (std::size_t i = 0; i < predictable.size(); ++i) {
    for (std::size_t j = i + 1; j < predictable.size(); ++j) {
      const double d =
        min_future_distance(*predictable[i], *predictable[j], scenario.history_len);
      if (d < threshold) {
        pairs.emplace_back(predictable[i]->agent_id, predictable[j]->agent_id);
      }
    }
  }
  return pairs;
}

}  // namespace prospectnet
