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

#ifndef PROSPECTNET__SCENARIO_IO_HPP_
#define PROSPECTNET__SCENARIO_IO_HPP_

#include <string>
#include <vector>

#include "prospectnet/scenario.hpp"

namespace prospectnet
{

/**
 * Scenario files are line-delimited JSON, one scenario object per line:
 *
 *   {"id": "...", "history_len": 10, "horizon": 30,
 *    "tracks": [{"agent_id": "A", "x": [...], "y": [...], "heading": [...],
 *                "valid": [1, ...], "length": 4.2, "width": 1.9,
 *                "predictable": true}, ...],
 *    "map": [{"polyline_id": "lane_a", "kind": "lane_centerline",
 *             "x": [...], "y": [...]}, ...]}
 *
 * Floats survive a write/read round trip bit-exactly. Malformed lines raise
 * ParseError naming the line number; invariant violations raise
 * ValidationError. An empty file is a ParseError.
 */
std::vector<Scenario> read_scenarios(const std::string & path);
void write_scenarios(const std::string & path, const std::vector<Scenario> & scenarios);

/**
 * Prediction files are line-delimited JSON, one record per line:
 *
 *   {"scenario_id": "...", "agent_a": "A", "agent_b": "B",
 *    "pairs": [{"score": 0.4, "ax": [...], "ay": [...],
 *               "bx": [...], "by": [...]}, ...]}
 *
 * Pairs are score-sorted descending by the writer.
 */
std::vector<PredictionRecord> read_predictions(const std::string & path);
void write_predictions(const std::string & path, const std::vector<PredictionRecord> & records);

}  // namespace prospectnet

#endif  // PROSPECTNET__SCENARIO_IO_HPP_
