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

#ifndef PROSPECTNET__PIPELINE_HPP_
#define PROSPECTNET__PIPELINE_HPP_

#include <iosfwd>
#include <string>
#include <vector>

#include "prospectnet/metrics.hpp"
#include "prospectnet/run_config.hpp"
#include "prospectnet/scenario.hpp"

namespace prospectnet
{

/**
 * @file
 * The command pipeline behind the CLI: synthetic data generation, pair
 * mining, target-quality reports, the two training stages, prediction,
 * evaluation, and plotting.
 *
 * Every command takes the run config plus an optional output-path override
 * (empty string keeps the configured path), appends progress lines to the
 * log stream, and writes `<out>.manifest.json` next to its output with the
 * canonical config text, the seed, and the git revision, so a run can be
 * reproduced bit for bit. Parent directories of outputs are created on
 * demand. Scenario-parallel commands honor the PROSPECTNET_THREADS
 * environment variable and order their output by input index, so the
 * thread count never changes the bytes written.
 */

/// One mined interactive pair, stored as JSON lines
/// {"scenario_id": ..., "agent_a": ..., "agent_b": ...}.
struct MinedPair
{
  std::string scenario_id;
  std::string agent_a;
  std::string agent_b;
};

std::vector<MinedPair> read_pairs_file(const std::string & path);
void write_pairs_file(const std::string & path, const std::vector<MinedPair> & pairs);

/// Worker count for n jobs: PROSPECTNET_THREADS when set, otherwise the
/// hardware concurrency, both clamped to [1, n].
std::size_t worker_count(std::size_t jobs);

/// Commands. Each returns the path of its primary output.

/// Writes config.data.count synthetic scenarios of config.data.kind,
/// seeded seed, seed+1, ... so reruns are byte-identical.
std::string run_gen_data(const RunConfig & config, const std::string & out, std::ostream & log);

/// Mines interactive pairs from the scenario file at the configured
/// distance threshold.
std::string run_mine_pairs(const RunConfig & config, const std::string & out, std::ostream & log);

/// Best-mode-displacement quality report for the target-sampling presets:
/// all 14 when no preset is selected, otherwise just the configured one.
std::string run_sample_targets(
  const RunConfig & config, const std::string & out, std::ostream & log);

/// Trains the per-agent predictor on the mined pairs and writes the
/// checkpoint.
std::string run_train_marginal(
  const RunConfig & config, const std::string & out, std::ostream & log);

/// Loads the marginal checkpoint (error naming the path when absent), adds
/// the joint and scoring parameters, fine-tunes everything, and writes the
/// combined checkpoint.
std::string run_train_joint(const RunConfig & config, const std::string & out, std::ostream & log);

/// Writes score-sorted pair predictions for every mined pair: the refined
/// joint modes in "joint" mode, the factorized product of the two marginal
/// predictors in "baseline" mode.
std::string run_predict(const RunConfig & config, const std::string & out, std::ostream & log);

/// Scores a prediction file against its scenarios and writes the JSON
/// report {"minADE", "minFDE", "MissRate", "OverlapRate", "mAP"}.
MetricsReport run_evaluate(const RunConfig & config, const std::string & out, std::ostream & log);

/// Renders the first prediction record as an SVG: map in light gray, ground
/// truth dashed, predicted modes solid with endpoint markers.
std::string run_plot(const RunConfig & config, const std::string & out, std::ostream & log);

/// The SVG body used by run_plot. top_k limits how many modes are drawn.
std::string render_svg(
  const Scenario & scenario, const PredictionRecord & record, std::size_t top_k);

/// HEAD commit hash of the surrounding checkout, "unknown" outside a git
/// work tree.
std::string git_revision();

}  // namespace prospectnet

#endif  // PROSPECTNET__PIPELINE_HPP_
