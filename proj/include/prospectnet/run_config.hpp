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

#ifndef PROSPECTNET__RUN_CONFIG_HPP_
#define PROSPECTNET__RUN_CONFIG_HPP_

#include <cstdint>
#include <string>

#include "prospectnet/model_config.hpp"
#include "prospectnet/targets.hpp"

namespace prospectnet
{

/**
 * @file
 * Run configuration for the command pipeline.
 *
 * The on-disk format is plain text: `[section]` headers followed by
 * `key = value` lines, `#` comments, blank lines ignored. Sections are
 * model, optimizer, data, predict, eval, and paths; every key maps onto
 * one field below. serialize_run_config writes the canonical form, and
 * parsing that text back reproduces the config exactly.
 */

struct OptimizerConfig
{
  double learning_rate = 1e-3;
  std::size_t steps = 2000;
  std::uint64_t seed = 7;
};

struct DataConfig
{
  std::string kind = "yield_turn";  // synthetic scenario family
  std::size_t count = 32;
  std::size_t history_len = 10;
  std::size_t background_agents = 0;
  double mining_threshold = 5.0;  // meters, interactive-pair cutoff
};

struct PredictConfig
{
  std::string mode = "joint";  // "joint" or "baseline"
};

struct EvalConfig
{
  double miss_base = 2.0;      // meters before speed scaling
  double iou_threshold = 0.0;  // overlap counts strictly above this
};

struct PathsConfig
{
  std::string scenarios = "data/scenarios.jsonl";
  std::string pairs = "data/pairs.jsonl";
  std::string marginal_checkpoint = "out/marginal.ckpt";
  std::string joint_checkpoint = "out/joint.ckpt";
  std::string predictions = "out/predictions.jsonl";
  std::string report = "out/report.json";
  std::string target_report = "out/targets.json";
  std::string plot = "out/plot.svg";
};

/**
 * @brief Everything one pipeline run needs.
 *
 * preset 0 keeps the desk-scale target parameters embedded in the model
 * config; presets 1 through 14 swap in the corresponding published
 * parameter set wholesale (including its much larger target count). The
 * model.n_targets key tunes only the built-in desk-scale set.
 */
struct RunConfig
{
  ModelConfig model;
  int preset = 0;
  OptimizerConfig optimizer;
  DataConfig data;
  PredictConfig predict;
  EvalConfig eval;
  PathsConfig paths;
};

/// Parses the key=value text. Structural problems (a line that is neither a
/// header, a comment, nor an assignment) raise ParseError with the line
/// number; unknown keys and unconvertible values raise ConfigError.
RunConfig parse_run_config(const std::string & text);

/// Reads and parses a config file. Throws IoError when unreadable.
RunConfig load_run_config(const std::string & path);

/// Canonical text form; parse_run_config round-trips it exactly.
std::string serialize_run_config(const RunConfig & config);

/// Applies one "section.key" assignment, e.g. ("optimizer.seed", "11").
/// Throws ConfigError on unknown keys or bad values.
void set_config_value(RunConfig & config, const std::string & key, const std::string & value);

/// Range checks across all sections. Throws ConfigError.
void validate_run_config(const RunConfig & config);

/// Target parameters the commands should use: the preset table entry when a
/// preset is selected, the built-in desk-scale set otherwise.
TargetParams effective_target_params(const RunConfig & config);

}  // namespace prospectnet

#endif  // PROSPECTNET__RUN_CONFIG_HPP_
