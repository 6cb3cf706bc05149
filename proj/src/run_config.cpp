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

#include "prospectnet/run_config.hpp"

#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <string>

#include "prospectnet/errors.hpp"
#include "prospectnet/synthetic.hpp"

namespace prospectnet
{

namespace
{

std::string trim(const std::string & s)
{
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) {
    return "";
  }
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

double parse_double(const std::string & key, const std::string & value)
{
  std::size_t used = 0;
  double out = 0.0;
  try {
    out = std::stod(value, &used);
  } catch (const std::exception &) {
    throw ConfigError("config key '" + key + "': expected a number, got '" + value + "'");
  }
  if (used != value.size()) {
    throw ConfigError("config key '" + key + "': expected a number, got '" + value + "'");
  }
  return out;
}

std::uint64_t parse_uint(const std::string & key, const std::string & value)
{
  if (!value.empty() && value.front() == '-') {
    throw ConfigError("config key '" + key + "': expected a non-negative integer, got '" + value +
                      "'");
  }
  std::size_t used = 0;
  unsigned long long out = 0;
  try {
    out = std::stoull(value, &used);
  } catch (const std::exception &) {
    throw ConfigError("config key '" + key + "': expected a non-negative integer, got '" + value +
                      "'");
  }
  if (used != value.size()) {
    throw ConfigError("config key '" + key + "': expected a non-negative integer, got '" + value +
                      "'");
  }
  return out;
}

bool parse_bool(const std::string & key, const std::string & value)
{
  if (value == "true" || value == "1") {
    return true;
  }
  if (value == "false" || value == "0") {
    return false;
  }
  throw ConfigError("config key '" + key + "': expected true or false, got '" + value + "'");
}

std::string format_double(double v)
{
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

using Setter = std::function<void(RunConfig &, const std::string &, const std::string &)>;

const std::map<std::string, Setter> & setters()
{
  static const std::map<std::string, Setter> table = {
    {"model.embed_dim",
     [](RunConfig & c, const std::string & k, const std::string & v) {
       c.model.embed_dim = parse_uint(k, v);
     }},
    {"model.gru_hidden",
     [](RunConfig & c, const std::string & k, const std::string & v) {
       c.model.gru_hidden = parse_uint(k, v);
     }},
    {"model.n_candidates",
     [](RunConfig & c, const std::string & k, const std::string & v) {
       c.model.n_candidates = parse_uint(k, v);
     }},
    {"model.top_k",
     [](RunConfig & c, const std::string & k, const std::string & v) {
       c.model.top_k = parse_uint(k, v);
     }},
    {"model.q_stack",
     [](RunConfig & c, const std::string & k, const std::string & v) {
       c.model.q_stack = parse_uint(k, v);
     }},
    {"model.alpha",
     [](RunConfig & c, const std::string & k, const std::string & v) {
       c.model.alpha = parse_double(k, v);
     }},
    {"model.nms_eps0",
     [](RunConfig & c, const std::string & k, const std::string & v) {
       c.model.nms_eps0 = parse_double(k, v);
     }},
    {"model.nms_gamma",
     [](RunConfig & c, const std::string & k, const std::string & v) {
       c.model.nms_gamma = parse_double(k, v);
     }},
    {"model.huber_delta",
     [](RunConfig & c, const std::string & k, const std::string & v) {
       c.model.huber_delta = parse_double(k, v);
     }},
    {"model.encode_radius",
     [](RunConfig & c, const std::string & k, const std::string & v) {
       c.model.encode_radius = parse_double(k, v);
     }},
    {"model.max_map_tokens",
     [](RunConfig & c, const std::string & k, const std::string & v) {
       c.model.max_map_tokens = parse_uint(k, v);
     }},
    {"model.history_in_keys",
     [](RunConfig & c, const std::string & k, const std::string & v) {
       c.model.history_in_keys = parse_bool(k, v);
     }},
    {"model.horizon",
     [](RunConfig & c, const std::string & k, const std::string & v) {
       c.model.horizon = parse_uint(k, v);
     }},
    {"model.dt",
     [](RunConfig & c, const std::string & k, const std::string & v) {
       c.model.dt = parse_double(k, v);
     }},
    {"model.n_targets",
     [](RunConfig & c, const std::string & k, const std::string & v) {
       c.model.targets.n_targets = parse_uint(k, v);
     }},
    {"model.preset",
     [](RunConfig & c, const std::string & k, const std::string & v) {
       c.preset = static_cast<int>(parse_uint(k, v));
     }},
    {"optimizer.learning_rate",
     [](RunConfig & c, const std::string & k, const std::string & v) {
       c.optimizer.learning_rate = parse_double(k, v);
     }},
    {"optimizer.steps",
     [](RunConfig & c, const std::string & k, const std::string & v) {
       c.optimizer.steps = parse_uint(k, v);
     }},
    {"optimizer.seed",
     [](RunConfig & c, const std::string & k, const std::string & v) {
       c.optimizer.seed = parse_uint(k, v);
     }},
    {"data.kind",
     [](RunConfig & c, const std::string &, const std::string & v) { c.data.kind = v; }},
    {"data.count",
     [](RunConfig & c, const std::string & k, const std::string & v) {
       c.data.count = parse_uint(k, v);
     }},
    {"data.history_len",
     [](RunConfig & c, const std::string & k, const std::string & v) {
       c.data.history_len = parse_uint(k, v);
     }},
    {"data.background_agents",
     [](RunConfig & c, const std::string & k, const std::string & v) {
       c.data.background_agents = parse_uint(k, v);
     }},
    {"data.mining_threshold",
     [](RunConfig & c, const std::string & k, const std::string & v) {
       c.data.mining_threshold = parse_double(k, v);
     }},
    {"predict.mode",
     [](RunConfig & c, const std::string &, const std::string & v) { c.predict.mode = v; }},
    {"eval.miss_base",
     [](RunConfig & c, const std::string & k, const std::string & v) {
       c.eval.miss_base = parse_double(k, v);
     }},
    {"eval.iou_threshold",
     [](RunConfig & c, const std::string & k, const std::string & v) {
       c.eval.iou_threshold = parse_double(k, v);
     }},
    {"paths.scenarios",
     [](RunConfig & c, const std::string &, const std::string & v) { c.paths.scenarios = v; }},
    {"paths.pairs",
     [](RunConfig & c, const std::string &, const std::string & v) { c.paths.pairs = v; }},
    {"paths.marginal_checkpoint",
     [](RunConfig & c, const std::string &, const std::string & v) {
       c.paths.marginal_checkpoint = v;
     }},
    {"paths.joint_checkpoint",
     [](RunConfig & c, const std::string &, const std::string & v) {
       c.paths.joint_checkpoint = v;
     }},
    {"paths.predictions",
     [](RunConfig & c, const std::string &, const std::string & v) { c.paths.predictions = v; }},
    {"paths.report",
     [](RunConfig & c, const std::string &, const std::string & v) { c.paths.report = v; }},
    {"paths.target_report",
     [](RunConfig & c, const std::string &, const std::string & v) { c.paths.target_report = v; }},
    {"paths.plot",
     [](RunConfig & c, const std::string &, const std::string & v) { c.paths.plot = v; }},
  };
  return table;
}

}  // namespace

void set_config_value(RunConfig & config, const std::string & key, const std::string & value)
{
  const auto & table = setters();
  const auto it = table.find(key);
  if (it == table.end()) {
    throw ConfigError("unknown configuration key '" + key + "'");
  }
  it->second(config, key, value);
}

RunConfig parse_run_config(const std::string & text)
{
  RunConfig config;
  std::istringstream in(text);
  std::string line;
  std::string section;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) {
      line.resize(hash);
    }
    line = trim(line);
    if (line.empty()) {
      continue;
    }
    if (line.front() == '[') {
      if (line.back() != ']' || line.size() < 3) {
        throw ParseError("config line " + std::to_string(line_no) + ": malformed section header");
      }
      section = trim(line.substr(1, line.size() - 2));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ParseError("config line " + std::to_string(line_no) + ": expected key = value");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) {
      throw ParseError("config line " + std::to_string(line_no) + ": empty key");
    }
    if (section.empty()) {
      throw ParseError("config line " + std::to_string(line_no) + ": assignment before any [section]");
    }
    set_config_value(config, section + "." + key, value);
  }
  return config;
}

RunConfig load_run_config(const std::string & path)
{
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw IoError("cannot read config file '" + path + "'");
  }
  std::ostringstream text;
  text << in.rdbuf();
  return parse_run_config(text.str());
}

std::string serialize_run_config(const RunConfig & c)
{
  std::ostringstream out;
  out << "[model]\n";
  out << "embed_dim = " << c.model.embed_dim << "\n";
  out << "gru_hidden = " << c.model.gru_hidden << "\n";
  out << "n_candidates = " << c.model.n_candidates << "\n";
  out << "top_k = " << c.model.top_k << "\n";
  out << "q_stack = " << c.model.q_stack << "\n";
  out << "alpha = " << format_double(c.model.alpha) << "\n";
  out << "nms_eps0 = " << format_double(c.model.nms_eps0) << "\n";
  out << "nms_gamma = " << format_double(c.model.nms_gamma) << "\n";
  out << "huber_delta = " << format_double(c.model.huber_delta) << "\n";
  out << "encode_radius = " << format_double(c.model.encode_radius) << "\n";
  out << "max_map_tokens = " << c.model.max_map_tokens << "\n";
  out << "history_in_keys = " << (c.model.history_in_keys ? "true" : "false") << "\n";
  out << "horizon = " << c.model.horizon << "\n";
  out << "dt = " << format_double(c.model.dt) << "\n";
  out << "n_targets = " << c.model.targets.n_targets << "\n";
  out << "preset = " << c.preset << "\n";
  out << "\n[optimizer]\n";
  out << "learning_rate = " << format_double(c.optimizer.learning_rate) << "\n";
  out << "steps = " << c.optimizer.steps << "\n";
  out << "seed = " << c.optimizer.seed << "\n";
  out << "\n[data]\n";
  out << "kind = " << c.data.kind << "\n";
  out << "count = " << c.data.count << "\n";
  out << "history_len = " << c.data.history_len << "\n";
  out << "background_agents = " << c.data.background_agents << "\n";
  out << "mining_threshold = " << format_double(c.data.mining_threshold) << "\n";
  out << "\n[predict]\n";
  out << "mode = " << c.predict.mode << "\n";
  out << "\n[eval]\n";
  out << "miss_base = " << format_double(c.eval.miss_base) << "\n";
  out << "iou_threshold = " << format_double(c.eval.iou_threshold) << "\n";
  out << "\n[paths]\n";
  out << "scenarios = " << c.paths.scenarios << "\n";
  out << "pairs = " << c.paths.pairs << "\n";
  out << "marginal_checkpoint = " << c.paths.marginal_checkpoint << "\n";
  out << "joint_checkpoint = " << c.paths.joint_checkpoint << "\n";
  out << "predictions = " << c.paths.predictions << "\n";
  out << "report = " << c.paths.report << "\n";
  out << "target_report = " << c.paths.target_report << "\n";
  out << "plot = " << c.paths.plot << "\n";
  return out.str();
}

TargetParams effective_target_params(const RunConfig & config)
{
  if (config.preset == 0) {
    return config.model.targets;
  }
  return preset_params(config.preset);
}

void validate_run_config(const RunConfig & config)
{
  if (config.preset < 0 || config.preset > 14) {
    throw ConfigError("preset must be 0 (built-in desk scale) or 1 through 14, got " +
                      std::to_string(config.preset));
  }
  ModelConfig effective = config.model;
  effective.targets = effective_target_params(config);
  validate_config(effective);
  if (!(config.optimizer.learning_rate > 0.0)) {
    throw ConfigError("learning_rate must be positive");
  }
  if (config.optimizer.steps == 0) {
    throw ConfigError("steps must be positive");
  }
  scenario_kind_from_string(config.data.kind);
  if (config.data.count == 0) {
    throw ConfigError("data count must be positive");
  }
  if (config.data.history_len < 2) {
    throw ConfigError("history_len must be at least 2");
  }
  if (!(config.data.mining_threshold > 0.0)) {
    throw ConfigError("mining_threshold must be positive");
  }
  if (config.predict.mode != "joint" && config.predict.mode != "baseline") {
    throw ConfigError("predict mode must be 'joint' or 'baseline', got '" + config.predict.mode +
                      "'");
  }
  if (!(config.eval.miss_base > 0.0)) {
    throw ConfigError("miss_base must be positive");
  }
  if (config.eval.iou_threshold < 0.0 || config.eval.iou_threshold >= 1.0) {
    throw ConfigError("iou_threshold must be in [0, 1)");
  }
}

}  // namespace prospectnet
