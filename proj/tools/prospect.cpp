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

// Command-line front end. Everything goes through the C API of the shared
// library; this file never touches the C++ core directly.

#include <cstdint>
#include <cstdio>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "prospectnet.h"

namespace
{

struct CommonOpts
{
  std::string config_path;
  std::string out;
  std::optional<std::uint64_t> seed;
  std::optional<int> preset;
  std::optional<double> threshold;
  std::optional<std::size_t> top_k;
  std::optional<std::string> kind;
  std::optional<std::size_t> count;
};

/// Builds the effective config: file (or defaults), then flag overrides.
/// On failure prints a diagnostic and leaves *config NULL.
pn_status build_config(const CommonOpts & opts, const char * threshold_key, pn_config ** config)
{
  *config = nullptr;
  const pn_status created = opts.config_path.empty()
                              ? pn_config_create(config)
                              : pn_config_load(opts.config_path.c_str(), config);
  if (created != PN_OK) {
    std::fprintf(stderr, "error: %s\n", pn_last_error());
    return created;
  }
  pn_status failed = PN_OK;
  const auto apply = [&](const char * key, const std::string & value) {
    if (failed != PN_OK) {
      return;
    }
    const pn_status status = pn_config_set(*config, key, value.c_str());
    if (status != PN_OK) {
      std::fprintf(stderr, "error: %s\n", pn_last_error());
      failed = status;
    }
  };
  if (opts.seed) {
    apply("optimizer.seed", std::to_string(*opts.seed));
  }
  if (opts.preset) {
    apply("model.preset", std::to_string(*opts.preset));
  }
  if (opts.top_k) {
    apply("model.top_k", std::to_string(*opts.top_k));
  }
  if (opts.kind) {
    apply("data.kind", *opts.kind);
  }
  if (opts.count) {
    apply("data.count", std::to_string(*opts.count));
  }
  if (opts.threshold && threshold_key != nullptr) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", *opts.threshold);
    apply(threshold_key, buf);
  }
  if (failed != PN_OK) {
    pn_config_destroy(*config);
    *config = nullptr;
  }
  return failed;
}

using Command = pn_status (*)(const pn_config *, const char *);

int run_command(const CommonOpts & opts, const char * threshold_key, Command command)
{
  pn_config * config = nullptr;
  const pn_status built = build_config(opts, threshold_key, &config);
  if (built != PN_OK) {
    return built;
  }
  const pn_status status = command(config, opts.out.empty() ? nullptr : opts.out.c_str());
  if (status != PN_OK) {
    std::fprintf(stderr, "error: %s\n", pn_last_error());
  }
  pn_config_destroy(config);
  return status;
}

int run_evaluate_command(const CommonOpts & opts)
{
  pn_config * config = nullptr;
  const pn_status built = build_config(opts, "eval.miss_base", &config);
  if (built != PN_OK) {
    return built;
  }
  double metrics[5] = {0, 0, 0, 0, 0};
  const pn_status status =
    pn_evaluate(config, opts.out.empty() ? nullptr : opts.out.c_str(), metrics);
  if (status != PN_OK) {
    std::fprintf(stderr, "error: %s\n", pn_last_error());
  }
  pn_config_destroy(config);
  return status;
}

void add_common(CLI::App * cmd, CommonOpts & opts, bool with_threshold, const char * threshold_help)
{
  cmd->add_option("--config,-c", opts.config_path, "run configuration file (key = value sections)");
  cmd->add_option("--out,-o", opts.out, "output path override");
  cmd->add_option("--seed", opts.seed, "override optimizer.seed");
  cmd->add_option("--preset", opts.preset, "target-sampling preset 1-14 (0 = built-in desk scale)")
    ->check(CLI::Range(0, 14));
  cmd->add_option("--top-k", opts.top_k, "override model.top_k");
  if (with_threshold) {
    cmd->add_option("--threshold", opts.threshold, threshold_help);
  }
}

}  // namespace

int main(int argc, char ** argv)
{
  CLI::App app{"two-agent interactive trajectory prediction pipeline"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(pn_version()));

  CommonOpts opts;
  int exit_code = 0;

  CLI::App * gen = app.add_subcommand("gen-data", "generate synthetic interactive scenarios");
  add_common(gen, opts, false, nullptr);
  gen->add_option(
    "--kind", opts.kind, "scenario family: follow, yield_turn, merge, two_left_turns");
  gen->add_option("--count", opts.count, "number of scenarios to generate");
  gen->callback([&] { exit_code = run_command(opts, nullptr, pn_gen_data); });

  CLI::App * mine = app.add_subcommand("mine-pairs", "mine interactive agent pairs");
  add_common(mine, opts, true, "interaction distance cutoff in meters");
  mine->callback([&] { exit_code = run_command(opts, "data.mining_threshold", pn_mine_pairs); });

  CLI::App * targets = app.add_subcommand("sample-targets", "goal-sampling quality report");
  add_common(targets, opts, false, nullptr);
  targets->callback([&] { exit_code = run_command(opts, nullptr, pn_sample_targets); });

  CLI::App * train_m = app.add_subcommand("train-marginal", "train the per-agent predictor");
  add_common(train_m, opts, false, nullptr);
  train_m->callback([&] { exit_code = run_command(opts, nullptr, pn_train_marginal); });

  CLI::App * train_j =
    app.add_subcommand("train-joint", "fine-tune the conditional stage from the marginal checkpoint");
  add_common(train_j, opts, false, nullptr);
  train_j->callback([&] { exit_code = run_command(opts, nullptr, pn_train_joint); });

  CLI::App * predict = app.add_subcommand("predict", "write joint or baseline pair predictions");
  add_common(predict, opts, false, nullptr);
  predict->callback([&] { exit_code = run_command(opts, nullptr, pn_predict); });

  CLI::App * evaluate = app.add_subcommand("evaluate", "score predictions and write the report");
  add_common(evaluate, opts, true, "miss threshold base in meters before speed scaling");
  evaluate->callback([&] { exit_code = run_evaluate_command(opts); });

  CLI::App * plot = app.add_subcommand("plot", "render the first prediction record as SVG");
  add_common(plot, opts, false, nullptr);
  plot->callback([&] { exit_code = run_command(opts, nullptr, pn_plot); });

  CLI11_PARSE(app, argc, argv);
  return exit_code;
}
