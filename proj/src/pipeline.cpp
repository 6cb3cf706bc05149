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

#include "prospectnet/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <fstream>
#include <functional>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>
#include <unordered_map>

#include <nlohmann/json.hpp>

#include "prospectnet/errors.hpp"
#include "prospectnet/joint.hpp"
#include "prospectnet/marginal.hpp"
#include "prospectnet/mining.hpp"
#include "prospectnet/nn.hpp"
#include "prospectnet/pair_scorer.hpp"
#include "prospectnet/param_store.hpp"
#include "prospectnet/scenario_io.hpp"
#include "prospectnet/synthetic.hpp"

namespace prospectnet
{

namespace
{

namespace fs = std::filesystem;
using nlohmann::json;

std::uint64_t fnv1a(const std::string & s)
{
  std::uint64_t hash = 1469598103934665603ULL;
  for (const char c : s) {
    hash ^= static_cast<unsigned char>(c);
    hash *= 1099511628211ULL;
  }
  return hash;
}

std::string resolve(const std::string & override_path, const std::string & fallback)
{
  return override_path.empty() ? fallback : override_path;
}

void ensure_parent_dir(const std::string & path)
{
  const fs::path parent = fs::path(path).parent_path();
  if (!parent.empty()) {
    fs::create_directories(parent);
  }
}

void write_text_file(const std::string & path, const std::string & content)
{
  ensure_parent_dir(path);
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw IoError("cannot write '" + path + "'");
  }
  out << content;
  if (!out) {
    throw IoError("write to '" + path + "' failed");
  }
}

void write_manifest(const RunConfig & config, const std::string & command, const std::string & out)
{
  const json manifest{
    {"command", command},
    {"git_revision", git_revision()},
    {"seed", config.optimizer.seed},
    {"out", out},
    {"config", serialize_run_config(config)},
  };
  write_text_file(out + ".manifest.json", manifest.dump(2) + "\n");
}

ModelConfig effective_model(const RunConfig & config)
{
  ModelConfig model = config.model;
  model.targets = effective_target_params(config);
  return model;
}

void parallel_for(std::size_t n, const std::function<void(std::size_t)> & fn)
{
  const std::size_t workers = worker_count(n);
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) {
      fn(i);
    }
    return;
  }
  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::mutex error_mutex;
  std::exception_ptr first_error;
  const auto body = [&]() {
    while (!failed.load()) {
      const std::size_t i = next.fetch_add(1);
      if (i >= n) {
        return;
      }
      try {
        fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_error) {
          first_error = std::current_exception();
        }
        failed.store(true);
      }
    }
  };
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back(body);
  }
  for (std::thread & t : pool) {
    t.join();
  }
  if (first_error) {
    std::rethrow_exception(first_error);
  }
}

std::vector<Scenario> load_scenarios(const std::string & path)
{
  if (!fs::exists(path)) {
    throw IoError("scenario file not found at '" + path + "'; run gen-data first");
  }
  return read_scenarios(path);
}

std::vector<MinedPair> load_pairs(const std::string & path)
{
  if (!fs::exists(path)) {
    throw IoError("pairs file not found at '" + path + "'; run mine-pairs first");
  }
  const std::vector<MinedPair> pairs = read_pairs_file(path);
  if (pairs.empty()) {
    throw ValidationError("pairs file '" + path + "' holds no interactive pairs");
  }
  return pairs;
}

TargetSet agent_targets(
  const Scenario & scenario, const std::string & agent_id, const ModelConfig & model,
  std::uint64_t seed)
{
  const AgentTrack & track = find_track(scenario, agent_id);
  const Frame frame = agent_frame(track, scenario.history_len);
  std::vector<Vec2> other_centers;
  for (const AgentTrack & other : scenario.tracks) {
    if (other.agent_id != agent_id) {
      other_centers.push_back(other.positions[scenario.history_len - 1]);
    }
  }
  return sample_targets(
    scenario.map, frame, model.targets, other_centers,
    seed ^ fnv1a(scenario.id + "/" + agent_id));
}

/// One training or prediction unit: a mined pair with its frames and
/// pre-sampled target sets.
struct PairTask
{
  const Scenario * scenario = nullptr;
  std::string agent_a;
  std::string agent_b;
  Frame frame_a;
  Frame frame_b;
  TargetSet targets_a;
  TargetSet targets_b;
};

std::vector<PairTask> build_tasks(
  const std::vector<Scenario> & scenarios, const std::vector<MinedPair> & pairs,
  const ModelConfig & model, std::uint64_t seed)
{
  std::unordered_map<std::string, const Scenario *> by_id;
  for (const Scenario & s : scenarios) {
    by_id.emplace(s.id, &s);
  }
  std::vector<PairTask> tasks(pairs.size());
  parallel_for(pairs.size(), [&](std::size_t i) {
    const MinedPair & pair = pairs[i];
    const auto found = by_id.find(pair.scenario_id);
    if (found == by_id.end()) {
      throw NotFoundError("pairs file references unknown scenario '" + pair.scenario_id + "'");
    }
    const Scenario & scenario = *found->second;
    if (scenario.horizon != model.horizon) {
      throw ConfigError(
        "scenario '" + scenario.id + "' horizon " + std::to_string(scenario.horizon) +
        " does not match the model horizon " + std::to_string(model.horizon));
    }
    PairTask task;
    task.scenario = &scenario;
    task.agent_a = pair.agent_a;
    task.agent_b = pair.agent_b;
    task.frame_a = agent_frame(find_track(scenario, pair.agent_a), scenario.history_len);
    task.frame_b = agent_frame(find_track(scenario, pair.agent_b), scenario.history_len);
    task.targets_a = agent_targets(scenario, pair.agent_a, model, seed);
    task.targets_b = agent_targets(scenario, pair.agent_b, model, seed);
    if (task.targets_a.points.empty() || task.targets_b.points.empty()) {
      throw ValidationError(
        "no goal targets survive sampling for pair " + pair.agent_a + "/" + pair.agent_b +
        " in scenario '" + scenario.id + "'");
    }
    tasks[i] = std::move(task);
  });
  return tasks;
}

std::vector<Vec2> tensor_to_traj(const Tensor & t)
{
  std::vector<Vec2> out(t.rows());
  for (std::size_t r = 0; r < t.rows(); ++r) {
    out[r] = Vec2{t.at(r, 0), t.at(r, 1)};
  }
  return out;
}

std::vector<double> future_headings(const AgentTrack & track, std::size_t history_len)
{
  return std::vector<double>(track.headings.begin() + history_len, track.headings.end());
}

std::string format_metric(double v)
{
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.4f", v);
  return buf;
}

void log_progress(
  std::ostream & log, const char * command, std::size_t step, std::size_t steps, double loss)
{
  const std::size_t interval = std::max<std::size_t>(1, steps / 10);
  if ((step + 1) % interval == 0 || step + 1 == steps) {
    log << command << ": step " << (step + 1) << "/" << steps << " loss "
        << format_metric(loss) << "\n";
  }
}

/// Joint training objective for one pair: both agents' goal and regression
/// losses from the conditionally updated latents plus the pair-scoring cross
/// entropy against the distance-softmax target.
Var joint_step_loss_t(Tape & tape, const PairTask & task, const ModelConfig & model)
{
  const Scenario & scenario = *task.scenario;
  const EncoderVars enc_a = encode_context_t(tape, scenario, task.agent_a, model);
  const EncoderVars enc_b = encode_context_t(tape, scenario, task.agent_b, model);

  JointAgentInputs in_a;
  in_a.h = enc_a.h;
  in_a.m = enc_a.m;
  in_a.c = enc_a.c;
  in_a.candidates = select_candidates_t(tape, pooled_latent(tape, enc_a.h), task.targets_a, model);
  in_a.frame = task.frame_a;
  in_a.targets = &task.targets_a;

  JointAgentInputs in_b;
  in_b.h = enc_b.h;
  in_b.m = enc_b.m;
  in_b.c = enc_b.c;
  in_b.candidates = select_candidates_t(tape, pooled_latent(tape, enc_b.h), task.targets_b, model);
  in_b.frame = task.frame_b;
  in_b.targets = &task.targets_b;

  const JointProcessResult joint = joint_learning_process(tape, in_a, in_b, model);
  const MarginalLossVars loss_a =
    marginal_loss_from_latent_t(tape, joint.h_a, scenario, task.agent_a, task.targets_a, model);
  const MarginalLossVars loss_b =
    marginal_loss_from_latent_t(tape, joint.h_b, scenario, task.agent_b, task.targets_b, model);

  const CandidateVars out_a =
    select_candidates_t(tape, pooled_latent(tape, joint.h_a), task.targets_a, model);
  const CandidateVars out_b =
    select_candidates_t(tape, pooled_latent(tape, joint.h_b), task.targets_b, model);

  std::vector<Var> aligned_b;
  aligned_b.reserve(out_b.trajectories.size());
  for (const Var & traj : out_b.trajectories) {
    aligned_b.push_back(align_candidates_t(tape, {traj}, task.frame_b, task.frame_a));
  }
  const Var scores = score_pairs_t(tape, out_a.trajectories, joint.h_a, aligned_b, joint.h_b);

  const AgentTrack & track_a = find_track(scenario, task.agent_a);
  const AgentTrack & track_b = find_track(scenario, task.agent_b);
  TrajectoryPair gt;
  gt.traj_a = to_frame(future_positions(track_a, scenario.history_len), task.frame_a);
  gt.traj_b = to_frame(future_positions(track_b, scenario.history_len), task.frame_a);

  std::vector<TrajectoryPair> value_pairs;
  value_pairs.reserve(out_a.trajectories.size() * aligned_b.size());
  for (const Var & ta : out_a.trajectories) {
    for (const Var & tb : aligned_b) {
      value_pairs.push_back(TrajectoryPair{tensor_to_traj(ta.value()), tensor_to_traj(tb.value())});
    }
  }
  const std::vector<double> dist = gt_pair_distribution(value_pairs, gt, model.alpha);

  return tape.add(tape.add(loss_a.total, loss_b.total), scoring_loss_t(tape, scores, dist));
}

void check_marginal_checkpoint(
  const ParameterStore & store, const std::string & path, const ModelConfig & model)
{
  if (!store.has("enc.attn.wq")) {
    throw ConfigError("'" + path + "' does not look like a model checkpoint");
  }
  if (store.value("enc.attn.wq").rows() != model.embed_dim) {
    throw ConfigError(
      "checkpoint '" + path + "' was trained with embed_dim " +
      std::to_string(store.value("enc.attn.wq").rows()) + ", config says " +
      std::to_string(model.embed_dim));
  }
}

}  // namespace

std::size_t worker_count(std::size_t jobs)
{
  if (jobs <= 1) {
    return 1;
  }
  std::size_t n = std::thread::hardware_concurrency();
  if (n == 0) {
    n = 1;
  }
  if (const char * env = std::getenv("PROSPECTNET_THREADS")) {
    char * end = nullptr;
    const unsigned long long cap = std::strtoull(env, &end, 10);
    if (end != env && *end == '\0' && cap > 0) {
      n = std::min<std::size_t>(n, cap);
    }
  }
  return std::clamp<std::size_t>(n, 1, jobs);
}

std::string git_revision()
{
  FILE * pipe = popen("git rev-parse HEAD 2>/dev/null", "r");
  if (pipe == nullptr) {
    return "unknown";
  }
  char buf[256];
  std::string out;
  while (fgets(buf, sizeof(buf), pipe) != nullptr) {
    out += buf;
  }
  const int rc = pclose(pipe);
  while (!out.empty() && (out.back() == '\n' || out.back() == '\r')) {
    out.pop_back();
  }
  if (rc != 0 || out.size() < 7) {
    return "unknown";
  }
  return out;
}

std::vector<MinedPair> read_pairs_file(const std::string & path)
{
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw IoError("cannot read pairs file '" + path + "'");
  }
  std::vector<MinedPair> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) {
      continue;
    }
    try {
      const json j = json::parse(line);
      MinedPair pair;
      pair.scenario_id = j.at("scenario_id").get<std::string>();
      pair.agent_a = j.at("agent_a").get<std::string>();
      pair.agent_b = j.at("agent_b").get<std::string>();
      if (pair.scenario_id.empty() || pair.agent_a.empty() || pair.agent_b.empty() ||
          pair.agent_a == pair.agent_b) {
        throw ValidationError(
          "pairs file '" + path + "' line " + std::to_string(line_no) + ": invalid pair entry");
      }
      out.push_back(std::move(pair));
    } catch (const json::exception & e) {
      throw ParseError(
        "pairs file '" + path + "' line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return out;
}

void write_pairs_file(const std::string & path, const std::vector<MinedPair> & pairs)
{
  std::ostringstream out;
  for (const MinedPair & pair : pairs) {
    out << json{{"scenario_id", pair.scenario_id},
                {"agent_a", pair.agent_a},
                {"agent_b", pair.agent_b}}
             .dump()
        << "\n";
  }
  write_text_file(path, out.str());
}

std::string run_gen_data(const RunConfig & config, const std::string & out, std::ostream & log)
{
  validate_run_config(config);
  const std::string path = resolve(out, config.paths.scenarios);
  const ScenarioKind kind = scenario_kind_from_string(config.data.kind);

  SyntheticParams params;
  params.history_len = config.data.history_len;
  params.horizon = config.model.horizon;
  params.dt = config.model.dt;
  params.background_agents = config.data.background_agents;

  std::vector<Scenario> scenarios(config.data.count);
  parallel_for(config.data.count, [&](std::size_t i) {
    scenarios[i] = generate_synthetic(kind, config.optimizer.seed + i, params);
  });

  ensure_parent_dir(path);
  write_scenarios(path, scenarios);
  log << "gen-data: wrote " << scenarios.size() << " " << config.data.kind << " scenarios to "
      << path << "\n";
  write_manifest(config, "gen-data", path);
  return path;
}

std::string run_mine_pairs(const RunConfig & config, const std::string & out, std::ostream & log)
{
  validate_run_config(config);
  const std::string path = resolve(out, config.paths.pairs);
  const std::vector<Scenario> scenarios = load_scenarios(config.paths.scenarios);

  std::vector<std::vector<MinedPair>> per_scenario(scenarios.size());
  parallel_for(scenarios.size(), [&](std::size_t i) {
    for (const auto & [a, b] : mine_interactive_pairs(scenarios[i], config.data.mining_threshold)) {
      per_scenario[i].push_back(MinedPair{scenarios[i].id, a, b});
    }
  });
  std::vector<MinedPair> pairs;
  for (const auto & chunk : per_scenario) {
    pairs.insert(pairs.end(), chunk.begin(), chunk.end());
  }

  write_pairs_file(path, pairs);
  log << "mine-pairs: " << pairs.size() << " interactive pairs from " << scenarios.size()
      << " scenarios (threshold " << format_metric(config.data.mining_threshold) << " m) to "
      << path << "\n";
  write_manifest(config, "mine-pairs", path);
  return path;
}

std::string run_sample_targets(
  const RunConfig & config, const std::string & out, std::ostream & log)
{
  validate_run_config(config);
  const std::string path = resolve(out, config.paths.target_report);
  const std::vector<Scenario> scenarios = load_scenarios(config.paths.scenarios);

  std::vector<int> presets;
  if (config.preset == 0) {
    for (int p = 1; p <= 14; ++p) {
      presets.push_back(p);
    }
  } else {
    presets.push_back(config.preset);
  }
  std::vector<TargetParams> params_list;
  params_list.reserve(presets.size());
  for (const int p : presets) {
    params_list.push_back(preset_params(p));
  }

  const auto stats = bmd_report(scenarios, params_list, config.optimizer.seed);

  json entries = json::array();
  for (std::size_t i = 0; i < presets.size(); ++i) {
    const TargetParams & p = params_list[i];
    const auto agent_json = [](const BmdStats & s) {
      return json{{"mean", s.mean}, {"median", s.median}, {"p75", s.p75}, {"p90", s.p90}};
    };
    entries.push_back(json{
      {"preset", presets[i]},
      {"n_targets", p.n_targets},
      {"x_range", {p.x_min, p.x_max}},
      {"y_range", {p.y_min, p.y_max}},
      {"lane_radius", p.lane_radius},
      {"object_radius", p.object_radius},
      {"agent_a", agent_json(stats[i][0])},
      {"agent_b", agent_json(stats[i][1])},
    });
    log << "sample-targets: preset " << presets[i] << " mean BMD "
        << format_metric(stats[i][0].mean) << " / " << format_metric(stats[i][1].mean) << " m\n";
  }

  const json report{{"scenarios", scenarios.size()}, {"presets", entries}};
  write_text_file(path, report.dump(2) + "\n");
  write_manifest(config, "sample-targets", path);
  return path;
}

std::string run_train_marginal(
  const RunConfig & config, const std::string & out, std::ostream & log)
{
  validate_run_config(config);
  const std::string path = resolve(out, config.paths.marginal_checkpoint);
  const ModelConfig model = effective_model(config);
  const std::vector<Scenario> scenarios = load_scenarios(config.paths.scenarios);
  const std::vector<MinedPair> pairs = load_pairs(config.paths.pairs);
  const std::vector<PairTask> tasks =
    build_tasks(scenarios, pairs, model, config.optimizer.seed);

  ParameterStore store;
  std::mt19937_64 rng(config.optimizer.seed);
  init_marginal_params(store, model, rng);
  AdamOptimizer adam(config.optimizer.learning_rate);

  const std::size_t steps = config.optimizer.steps;
  for (std::size_t step = 0; step < steps; ++step) {
    const PairTask & task = tasks[step % tasks.size()];
    Tape tape(&store);
    const MarginalLossVars loss_a =
      marginal_loss_t(tape, *task.scenario, task.agent_a, task.targets_a, model);
    const MarginalLossVars loss_b =
      marginal_loss_t(tape, *task.scenario, task.agent_b, task.targets_b, model);
    const Var total = tape.add(loss_a.total, loss_b.total);
    tape.backward(total);
    adam.step(store);
    log_progress(log, "train-marginal", step, steps, total.value().at(0, 0));
  }

  ensure_parent_dir(path);
  store.save(path);
  log << "train-marginal: saved checkpoint (" << store.scalar_count() << " scalars) to " << path
      << "\n";
  write_manifest(config, "train-marginal", path);
  return path;
}

std::string run_train_joint(const RunConfig & config, const std::string & out, std::ostream & log)
{
  validate_run_config(config);
  const std::string path = resolve(out, config.paths.joint_checkpoint);
  const ModelConfig model = effective_model(config);
  const std::vector<Scenario> scenarios = load_scenarios(config.paths.scenarios);
  const std::vector<MinedPair> pairs = load_pairs(config.paths.pairs);
  const std::vector<PairTask> tasks =
    build_tasks(scenarios, pairs, model, config.optimizer.seed);

  const std::string & marginal_path = config.paths.marginal_checkpoint;
  if (!fs::exists(marginal_path)) {
    throw NotFoundError(
      "marginal checkpoint not found at '" + marginal_path + "'; run train-marginal first");
  }
  ParameterStore store;
  store.load(marginal_path);
  check_marginal_checkpoint(store, marginal_path, model);

  std::mt19937_64 rng(config.optimizer.seed + 1);
  init_joint_params(store, model, rng);
  init_pair_params(store, model, rng);
  AdamOptimizer adam(config.optimizer.learning_rate);

  const std::size_t steps = config.optimizer.steps;
  for (std::size_t step = 0; step < steps; ++step) {
    const PairTask & task = tasks[step % tasks.size()];
    Tape tape(&store);
    const Var loss = joint_step_loss_t(tape, task, model);
    tape.backward(loss);
    adam.step(store);
    log_progress(log, "train-joint", step, steps, loss.value().at(0, 0));
  }

  ensure_parent_dir(path);
  store.save(path);
  log << "train-joint: saved checkpoint (" << store.scalar_count() << " scalars) to " << path
      << "\n";
  write_manifest(config, "train-joint", path);
  return path;
}

std::string run_predict(const RunConfig & config, const std::string & out, std::ostream & log)
{
  validate_run_config(config);
  const std::string path = resolve(out, config.paths.predictions);
  const ModelConfig model = effective_model(config);
  const std::vector<Scenario> scenarios = load_scenarios(config.paths.scenarios);
  const std::vector<MinedPair> pairs = load_pairs(config.paths.pairs);
  const std::vector<PairTask> tasks =
    build_tasks(scenarios, pairs, model, config.optimizer.seed);

  const bool joint = config.predict.mode == "joint";
  const std::string & ckpt =
    joint ? config.paths.joint_checkpoint : config.paths.marginal_checkpoint;
  if (!fs::exists(ckpt)) {
    throw NotFoundError(
      "checkpoint not found at '" + ckpt + "'; run train-" +
      (joint ? std::string("joint") : std::string("marginal")) + " first");
  }
  ParameterStore store;
  store.load(ckpt);
  check_marginal_checkpoint(store, ckpt, model);
  if (joint && !store.has("joint.attn.wq")) {
    throw ConfigError("'" + ckpt + "' lacks joint-stage parameters; run train-joint");
  }

  std::vector<PredictionRecord> records(tasks.size());
  for (std::size_t i = 0; i < tasks.size(); ++i) {
    const PairTask & task = tasks[i];
    PredictionRecord record;
    record.scenario_id = task.scenario->id;
    record.agent_a = task.agent_a;
    record.agent_b = task.agent_b;

    if (joint) {
      const JointPrediction jp = joint_predict(
        *task.scenario, task.agent_a, task.agent_b, store, task.targets_a, task.targets_b, model);
      CandidateSet b_in_a = jp.candidates_b;
      for (auto & traj : b_in_a.trajectories) {
        traj = to_frame(from_frame(traj, task.frame_b), task.frame_a);
      }
      const ScoredPairSet scored =
        score_pairs(jp.candidates_a, jp.latent_a, b_in_a, jp.latent_b, store, true);
      const std::size_t k = std::min<std::size_t>(model.top_k, scored.pairs.size());
      record.pairs =
        select_topk_pairs(scored.pairs, scored.scores, k, model.nms_eps0, model.nms_gamma);
      for (PairPrediction & p : record.pairs) {
        p.traj_a = from_frame(p.traj_a, task.frame_a);
        p.traj_b = from_frame(p.traj_b, task.frame_a);
      }
    } else {
      const MarginalPrediction pa =
        marginal_predict(*task.scenario, task.agent_a, store, task.targets_a, model);
      const MarginalPrediction pb =
        marginal_predict(*task.scenario, task.agent_b, store, task.targets_b, model);
      record.pairs = cartesian_baseline(pa.candidates, pb.candidates, model.top_k);
      for (PairPrediction & p : record.pairs) {
        p.traj_a = from_frame(p.traj_a, task.frame_a);
        p.traj_b = from_frame(p.traj_b, task.frame_b);
      }
    }
    records[i] = std::move(record);
  }

  ensure_parent_dir(path);
  write_predictions(path, records);
  log << "predict: " << records.size() << " records (" << (joint ? "joint" : "baseline")
      << " mode) to " << path << "\n";
  write_manifest(config, "predict", path);
  return path;
}

MetricsReport run_evaluate(const RunConfig & config, const std::string & out, std::ostream & log)
{
  validate_run_config(config);
  const std::string path = resolve(out, config.paths.report);
  const ModelConfig model = effective_model(config);
  const std::vector<Scenario> scenarios = load_scenarios(config.paths.scenarios);
  if (!fs::exists(config.paths.predictions)) {
    throw IoError(
      "prediction file not found at '" + config.paths.predictions + "'; run predict first");
  }
  const std::vector<PredictionRecord> predictions = read_predictions(config.paths.predictions);

  std::unordered_map<std::string, const Scenario *> by_id;
  for (const Scenario & s : scenarios) {
    by_id.emplace(s.id, &s);
  }

  std::vector<EvalRecord> records(predictions.size());
  parallel_for(predictions.size(), [&](std::size_t i) {
    const PredictionRecord & pred = predictions[i];
    const auto found = by_id.find(pred.scenario_id);
    if (found == by_id.end()) {
      throw NotFoundError("predictions reference unknown scenario '" + pred.scenario_id + "'");
    }
    const Scenario & scenario = *found->second;
    const AgentTrack & track_a = find_track(scenario, pred.agent_a);
    const AgentTrack & track_b = find_track(scenario, pred.agent_b);

    EvalRecord record;
    record.pairs = pred.pairs;
    record.gt.traj_a = future_positions(track_a, scenario.history_len);
    record.gt.traj_b = future_positions(track_b, scenario.history_len);
    record.gt_headings_a = future_headings(track_a, scenario.history_len);
    record.gt_headings_b = future_headings(track_b, scenario.history_len);
    record.shape_a = AgentShape{track_a.length, track_a.width};
    record.shape_b = AgentShape{track_b.length, track_b.width};
    record.speed_a = current_speed(track_a, scenario.history_len, model.dt);
    record.speed_b = current_speed(track_b, scenario.history_len, model.dt);
    for (const AgentTrack & other : scenario.tracks) {
      if (other.agent_id == pred.agent_a || other.agent_id == pred.agent_b) {
        continue;
      }
      record.others.push_back(OtherAgentFuture{
        future_positions(other, scenario.history_len),
        future_headings(other, scenario.history_len),
        AgentShape{other.length, other.width}});
    }
    records[i] = std::move(record);
  });

  const MetricsReport report =
    evaluate_records(records, config.eval.miss_base, config.eval.iou_threshold);
  const json j{
    {"minADE", report.min_ade},
    {"minFDE", report.min_fde},
    {"MissRate", report.miss_rate},
    {"OverlapRate", report.overlap_rate},
    {"mAP", report.map},
  };
  write_text_file(path, j.dump(2) + "\n");
  log << "evaluate: " << records.size() << " records  minADE=" << format_metric(report.min_ade)
      << " minFDE=" << format_metric(report.min_fde)
      << " MissRate=" << format_metric(report.miss_rate)
      << " OverlapRate=" << format_metric(report.overlap_rate)
      << " mAP=" << format_metric(report.map) << "\n";
  write_manifest(config, "evaluate", path);
  return report;
}

namespace
{

struct SvgMapper
{
  double min_x = 0.0;
  double max_y = 0.0;
  double scale = 1.0;
  double width = 0.0;
  double height = 0.0;

  double x(double wx) const { return (wx - min_x) * scale; }
  double y(double wy) const { return (max_y - wy) * scale; }
};

std::string svg_points(const SvgMapper & m, const std::vector<Vec2> & pts)
{
  std::ostringstream out;
  char buf[64];
  for (std::size_t i = 0; i < pts.size(); ++i) {
    std::snprintf(buf, sizeof(buf), "%.2f,%.2f", m.x(pts[i].x), m.y(pts[i].y));
    out << (i == 0 ? "" : " ") << buf;
  }
  return out.str();
}

void svg_polyline(
  std::ostringstream & out, const SvgMapper & m, const std::vector<Vec2> & pts,
  const std::string & stroke, double stroke_width, double opacity, bool dashed)
{
  if (pts.empty()) {
    return;
  }
  out << "  <polyline fill=\"none\" stroke=\"" << stroke << "\" stroke-width=\"" << stroke_width
      << "\" stroke-opacity=\"" << opacity << "\"";
  if (dashed) {
    out << " stroke-dasharray=\"7 5\"";
  }
  out << " points=\"" << svg_points(m, pts) << "\"/>\n";
}

void svg_endpoint_circle(
  std::ostringstream & out, const SvgMapper & m, const Vec2 & p, const std::string & fill,
  double opacity)
{
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.2f\" cy=\"%.2f", m.x(p.x), m.y(p.y));
  out << "  <circle cx=\"" << buf << "\" r=\"3\" fill=\"" << fill << "\" fill-opacity=\""
      << opacity << "\"/>\n";
}

void svg_endpoint_box(
  std::ostringstream & out, const SvgMapper & m, const std::vector<Vec2> & traj, double length,
  double width, const std::string & stroke)
{
  if (traj.empty()) {
    return;
  }
  const Vec2 end = traj.back();
  Vec2 delta{1.0, 0.0};
  if (traj.size() >= 2) {
    const Vec2 step = end - traj[traj.size() - 2];
    if (step.norm() > 1e-9) {
      delta = step * (1.0 / step.norm());
    }
  }
  const Vec2 u = delta * (length / 2.0);
  const Vec2 v = Vec2{-delta.y, delta.x} * (width / 2.0);
  const std::vector<Vec2> corners{end + u + v, end - u + v, end - u - v, end + u - v};
  out << "  <polygon fill=\"none\" stroke=\"" << stroke << "\" stroke-width=\"1.5\" points=\""
      << svg_points(m, corners) << "\"/>\n";
}

std::string xml_escape(const std::string & s)
{
  std::string out;
  for (const char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace

std::string render_svg(
  const Scenario & scenario, const PredictionRecord & record, std::size_t top_k)
{
  const AgentTrack & track_a = find_track(scenario, record.agent_a);
  const AgentTrack & track_b = find_track(scenario, record.agent_b);
  const std::size_t shown = std::min(top_k, record.pairs.size());

  double min_x = 1e300;
  double max_x = -1e300;
  double min_y = 1e300;
  double max_y = -1e300;
  const auto widen = [&](const std::vector<Vec2> & pts) {
    for (const Vec2 & p : pts) {
      min_x = std::min(min_x, p.x);
      max_x = std::max(max_x, p.x);
      min_y = std::min(min_y, p.y);
      max_y = std::max(max_y, p.y);
    }
  };
  for (const MapPolyline & line : scenario.map) {
    widen(line.points);
  }
  widen(track_a.positions);
  widen(track_b.positions);
  for (std::size_t i = 0; i < shown; ++i) {
    widen(record.pairs[i].traj_a);
    widen(record.pairs[i].traj_b);
  }
  if (min_x > max_x) {
    min_x = -1.0;
    max_x = 1.0;
    min_y = -1.0;
    max_y = 1.0;
  }
  const double margin = 10.0;
  min_x -= margin;
  max_x += margin;
  min_y -= margin;
  max_y += margin;

  SvgMapper m;
  m.min_x = min_x;
  m.max_y = max_y;
  m.scale = 900.0 / (max_x - min_x);
  m.width = 900.0;
  m.height = (max_y - min_y) * m.scale;

  const std::string color_a = "#1a6fb4";
  const std::string color_b = "#c23b22";

  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << m.width << "\" height=\""
      << m.height << "\" viewBox=\"0 0 " << m.width << " " << m.height << "\">\n";
  out << "  <title>" << xml_escape(scenario.id) << "</title>\n";
  out << "  <rect width=\"" << m.width << "\" height=\"" << m.height << "\" fill=\"#ffffff\"/>\n";

  for (const MapPolyline & line : scenario.map) {
    svg_polyline(out, m, line.points, "#cccccc", 1.0, 1.0, false);
  }

  const auto history = [&](const AgentTrack & track) {
    return std::vector<Vec2>(
      track.positions.begin(), track.positions.begin() + scenario.history_len);
  };
  svg_polyline(out, m, history(track_a), color_a, 1.5, 0.8, false);
  svg_polyline(out, m, history(track_b), color_b, 1.5, 0.8, false);

  svg_polyline(out, m, future_positions(track_a, scenario.history_len), color_a, 2.0, 1.0, true);
  svg_polyline(out, m, future_positions(track_b, scenario.history_len), color_b, 2.0, 1.0, true);

  for (std::size_t i = 0; i < shown; ++i) {
    const PairPrediction & pair = record.pairs[i];
    const double opacity = i == 0 ? 0.95 : 0.35;
    const double width = i == 0 ? 2.2 : 1.4;
    svg_polyline(out, m, pair.traj_a, color_a, width, opacity, false);
    svg_polyline(out, m, pair.traj_b, color_b, width, opacity, false);
    if (!pair.traj_a.empty()) {
      svg_endpoint_circle(out, m, pair.traj_a.back(), color_a, opacity);
    }
    if (!pair.traj_b.empty()) {
      svg_endpoint_circle(out, m, pair.traj_b.back(), color_b, opacity);
    }
  }
  if (shown > 0) {
    svg_endpoint_box(out, m, record.pairs[0].traj_a, track_a.length, track_a.width, color_a);
    svg_endpoint_box(out, m, record.pairs[0].traj_b, track_b.length, track_b.width, color_b);
  }
  out << "</svg>\n";
  return out.str();
}

std::string run_plot(const RunConfig & config, const std::string & out, std::ostream & log)
{
  validate_run_config(config);
  const std::string path = resolve(out, config.paths.plot);
  const std::vector<Scenario> scenarios = load_scenarios(config.paths.scenarios);
  if (!fs::exists(config.paths.predictions)) {
    throw IoError(
      "prediction file not found at '" + config.paths.predictions + "'; run predict first");
  }
  const std::vector<PredictionRecord> predictions = read_predictions(config.paths.predictions);
  if (predictions.empty()) {
    throw ValidationError("prediction file '" + config.paths.predictions + "' holds no records");
  }
  const PredictionRecord & record = predictions.front();

  const Scenario * scenario = nullptr;
  for (const Scenario & s : scenarios) {
    if (s.id == record.scenario_id) {
      scenario = &s;
      break;
    }
  }
  if (scenario == nullptr) {
    throw NotFoundError("predictions reference unknown scenario '" + record.scenario_id + "'");
  }

  write_text_file(path, render_svg(*scenario, record, config.model.top_k));
  log << "plot: scenario '" << record.scenario_id << "' with " << record.pairs.size()
      << " modes to " << path << "\n";
  write_manifest(config, "plot", path);
  return path;
}

}  // namespace prospectnet
