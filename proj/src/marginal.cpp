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

#include "prospectnet/marginal.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numeric>
#include <utility>

#include "prospectnet/errors.hpp"
#include "prospectnet/geometry.hpp"

namespace prospectnet
{
namespace
{

constexpr double kPosScale = 0.01;
constexpr double kDeltaScale = 0.1;
constexpr double kGoalScale = 0.05;
constexpr double kTrajScale = 10.0;
constexpr std::size_t kPointFeatures = 7;

void kind_one_hot(PolylineKind kind, double * out)
{
  out[0] = kind == PolylineKind::kLaneCenterline ? 1.0 : 0.0;
  out[1] = kind == PolylineKind::kBoundary ? 1.0 : 0.0;
  out[2] = kind == PolylineKind::kCrosswalk ? 1.0 : 0.0;
}

Tensor polyline_features(const MapPolyline & polyline, const Frame & frame)
{
  const std::size_t n = polyline.points.size();
  Tensor feats = Tensor::zeros(n, kPointFeatures);
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2 local = to_frame(polyline.points[i], frame);
    const std::size_t j = i + 1 < n ? i : i - 1;
    const Vec2 delta = to_frame(polyline.points[j + 1], frame) - to_frame(polyline.points[j], frame);
    feats.at(i, 0) = local.x * kPosScale;
    feats.at(i, 1) = local.y * kPosScale;
    feats.at(i, 2) = delta.x * kDeltaScale;
    feats.at(i, 3) = delta.y * kDeltaScale;
    kind_one_hot(polyline.kind, &feats.at(i, 4));
  }
  return feats;
}

Tensor history_features(const AgentTrack & track, const Frame & frame, std::size_t history_len)
{
  Tensor feats = Tensor::zeros(history_len, kPointFeatures);
  for (std::size_t t = 0; t < history_len; ++t) {
    if (track.valid[t] == 0) {
      continue;
    }
    const Vec2 local = to_frame(track.positions[t], frame);
    Vec2 delta{0.0, 0.0};
    if (history_len >= 2) {
      const std::size_t j = t + 1 < history_len ? t : t - 1;
      delta = to_frame(track.positions[j + 1], frame) - to_frame(track.positions[j], frame);
    }
    const double rel_heading = normalize_angle(track.headings[t] - frame.heading);
    feats.at(t, 0) = local.x * kPosScale;
    feats.at(t, 1) = local.y * kPosScale;
    feats.at(t, 2) = delta.x * kDeltaScale;
    feats.at(t, 3) = delta.y * kDeltaScale;
    feats.at(t, 4) = std::cos(rel_heading);
    feats.at(t, 5) = std::sin(rel_heading);
    feats.at(t, 6) = 1.0;
  }
  return feats;
}

double min_distance_to(const MapPolyline & polyline, const Vec2 & origin)
{
  double best = std::numeric_limits<double>::infinity();
  for (const Vec2 & p : polyline.points) {
    best = std::min(best, distance(p, origin));
  }
  return best;
}

/// Indices of in-radius polylines in input order; the closest max_map_tokens
/// by (distance, id) when over the cap.
std::vector<std::size_t> select_polylines(
  const std::vector<MapPolyline> & map, const Frame & frame, const ModelConfig & config)
{
  struct Entry
  {
    double dist;
    std::string id;
    std::size_t index;
  };
  std::vector<Entry> in_radius;
  for (std::size_t i = 0; i < map.size(); ++i) {
    const double d = min_distance_to(map[i], frame.origin);
    if (d <= config.encode_radius) {
      in_radius.push_back({d, map[i].polyline_id, i});
    }
  }
  if (in_radius.size() > config.max_map_tokens) {
    std::sort(in_radius.begin(), in_radius.end(), [](const Entry & a, const Entry & b) {
      if (a.dist != b.dist) {
        return a.dist < b.dist;
      }
      return a.id < b.id;
    });
    in_radius.resize(config.max_map_tokens);
  }
  std::vector<std::size_t> indices;
  indices.reserve(in_radius.size());
  for (const Entry & e : in_radius) {
    indices.push_back(e.index);
  }
  std::sort(indices.begin(), indices.end());
  return indices;
}

Tensor targets_tensor(const TargetSet & targets)
{
  Tensor coords = Tensor::zeros(targets.points.size(), 2);
  for (std::size_t i = 0; i < targets.points.size(); ++i) {
    coords.at(i, 0) = targets.points[i].x * kGoalScale;
    coords.at(i, 1) = targets.points[i].y * kGoalScale;
  }
  return coords;
}

std::vector<std::size_t> rank_by_probability(const Tensor & probs)
{
  std::vector<std::size_t> order(probs.cols());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&probs](std::size_t a, std::size_t b) {
    return probs.at(0, a) > probs.at(0, b);
  });
  return order;
}

}  // namespace

void init_marginal_params(
  ParameterStore & store, const ModelConfig & config, std::mt19937_64 & rng)
{
  validate_config(config);
  const std::size_t e = config.embed_dim;
  init_mlp2(store, "enc.map", kPointFeatures, e, e, rng);
  init_mlp2(store, "enc.agent", kPointFeatures, e, e, rng);
  store.create_glorot("enc.attn.wq", e, e, rng);
  store.create_glorot("enc.attn.wk", e, e, rng);
  store.create_glorot("enc.attn.wv", e, e, rng);
  store.create_glorot("enc.attn.wo", e, e, rng);
  init_mlp2(store, "head.goal", 2 + e, e, 1, rng);
  init_mlp2(store, "head.traj", 2 + e, e, 2 * config.horizon, rng);
}

EncoderVars encode_context_t(
  Tape & tape, const Scenario & scenario, const std::string & agent_id,
  const ModelConfig & config)
{
  const AgentTrack & track = find_track(scenario, agent_id);
  const Frame frame = agent_frame(track, scenario.history_len);

  EncoderVars out;
  const MlpVars map_mlp = mlp2_vars(tape, "enc.map");
  const std::vector<std::size_t> selected = select_polylines(scenario.map, frame, config);
  if (selected.empty()) {
    out.map_warning = true;
    out.m = tape.constant(Tensor::zeros(1, config.embed_dim));
  } else {
    std::vector<Var> rows;
    rows.reserve(selected.size());
    for (const std::size_t idx : selected) {
      const Var feats = tape.constant(polyline_features(scenario.map[idx], frame));
      rows.push_back(tape.max_rows(mlp2(tape, feats, map_mlp)));
    }
    out.m = rows.size() == 1 ? rows.front() : tape.concat_rows(rows);
  }

  const Var hist = tape.constant(history_features(track, frame, scenario.history_len));
  out.c = mlp2(tape, hist, mlp2_vars(tape, "enc.agent"));

  const Var tokens = tape.concat_rows({out.m, out.c});
  const Var q = tape.matmul(tokens, tape.param("enc.attn.wq"));
  const Var k = tape.matmul(tokens, tape.param("enc.attn.wk"));
  const Var v = tape.matmul(tokens, tape.param("enc.attn.wv"));
  const double inv_sqrt_e = 1.0 / std::sqrt(static_cast<double>(config.embed_dim));
  const Var weights = tape.softmax_rows(tape.scale(tape.matmul_nt(q, k), inv_sqrt_e));
  const Var attended = tape.matmul(tape.matmul(weights, v), tape.param("enc.attn.wo"));
  out.h = tape.add(tokens, attended);
  return out;
}

Var pooled_latent(Tape & tape, Var h)
{
  return tape.mean_rows(h);
}

Var goal_logits_t(Tape & tape, Var pooled, const TargetSet & targets)
{
  if (targets.points.empty()) {
    throw ContractError("goal scoring requires a non-empty target set");
  }
  const std::size_t m = targets.points.size();
  const Var coords = tape.constant(targets_tensor(targets));
  const Var tiled = tape.repeat_row(pooled, m);
  const Var scores = mlp2(tape, tape.concat_cols({coords, tiled}), mlp2_vars(tape, "head.goal"));
  return tape.reshape(scores, 1, m);
}

Var regress_traj_t(Tape & tape, Var pooled, const Vec2 & goal, const ModelConfig & config)
{
  Tensor goal_row = Tensor::zeros(1, 2);
  goal_row.at(0, 0) = goal.x * kGoalScale;
  goal_row.at(0, 1) = goal.y * kGoalScale;
  const Var input = tape.concat_cols({tape.constant(goal_row), pooled});
  const Var flat = mlp2(tape, input, mlp2_vars(tape, "head.traj"));
  return tape.scale(tape.reshape(flat, config.horizon, 2), kTrajScale);
}

CandidateVars select_candidates_t(
  Tape & tape, Var pooled, const TargetSet & targets, const ModelConfig & config)
{
  const Var probs = tape.softmax_rows(goal_logits_t(tape, pooled, targets));
  const std::size_t m = targets.points.size();
  const std::size_t n = std::min(config.n_candidates, m);

  CandidateVars out;
  out.shortage_warning = m < config.n_candidates;
  const std::vector<std::size_t> order = rank_by_probability(probs.value());
  out.goal_indices.assign(order.begin(), order.begin() + n);

  const Var column = tape.reshape(probs, m, 1);
  const Var picked = tape.gather_rows(column, out.goal_indices);
  out.probabilities = tape.mul_scalar_node(picked, tape.recip(tape.sum(picked)));

  out.trajectories.reserve(n);
  for (const std::size_t idx : out.goal_indices) {
    out.trajectories.push_back(regress_traj_t(tape, pooled, targets.points[idx], config));
  }
  return out;
}

namespace
{

std::size_t closest_target(const TargetSet & targets, const Vec2 & endpoint)
{
  std::size_t best = 0;
  double best_d = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < targets.points.size(); ++i) {
    const double d = distance(targets.points[i], endpoint);
    if (d < best_d) {
      best_d = d;
      best = i;
    }
  }
  return best;
}

Tensor future_tensor(const AgentTrack & track, const Frame & frame, std::size_t history_len)
{
  const std::vector<Vec2> future = to_frame(future_positions(track, history_len), frame);
  Tensor gt = Tensor::zeros(future.size(), 2);
  for (std::size_t t = 0; t < future.size(); ++t) {
    gt.at(t, 0) = future[t].x;
    gt.at(t, 1) = future[t].y;
  }
  return gt;
}

}  // namespace

MarginalLossVars marginal_loss_from_latent_t(
  Tape & tape, Var h, const Scenario & scenario, const std::string & agent_id,
  const TargetSet & targets, const ModelConfig & config)
{
  if (scenario.horizon != config.horizon) {
    throw ContractError("scenario horizon does not match the model horizon");
  }
  if (targets.points.empty()) {
    throw ContractError("marginal loss requires a non-empty target set");
  }
  const AgentTrack & track = find_track(scenario, agent_id);
  const Frame frame = agent_frame(track, scenario.history_len);
  const Tensor gt = future_tensor(track, frame, scenario.history_len);
  const Vec2 endpoint{gt.at(gt.rows() - 1, 0), gt.at(gt.rows() - 1, 1)};
  const std::size_t positive = closest_target(targets, endpoint);

  const Var pooled = pooled_latent(tape, h);
  const Var probs = tape.softmax_rows(goal_logits_t(tape, pooled, targets));
  const Var positive_prob =
    tape.gather_rows(tape.reshape(probs, targets.points.size(), 1), {positive});

  MarginalLossVars loss;
  loss.goal_ce = tape.neg(tape.log(positive_prob, 1e-12));
  const Var pred = regress_traj_t(tape, pooled, targets.points[positive], config);
  loss.huber = tape.huber_loss(pred, gt, config.huber_delta);
  loss.total = tape.add(loss.goal_ce, loss.huber);
  return loss;
}

MarginalLossVars marginal_loss_t(
  Tape & tape, const Scenario & scenario, const std::string & agent_id,
  const TargetSet & targets, const ModelConfig & config)
{
  const EncoderVars enc = encode_context_t(tape, scenario, agent_id, config);
  return marginal_loss_from_latent_t(tape, enc.h, scenario, agent_id, targets, config);
}

EncodeResult encode_context(
  const Scenario & scenario, const std::string & agent_id, ParameterStore & store,
  const ModelConfig & config)
{
  Tape tape(&store);
  const EncoderVars enc = encode_context_t(tape, scenario, agent_id, config);
  EncodeResult out;
  out.context.m = enc.m.value();
  out.context.c = enc.c.value();
  out.latent.h = enc.h.value();
  out.map_warning = enc.map_warning;
  return out;
}

std::vector<double> predict_goals(
  ParameterStore & store, const AgentLatent & latent, const TargetSet & targets)
{
  Tape tape(&store);
  const Var pooled = pooled_latent(tape, tape.constant(latent.h));
  const Var probs = tape.softmax_rows(goal_logits_t(tape, pooled, targets));
  return probs.value().values();
}

std::vector<Vec2> regress_trajectory(
  ParameterStore & store, const AgentLatent & latent, const Vec2 & goal,
  const ModelConfig & config)
{
  Tape tape(&store);
  const Var pooled = pooled_latent(tape, tape.constant(latent.h));
  const Tensor traj = regress_traj_t(tape, pooled, goal, config).value();
  std::vector<Vec2> out(traj.rows());
  for (std::size_t t = 0; t < traj.rows(); ++t) {
    out[t] = Vec2{traj.at(t, 0), traj.at(t, 1)};
  }
  return out;
}

MarginalPrediction marginal_predict(
  const Scenario & scenario, const std::string & agent_id, ParameterStore & store,
  const TargetSet & targets, const ModelConfig & config)
{
  if (scenario.horizon != config.horizon) {
    throw ContractError("scenario horizon does not match the model horizon");
  }
  Tape tape(&store);
  const EncoderVars enc = encode_context_t(tape, scenario, agent_id, config);
  const Var pooled = pooled_latent(tape, enc.h);
  const CandidateVars candidates = select_candidates_t(tape, pooled, targets, config);

  MarginalPrediction out;
  out.context.m = enc.m.value();
  out.context.c = enc.c.value();
  out.latent.h = enc.h.value();
  out.goal_indices = candidates.goal_indices;
  out.map_warning = enc.map_warning;
  out.target_warning = candidates.shortage_warning;
  out.candidates = candidate_values(candidates);
  return out;
}

CandidateSet candidate_values(const CandidateVars & candidates)
{
  CandidateSet out;
  out.probabilities = candidates.probabilities.value().values();
  out.trajectories.reserve(candidates.trajectories.size());
  for (const Var & traj : candidates.trajectories) {
    const Tensor & value = traj.value();
    std::vector<Vec2> points(value.rows());
    for (std::size_t t = 0; t < value.rows(); ++t) {
      points[t] = Vec2{value.at(t, 0), value.at(t, 1)};
    }
    out.trajectories.push_back(std::move(points));
  }
  return out;
}

MarginalLossValue marginal_loss(
  const Scenario & scenario, const std::string & agent_id, ParameterStore & store,
  const TargetSet & targets, const ModelConfig & config)
{
  Tape tape(&store);
  const MarginalLossVars loss = marginal_loss_t(tape, scenario, agent_id, targets, config);
  MarginalLossValue out;
  out.total = loss.total.value().at(0, 0);
  out.goal_ce = loss.goal_ce.value().at(0, 0);
  out.huber = loss.huber.value().at(0, 0);
  return out;
}

std::vector<ScoredPair> cartesian_pairs(
  const CandidateSet & set_a, const CandidateSet & set_b, std::size_t k)
{
  std::vector<ScoredPair> pairs;
  pairs.reserve(set_a.probabilities.size() * set_b.probabilities.size());
  for (std::size_t i = 0; i < set_a.probabilities.size(); ++i) {
    for (std::size_t j = 0; j < set_b.probabilities.size(); ++j) {
      pairs.push_back({i, j, set_a.probabilities[i] * set_b.probabilities[j]});
    }
  }
  std::sort(pairs.begin(), pairs.end(), [](const ScoredPair & a, const ScoredPair & b) {
    if (a.score != b.score) {
      return a.score > b.score;
    }
    if (a.index_a != b.index_a) {
      return a.index_a < b.index_a;
    }
    return a.index_b < b.index_b;
  });
  if (pairs.size() > k) {
    pairs.resize(k);
  }
  return pairs;
}

std::vector<PairPrediction> cartesian_baseline(
  const CandidateSet & set_a, const CandidateSet & set_b, std::size_t k)
{
  std::vector<PairPrediction> out;
  for (const ScoredPair & pair : cartesian_pairs(set_a, set_b, k)) {
    PairPrediction p;
    p.traj_a = set_a.trajectories[pair.index_a];
    p.traj_b = set_b.trajectories[pair.index_b];
    p.score = pair.score;
    p.source_index = pair.index_a * set_b.trajectories.size() + pair.index_b;
    out.push_back(std::move(p));
  }
  return out;
}

void validate_config(const ModelConfig & config)
{
  if (config.embed_dim == 0 || config.gru_hidden == 0 || config.n_candidates == 0 ||
      config.top_k == 0 || config.q_stack == 0 || config.horizon == 0) {
    throw ConfigError("model dimensions must be positive");
  }
  if (!(config.alpha > 0.0)) {
    throw ConfigError("alpha must be positive");
  }
  if (!(config.nms_eps0 > 0.0) || !(config.nms_gamma > 0.0) || config.nms_gamma >= 1.0) {
    throw ConfigError("duplicate-rejection threshold and decay must be positive, decay below 1");
  }
  if (!(config.huber_delta > 0.0) || !(config.encode_radius > 0.0) || !(config.dt > 0.0)) {
    throw ConfigError("huber delta, encode radius, and dt must be positive");
  }
  if (config.max_map_tokens == 0) {
    throw ConfigError("max_map_tokens must be positive");
  }
  validate_params(config.targets);
}

}  // namespace prospectnet
