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

#include "prospectnet/joint.hpp"

#include <cmath>
#include <cstddef>

#include "prospectnet/errors.hpp"
#include "prospectnet/geometry.hpp"
#include "prospectnet/nn.hpp"

namespace prospectnet
{
namespace
{

constexpr double kCandScale = 0.02;  // meters into GRU-friendly range

}  // namespace

void init_joint_params(ParameterStore & store, const ModelConfig & config, std::mt19937_64 & rng)
{
  validate_config(config);
  init_gru(store, "joint.gru", 2, config.gru_hidden, rng);
  store.create_glorot("joint.cand_proj", config.gru_hidden, config.embed_dim, rng);
  store.create_glorot("joint.attn.wq", config.embed_dim, config.embed_dim, rng);
  store.create_glorot("joint.attn.wk", config.embed_dim, config.embed_dim, rng);
  store.create_glorot("joint.attn.wv", config.embed_dim, config.embed_dim, rng);
  store.create("joint.attn.wo", Tensor::zeros(config.embed_dim, config.embed_dim));
}

AttentionOut weighted_attention_full(Tape & tape, Var queries, Var keys, Var values, Var bias_keys)
{
  if (keys.rows() != values.rows() || keys.rows() != bias_keys.rows()) {
    throw DimensionError("weighted_attention: key, value, and bias row counts differ");
  }
  if (queries.cols() != keys.cols() || queries.cols() != bias_keys.cols()) {
    throw DimensionError("weighted_attention: query, key, and bias widths differ");
  }
  const double inv_sqrt_dk = 1.0 / std::sqrt(static_cast<double>(queries.cols()));
  const Var logits = tape.scale(
    tape.add(tape.matmul_nt(queries, keys), tape.matmul_nt(queries, bias_keys)), inv_sqrt_dk);
  AttentionOut out;
  out.weights = tape.softmax_rows(logits);
  out.output = tape.matmul(out.weights, values);
  return out;
}

Var weighted_attention(Tape & tape, Var queries, Var keys, Var values, Var bias_keys)
{
  return weighted_attention_full(tape, queries, keys, values, bias_keys).output;
}

KeysValues build_keys_values(Tape & tape, Var candidate_tokens, Var p_other, Var context_tokens)
{
  if (candidate_tokens.cols() != context_tokens.cols()) {
    throw DimensionError("build_keys_values: candidate and context widths differ");
  }
  if (p_other.rows() != candidate_tokens.rows() || p_other.cols() != 1) {
    throw DimensionError("build_keys_values: one probability per candidate token required");
  }
  const std::size_t width = context_tokens.cols();
  const std::size_t context_rows = context_tokens.rows();
  const double uniform = 1.0 / static_cast<double>(context_rows);

  KeysValues out;
  out.candidate_rows = candidate_tokens.rows();
  out.keys = tape.concat_rows({candidate_tokens, context_tokens});
  out.bias = tape.concat_rows(
    {tape.broadcast_col(p_other, width),
     tape.constant(Tensor::full(context_rows, width, uniform))});
  return out;
}

KeysValues build_keys_values(Tape & tape, Var context_tokens)
{
  const std::size_t context_rows = context_tokens.rows();
  const double uniform = 1.0 / static_cast<double>(context_rows);
  KeysValues out;
  out.keys = context_tokens;
  out.bias = tape.constant(Tensor::full(context_rows, context_tokens.cols(), uniform));
  return out;
}

Var align_candidates_t(
  Tape & tape, const std::vector<Var> & trajectories, const Frame & frame_other,
  const Frame & frame_self)
{
  if (trajectories.empty()) {
    throw ContractError("candidate alignment requires at least one trajectory");
  }
  for (const Var & traj : trajectories) {
    if (traj.cols() != 2 || traj.rows() != trajectories.front().rows()) {
      throw DimensionError("candidate trajectories must share a T x 2 shape");
    }
  }
  const Var stacked =
    trajectories.size() == 1 ? trajectories.front() : tape.concat_rows(trajectories);

  const double delta = frame_other.heading - frame_self.heading;
  const double c = std::cos(delta);
  const double s = std::sin(delta);
  Tensor rot = Tensor::zeros(2, 2);
  rot.at(0, 0) = c;
  rot.at(0, 1) = s;
  rot.at(1, 0) = -s;
  rot.at(1, 1) = c;
  const Vec2 shift = to_frame(frame_other.origin, frame_self);
  Tensor shift_row = Tensor::zeros(1, 2);
  shift_row.at(0, 0) = shift.x;
  shift_row.at(0, 1) = shift.y;

  return tape.add_row_bias(tape.matmul(stacked, tape.constant(rot)), tape.constant(shift_row));
}

Var embed_candidates_t(
  Tape & tape, const std::vector<Var> & trajectories, const Frame & frame_other,
  const Frame & frame_self, const ModelConfig & config)
{
  const Var aligned =
    tape.scale(align_candidates_t(tape, trajectories, frame_other, frame_self), kCandScale);
  const std::size_t n = trajectories.size();
  const std::size_t horizon = trajectories.front().rows();
  const GruVars gru = gru_vars(tape, "joint.gru");

  Var state = tape.constant(Tensor::zeros(n, config.gru_hidden));
  std::vector<std::size_t> step_rows(n);
  for (std::size_t t = 0; t < horizon; ++t) {
    for (std::size_t i = 0; i < n; ++i) {
      step_rows[i] = i * horizon + t;
    }
    state = gru_step(tape, tape.gather_rows(aligned, step_rows), state, gru);
  }
  return tape.matmul(state, tape.param("joint.cand_proj"));
}

Var joint_update(Tape & tape, Var h_self, Var context_tokens, Var candidate_tokens, Var p_other)
{
  const KeysValues kv = build_keys_values(tape, candidate_tokens, p_other, context_tokens);
  const Var q = tape.matmul(h_self, tape.param("joint.attn.wq"));
  const Var k = tape.matmul(kv.keys, tape.param("joint.attn.wk"));
  const Var v = tape.matmul(kv.keys, tape.param("joint.attn.wv"));
  const Var attended = weighted_attention(tape, q, k, v, kv.bias);
  return tape.add(h_self, tape.matmul(attended, tape.param("joint.attn.wo")));
}

JointProcessResult joint_learning_process(
  Tape & tape, const JointAgentInputs & agent_a, const JointAgentInputs & agent_b,
  const ModelConfig & config)
{
  if (config.q_stack < 1) {
    throw ConfigError("q_stack must be at least 1");
  }
  const Var context_a =
    config.history_in_keys ? tape.concat_rows({agent_a.m, agent_a.c}) : agent_a.m;
  const Var context_b =
    config.history_in_keys ? tape.concat_rows({agent_b.m, agent_b.c}) : agent_b.m;

  JointProcessResult result;
  Var h_a = agent_a.h;
  Var h_b = agent_b.h;
  CandidateVars cands_a = agent_a.candidates;
  CandidateVars cands_b = agent_b.candidates;

  for (std::size_t round = 0; round < config.q_stack; ++round) {
    const Var tokens_from_b =
      embed_candidates_t(tape, cands_b.trajectories, agent_b.frame, agent_a.frame, config);
    const Var tokens_from_a =
      embed_candidates_t(tape, cands_a.trajectories, agent_a.frame, agent_b.frame, config);
    h_a = joint_update(tape, h_a, context_a, tokens_from_b, cands_b.probabilities);
    ++result.trace.updates_a;
    h_b = joint_update(tape, h_b, context_b, tokens_from_a, cands_a.probabilities);
    ++result.trace.updates_b;

    if (round + 1 < config.q_stack) {
      cands_a = select_candidates_t(tape, pooled_latent(tape, h_a), *agent_a.targets, config);
      cands_b = select_candidates_t(tape, pooled_latent(tape, h_b), *agent_b.targets, config);
      ++result.trace.repredictions;
    }
  }
  result.h_a = h_a;
  result.h_b = h_b;
  return result;
}

JointPrediction joint_predict(
  const Scenario & scenario, const std::string & agent_a, const std::string & agent_b,
  ParameterStore & store, const TargetSet & targets_a, const TargetSet & targets_b,
  const ModelConfig & config)
{
  if (agent_a == agent_b) {
    throw ContractError("joint prediction needs two distinct agents");
  }
  if (scenario.horizon != config.horizon) {
    throw ContractError("scenario horizon does not match the model horizon");
  }
  Tape tape(&store);
  const EncoderVars enc_a = encode_context_t(tape, scenario, agent_a, config);
  const EncoderVars enc_b = encode_context_t(tape, scenario, agent_b, config);

  JointAgentInputs in_a;
  in_a.h = enc_a.h;
  in_a.m = enc_a.m;
  in_a.c = enc_a.c;
  in_a.candidates = select_candidates_t(tape, pooled_latent(tape, enc_a.h), targets_a, config);
  in_a.frame = agent_frame(find_track(scenario, agent_a), scenario.history_len);
  in_a.targets = &targets_a;

  JointAgentInputs in_b;
  in_b.h = enc_b.h;
  in_b.m = enc_b.m;
  in_b.c = enc_b.c;
  in_b.candidates = select_candidates_t(tape, pooled_latent(tape, enc_b.h), targets_b, config);
  in_b.frame = agent_frame(find_track(scenario, agent_b), scenario.history_len);
  in_b.targets = &targets_b;

  const JointProcessResult joint = joint_learning_process(tape, in_a, in_b, config);
  const CandidateVars out_a =
    select_candidates_t(tape, pooled_latent(tape, joint.h_a), targets_a, config);
  const CandidateVars out_b =
    select_candidates_t(tape, pooled_latent(tape, joint.h_b), targets_b, config);

  JointPrediction out;
  out.candidates_a = candidate_values(out_a);
  out.candidates_b = candidate_values(out_b);
  out.latent_a.h = joint.h_a.value();
  out.latent_b.h = joint.h_b.value();
  out.goal_indices_a = out_a.goal_indices;
  out.goal_indices_b = out_b.goal_indices;
  out.map_warning = enc_a.map_warning || enc_b.map_warning;
  out.target_warning = out_a.shortage_warning || out_b.shortage_warning;
  return out;
}

}  // namespace prospectnet
