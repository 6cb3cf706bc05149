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

#ifndef PROSPECTNET__JOINT_HPP_
#define PROSPECTNET__JOINT_HPP_

#include <random>
#include <string>
#include <vector>

#include "prospectnet/autodiff.hpp"
#include "prospectnet/marginal.hpp"
#include "prospectnet/model_config.hpp"
#include "prospectnet/param_store.hpp"
#include "prospectnet/scenario.hpp"
#include "prospectnet/targets.hpp"

namespace prospectnet
{

/**
 * Conditional update of each agent's latent on the other agent's candidate
 * modes. The other agent's trajectories are re-expressed in the self frame,
 * run through a GRU, and appended to the self context as extra key/value
 * tokens. Attention logits carry an additive bias key per token: candidate
 * tokens biased by the other agent's mode probability, context tokens by the
 * uniform value 1/context_rows, so a flat mode distribution over matching
 * row counts reduces to plain attention. The update is residual with a
 * zero-initialized output projection: an untrained joint stage is a no-op.
 *
 * Parameter names registered by init_joint_params:
 *   joint.gru.*      candidate step GRU, input 2, hidden gru_hidden
 *   joint.cand_proj  gru_hidden x E projection into token width
 *   joint.attn.wq/wk/wv  E x E
 *   joint.attn.wo    E x E, zero-initialized
 */
void init_joint_params(ParameterStore & store, const ModelConfig & config, std::mt19937_64 & rng);

/// Attention weights and output. logits = (Q K^T + Q K_b^T) / sqrt(d_k),
/// row softmax, times V; d_k is the query width.
struct AttentionOut
{
  Var output;
  Var weights;
};

AttentionOut weighted_attention_full(Tape & tape, Var queries, Var keys, Var values, Var bias_keys);

/// Output only. Throws DimensionError when K/V/K_b row counts or Q/K/K_b
/// widths disagree.
Var weighted_attention(Tape & tape, Var queries, Var keys, Var values, Var bias_keys);

/// Key/value token matrix with its bias rows. keys doubles as values.
struct KeysValues
{
  Var keys;
  Var bias;
  std::size_t candidate_rows = 0;
};

/// Candidate tokens first, then context tokens. Bias rows carry p_other per
/// candidate and 1/context_rows per context token, each value repeated
/// across the embedding width.
KeysValues build_keys_values(Tape & tape, Var candidate_tokens, Var p_other, Var context_tokens);

/// Degenerate form without candidates: keys are the context alone.
KeysValues build_keys_values(Tape & tape, Var context_tokens);

/// The other agent's candidate trajectories mapped into the self frame and
/// stacked into one (N*T) x 2 matrix, candidate-major.
Var align_candidates_t(
  Tape & tape, const std::vector<Var> & trajectories, const Frame & frame_other,
  const Frame & frame_self);

/// One embedding row per candidate: aligned coordinates through the step
/// GRU, final state projected to the token width. Throws ContractError on an
/// empty candidate list.
Var embed_candidates_t(
  Tape & tape, const std::vector<Var> & trajectories, const Frame & frame_other,
  const Frame & frame_self, const ModelConfig & config);

/// Residual biased-attention update of one agent's latent.
Var joint_update(Tape & tape, Var h_self, Var context_tokens, Var candidate_tokens, Var p_other);

/// Everything the update loop needs about one agent.
struct JointAgentInputs
{
  Var h;
  Var m;
  Var c;
  CandidateVars candidates;
  Frame frame;
  const TargetSet * targets = nullptr;
};

struct JointTrace
{
  std::size_t updates_a = 0;
  std::size_t updates_b = 0;
  std::size_t repredictions = 0;
};

struct JointProcessResult
{
  Var h_a;
  Var h_b;
  JointTrace trace;
};

/**
 * Runs q_stack update rounds. Within a round both agents read the other's
 * round-entry candidates, so the two updates commute; candidates and
 * probabilities are re-derived from the updated latents only between rounds.
 * Throws ConfigError when q_stack is zero.
 */
JointProcessResult joint_learning_process(
  Tape & tape, const JointAgentInputs & agent_a, const JointAgentInputs & agent_b,
  const ModelConfig & config);

struct JointPrediction
{
  CandidateSet candidates_a;
  CandidateSet candidates_b;
  AgentLatent latent_a;
  AgentLatent latent_b;
  std::vector<std::size_t> goal_indices_a;
  std::vector<std::size_t> goal_indices_b;
  bool map_warning = false;
  bool target_warning = false;
};

/// Marginal pass for both agents, the joint update loop, then a fresh
/// candidate selection from the updated latents.
JointPrediction joint_predict(
  const Scenario & scenario, const std::string & agent_a, const std::string & agent_b,
  ParameterStore & store, const TargetSet & targets_a, const TargetSet & targets_b,
  const ModelConfig & config);

}  // namespace prospectnet

#endif  // PROSPECTNET__JOINT_HPP_
