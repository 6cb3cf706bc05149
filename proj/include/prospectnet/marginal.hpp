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

#ifndef PROSPECTNET__MARGINAL_HPP_
#define PROSPECTNET__MARGINAL_HPP_

#include <random>
#include <string>
#include <vector>

#include "prospectnet/autodiff.hpp"
#include "prospectnet/model_config.hpp"
#include "prospectnet/nn.hpp"
#include "prospectnet/param_store.hpp"
#include "prospectnet/scenario.hpp"
#include "prospectnet/targets.hpp"
#include "prospectnet/tensor.hpp"

namespace prospectnet
{

/**
 * Target-driven per-agent predictor. All geometry is expressed in the agent
 * frame (origin and heading at the last history step). The encoder turns map
 * polylines and the agent's history into latent tokens; a goal head scores
 * sampled targets; a regression head emits one trajectory per selected goal.
 *
 * Parameter names registered by init_marginal_params:
 *   enc.map.*    per-point polyline MLP, 7 -> E -> E
 *   enc.agent.*  per-step history MLP, 7 -> E -> E
 *   enc.attn.*   wq, wk, wv, wo, each E x E
 *   head.goal.*  (2+E) -> E -> 1
 *   head.traj.*  (2+E) -> E -> 2*horizon
 *
 * Point features are [x, y, dx, dy, ...] with positions scaled by 1/100 and
 * step deltas by 1/10 so activations start O(1); map points carry a kind
 * one-hot, history steps carry relative heading (cos, sin) and the valid
 * flag. Invalid history steps contribute an all-zero feature row. Goal
 * coordinates entering the heads are scaled by 1/20. Regressed trajectories
 * are the raw head output times 10 m, so a zero-weight head yields the
 * all-zero trajectory.
 */

/// Map and history token embeddings. m has one row per encoded polyline
/// (or a single zero sentinel row when none is in radius), c one per
/// history step.
struct ContextEncoding
{
  Tensor m;
  Tensor c;
};

/// Latent tokens after the self-attention round, rows aligned with
/// concat(m, c).
struct AgentLatent
{
  Tensor h;
};

/// Per-agent modes: trajectories in the agent frame with probabilities
/// summing to one.
struct CandidateSet
{
  std::vector<std::vector<Vec2>> trajectories;
  std::vector<double> probabilities;
};

/// Registers every marginal parameter in the store.
void init_marginal_params(
  ParameterStore & store, const ModelConfig & config, std::mt19937_64 & rng);

// Tape-level pieces, shared with the joint stage.

struct EncoderVars
{
  Var m;
  Var c;
  Var h;
  bool map_warning = false;  // no polyline within encode_radius
};

/// Encodes one agent's context onto the tape. Throws NotFoundError when the
/// agent is absent.
EncoderVars encode_context_t(
  Tape & tape, const Scenario & scenario, const std::string & agent_id,
  const ModelConfig & config);

/// Mean over token rows, 1 x E.
Var pooled_latent(Tape & tape, Var h);

/// One logit per target, 1 x M. Throws ContractError on an empty set.
Var goal_logits_t(Tape & tape, Var pooled, const TargetSet & targets);

/// Trajectory for one goal, horizon x 2, agent frame.
Var regress_traj_t(Tape & tape, Var pooled, const Vec2 & goal, const ModelConfig & config);

/// Top goals by probability with renormalized probabilities (column vector)
/// and one regressed trajectory per goal, all differentiable.
struct CandidateVars
{
  std::vector<Var> trajectories;       // each horizon x 2
  Var probabilities;                   // n x 1, sums to one
  std::vector<std::size_t> goal_indices;
  bool shortage_warning = false;       // fewer targets than n_candidates
};

CandidateVars select_candidates_t(
  Tape & tape, Var pooled, const TargetSet & targets, const ModelConfig & config);

/// Materializes tape candidates into plain values.
CandidateSet candidate_values(const CandidateVars & candidates);

/// Goal cross entropy (closest-target hard label) plus Huber regression from
/// the positive target. Requires scenario.horizon == config.horizon.
struct MarginalLossVars
{
  Var total;
  Var goal_ce;
  Var huber;
};

MarginalLossVars marginal_loss_t(
  Tape & tape, const Scenario & scenario, const std::string & agent_id,
  const TargetSet & targets, const ModelConfig & config);

/// Same loss from an already-built latent token matrix; the joint stage uses
/// this to push its updated latents through the goal and regression heads.
MarginalLossVars marginal_loss_from_latent_t(
  Tape & tape, Var h, const Scenario & scenario, const std::string & agent_id,
  const TargetSet & targets, const ModelConfig & config);

// Value-level interface.

struct EncodeResult
{
  ContextEncoding context;
  AgentLatent latent;
  bool map_warning = false;
};

EncodeResult encode_context(
  const Scenario & scenario, const std::string & agent_id, ParameterStore & store,
  const ModelConfig & config);

/// Softmax over targets; sums to 1 within 1e-9. Throws ContractError on an
/// empty target set.
std::vector<double> predict_goals(
  ParameterStore & store, const AgentLatent & latent, const TargetSet & targets);

std::vector<Vec2> regress_trajectory(
  ParameterStore & store, const AgentLatent & latent, const Vec2 & goal,
  const ModelConfig & config);

struct MarginalPrediction
{
  CandidateSet candidates;   // probabilities sorted non-increasing
  ContextEncoding context;
  AgentLatent latent;
  std::vector<std::size_t> goal_indices;
  bool map_warning = false;
  bool target_warning = false;
};

MarginalPrediction marginal_predict(
  const Scenario & scenario, const std::string & agent_id, ParameterStore & store,
  const TargetSet & targets, const ModelConfig & config);

struct MarginalLossValue
{
  double total = 0.0;
  double goal_ce = 0.0;
  double huber = 0.0;
};

MarginalLossValue marginal_loss(
  const Scenario & scenario, const std::string & agent_id, ParameterStore & store,
  const TargetSet & targets, const ModelConfig & config);

/// One joint mode from the factorized baseline: score = p_A[i] * p_B[j].
struct ScoredPair
{
  std::size_t index_a = 0;
  std::size_t index_b = 0;
  double score = 0.0;
};

/// Top-k index pairs by product score, ties broken by (i, j). Returns fewer
/// when the product space is smaller than k.
std::vector<ScoredPair> cartesian_pairs(
  const CandidateSet & set_a, const CandidateSet & set_b, std::size_t k);

/// Same selection materialized as trajectory pairs.
std::vector<PairPrediction> cartesian_baseline(
  const CandidateSet & set_a, const CandidateSet & set_b, std::size_t k);

}  // namespace prospectnet

#endif  // PROSPECTNET__MARGINAL_HPP_
