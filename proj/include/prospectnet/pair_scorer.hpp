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

#ifndef PROSPECTNET__PAIR_SCORER_HPP_
#define PROSPECTNET__PAIR_SCORER_HPP_

#include <cstddef>
#include <random>
#include <vector>

#include "prospectnet/autodiff.hpp"
#include "prospectnet/marginal.hpp"
#include "prospectnet/model_config.hpp"
#include "prospectnet/param_store.hpp"

namespace prospectnet
{

/**
 * @file
 * Joint mode scoring and selection. The two agents' candidate sets are
 * broadcast into their full cartesian product, each pair is scored by a
 * two-layer MLP (softmax across all pairs), the training target is a
 * distance-softmax distribution over the pairs, and the final K modes come
 * out of a threshold-decaying duplicate rejection pass.
 *
 * Parameters registered by init_pair_params:
 *   pair.w1, pair.b1, pair.w2, pair.b2   MLP (4*horizon + 2*E) -> E -> 1
 *
 * Trajectory coordinates fed to the scorer should share one reference frame;
 * the distance helpers only ever compare a trajectory with another one of
 * the same agent, so they are insensitive to that choice.
 */

/// Candidate indices making up one joint mode, row-major in (a, b).
struct PairIndex
{
  std::size_t index_a = 0;
  std::size_t index_b = 0;
};

/// One joint trajectory hypothesis (or ground truth) for both agents.
struct TrajectoryPair
{
  std::vector<Vec2> traj_a;
  std::vector<Vec2> traj_b;
};

/// Every candidate pair together with its score distribution.
struct ScoredPairSet
{
  std::vector<TrajectoryPair> pairs;
  std::vector<double> scores;
};

/// Row-major (a, b) enumeration of the candidate product. Unequal set sizes
/// throw ContractError unless allow_mismatch is set.
std::vector<PairIndex> broadcast_pairs(
  std::size_t n_a, std::size_t n_b, bool allow_mismatch = false);

/// Materializes the broadcast as trajectory pairs.
std::vector<TrajectoryPair> candidate_pairs(
  const CandidateSet & set_a, const CandidateSet & set_b, bool allow_mismatch = false);

void init_pair_params(ParameterStore & store, const ModelConfig & config, std::mt19937_64 & rng);

/**
 * Scores every pair of the two candidate lists. Per-pair input is
 * flatten(traj_a) | meanpool(latent_a) | flatten(traj_b) | meanpool(latent_b);
 * the MLP logit is softmaxed across all pairs. Returns an (n_a*n_b) x 1
 * probability column. Throws ContractError on an empty candidate list and
 * DimensionError when widths disagree with the pair.* parameters.
 */
Var score_pairs_t(
  Tape & tape, const std::vector<Var> & trajs_a, Var latent_a, const std::vector<Var> & trajs_b,
  Var latent_b);

/// Value-level wrapper pairing the broadcast with its probabilities.
ScoredPairSet score_pairs(
  const CandidateSet & set_a, const AgentLatent & latent_a, const CandidateSet & set_b,
  const AgentLatent & latent_b, ParameterStore & store, bool allow_mismatch = false);

/// Max over all timesteps and both coordinates of |pred - gt|, meters.
/// Throws ContractError on length mismatch or empty trajectories.
double pair_linf(const std::vector<Vec2> & pred, const std::vector<Vec2> & gt);

/// Mean of the two agents' pair_linf values.
double avg_pair_linf(const TrajectoryPair & pred, const TrajectoryPair & gt);

/**
 * Ground-truth score distribution: D(i) proportional to
 * exp(-avg_pair_linf(pair_i, gt) / (2*alpha)). Throws ConfigError when
 * alpha <= 0 and ContractError when pairs is empty.
 */
std::vector<double> gt_pair_distribution(
  const std::vector<TrajectoryPair> & pairs, const TrajectoryPair & gt, double alpha);

/// Cross entropy -sum D(i) * ln(scores(i) + 1e-12).
double scoring_loss(const std::vector<double> & scores, const std::vector<double> & dist);

/// Tape form over an n x 1 probability column; dist is the constant target.
Var scoring_loss_t(Tape & tape, Var scores, const std::vector<double> & dist);

/**
 * Duplicate-rejecting top-K selection. Pairs are visited by descending
 * score (ties by index) and accepted when their distance to every accepted
 * pair is at least eps, where the distance is the larger of the two agents'
 * final-point separations. A pass that ends short of K halves eps by gamma
 * and rescans the remainder; below a 0.01 m floor the remaining slots fill
 * in score order. Returns exactly k pairs sorted by (score desc, index).
 * Throws ContractError when k exceeds the pair count and ConfigError for
 * eps0 <= 0 or gamma outside (0, 1).
 */
std::vector<PairPrediction> select_topk_pairs(
  const std::vector<TrajectoryPair> & pairs, const std::vector<double> & scores, std::size_t k,
  double eps0, double gamma);

}  // namespace prospectnet

#endif  // PROSPECTNET__PAIR_SCORER_HPP_
