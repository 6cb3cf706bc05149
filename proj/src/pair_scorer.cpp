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

#include "prospectnet/pair_scorer.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <vector>

#include "prospectnet/errors.hpp"
#include "prospectnet/nn.hpp"

namespace prospectnet
{

namespace
{

constexpr double kScoreEps = 1e-12;
constexpr double kEpsFloor = 0.01;

Tensor trajectory_tensor(const std::vector<Vec2> & traj)
{
  Tensor out = Tensor::zeros(traj.size(), 2);
  for (std::size_t t = 0; t < traj.size(); ++t) {
    out.at(t, 0) = traj[t].x;
    out.at(t, 1) = traj[t].y;
  }
  return out;
}

}  // namespace

std::vector<PairIndex> broadcast_pairs(std::size_t n_a, std::size_t n_b, bool allow_mismatch)
{
  if (n_a != n_b && !allow_mismatch) {
    throw ContractError(
      "candidate sets differ in size: " + std::to_string(n_a) + " vs " + std::to_string(n_b));
  }
  std::vector<PairIndex> out;
  out.reserve(n_a * n_b);
  for (std::size_t i = 0; i < n_a; ++i) {
    for (std::size_t j = 0; j < n_b; ++j) {
      out.push_back(PairIndex{i, j});
    }
  }
  return out;
}

std::vector<TrajectoryPair> candidate_pairs(
  const CandidateSet & set_a, const CandidateSet & set_b, bool allow_mismatch)
{
  const auto index =
    broadcast_pairs(set_a.trajectories.size(), set_b.trajectories.size(), allow_mismatch);
  std::vector<TrajectoryPair> out;
  out.reserve(index.size());
  for (const PairIndex & ij : index) {
    out.push_back(
      TrajectoryPair{set_a.trajectories[ij.index_a], set_b.trajectories[ij.index_b]});
  }
  return out;
}

void init_pair_params(ParameterStore & store, const ModelConfig & config, std::mt19937_64 & rng)
{
  const std::size_t input_dim = 4 * config.horizon + 2 * config.embed_dim;
  init_mlp2(store, "pair", input_dim, config.embed_dim, 1, rng);
}

Var score_pairs_t(
  Tape & tape, const std::vector<Var> & trajs_a, Var latent_a, const std::vector<Var> & trajs_b,
  Var latent_b)
{
  if (trajs_a.empty() || trajs_b.empty()) {
    throw ContractError("pair scoring needs at least one candidate per agent");
  }
  const std::size_t horizon = trajs_a.front().rows();
  const auto flatten = [&](const std::vector<Var> & trajs) {
    std::vector<Var> rows;
    rows.reserve(trajs.size());
    for (const Var & traj : trajs) {
      if (traj.cols() != 2 || traj.rows() != horizon) {
        throw DimensionError("candidate trajectories must share one horizon x 2 shape");
      }
      rows.push_back(tape.reshape(traj, 1, 2 * horizon));
    }
    return rows.size() == 1 ? rows.front() : tape.concat_rows(rows);
  };
  const Var flat_a = flatten(trajs_a);
  const Var flat_b = flatten(trajs_b);

  const std::size_t n_b = trajs_b.size();
  const std::size_t count = trajs_a.size() * n_b;
  std::vector<std::size_t> a_rows(count);
  std::vector<std::size_t> b_rows(count);
  for (std::size_t r = 0; r < count; ++r) {
    a_rows[r] = r / n_b;
    b_rows[r] = r % n_b;
  }
  const Var input = tape.concat_cols(
    {tape.gather_rows(flat_a, a_rows), tape.repeat_row(tape.mean_rows(latent_a), count),
     tape.gather_rows(flat_b, b_rows), tape.repeat_row(tape.mean_rows(latent_b), count)});
  const Var logits = mlp2(tape, input, mlp2_vars(tape, "pair"));
  return tape.reshape(tape.softmax_rows(tape.reshape(logits, 1, count)), count, 1);
}

ScoredPairSet score_pairs(
  const CandidateSet & set_a, const AgentLatent & latent_a, const CandidateSet & set_b,
  const AgentLatent & latent_b, ParameterStore & store, bool allow_mismatch)
{
  ScoredPairSet out;
  out.pairs = candidate_pairs(set_a, set_b, allow_mismatch);

  Tape tape(&store);
  const auto lift = [&](const std::vector<std::vector<Vec2>> & trajs) {
    std::vector<Var> vars;
    vars.reserve(trajs.size());
    for (const auto & traj : trajs) {
      vars.push_back(tape.constant(trajectory_tensor(traj)));
    }
    return vars;
  };
  const Var probs = score_pairs_t(
    tape, lift(set_a.trajectories), tape.constant(latent_a.h), lift(set_b.trajectories),
    tape.constant(latent_b.h));
  const Tensor & values = probs.value();
  out.scores.assign(values.data(), values.data() + values.size());
  return out;
}

double pair_linf(const std::vector<Vec2> & pred, const std::vector<Vec2> & gt)
{
  if (pred.size() != gt.size()) {
    throw ContractError(
      "trajectory lengths differ: " + std::to_string(pred.size()) + " vs " +
      std::to_string(gt.size()));
  }
  if (pred.empty()) {
    throw ContractError("trajectories are empty");
  }
  double worst = 0.0;
  for (std::size_t t = 0; t < pred.size(); ++t) {
    worst = std::max(worst, std::abs(pred[t].x - gt[t].x));
    worst = std::max(worst, std::abs(pred[t].y - gt[t].y));
  }
  return worst;
}

double avg_pair_linf(const TrajectoryPair & pred, const TrajectoryPair & gt)
{
  return 0.5 * (pair_linf(pred.traj_a, gt.traj_a) + pair_linf(pred.traj_b, gt.traj_b));
}

std::vector<double> gt_pair_distribution(
  const std::vector<TrajectoryPair> & pairs, const TrajectoryPair & gt, double alpha)
{
  if (alpha <= 0.0) {
    throw ConfigError("alpha must be positive, got " + std::to_string(alpha));
  }
  if (pairs.empty()) {
    throw ContractError("no pairs to build a target distribution over");
  }
  std::vector<double> exponent(pairs.size());
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    exponent[i] = -avg_pair_linf(pairs[i], gt) / (2.0 * alpha);
  }
  const double shift = *std::max_element(exponent.begin(), exponent.end());
  std::vector<double> out(pairs.size());
  double denom = 0.0;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    out[i] = std::exp(exponent[i] - shift);
    denom += out[i];
  }
  for (double & v : out) {
    v /= denom;
  }
  return out;
}

double scoring_loss(const std::vector<double> & scores, const std::vector<double> & dist)
{
  if (scores.size() != dist.size()) {
    throw ContractError("score and target distribution sizes differ");
  }
  double loss = 0.0;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    loss -= dist[i] * std::log(scores[i] + kScoreEps);
  }
  return loss;
}

Var scoring_loss_t(Tape & tape, Var scores, const std::vector<double> & dist)
{
  if (scores.cols() != 1 || scores.rows() != dist.size()) {
    throw ContractError("scores must be a column matching the target distribution");
  }
  Tensor target = Tensor::zeros(dist.size(), 1);
  for (std::size_t i = 0; i < dist.size(); ++i) {
    target.at(i, 0) = dist[i];
  }
  return tape.neg(tape.sum(tape.mul(tape.constant(target), tape.log(scores, kScoreEps))));
}

std::vector<PairPrediction> select_topk_pairs(
  const std::vector<TrajectoryPair> & pairs, const std::vector<double> & scores, std::size_t k,
  double eps0, double gamma)
{
  if (eps0 <= 0.0) {
    throw ConfigError("nms_eps0 must be positive");
  }
  if (gamma <= 0.0 || gamma >= 1.0) {
    throw ConfigError("nms_gamma must lie strictly between 0 and 1");
  }
  if (scores.size() != pairs.size()) {
    throw ContractError("pair and score counts differ");
  }
  if (k > pairs.size()) {
    throw ContractError(
      "cannot select " + std::to_string(k) + " pairs from " + std::to_string(pairs.size()));
  }
  for (const TrajectoryPair & pair : pairs) {
    if (pair.traj_a.empty() || pair.traj_b.empty()) {
      throw ContractError("pair trajectories are empty");
    }
  }

  std::vector<std::size_t> order(pairs.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  const auto by_score = [&](std::size_t lhs, std::size_t rhs) {
    if (scores[lhs] != scores[rhs]) {
      return scores[lhs] > scores[rhs];
    }
    return lhs < rhs;
  };
  std::sort(order.begin(), order.end(), by_score);

  const auto separation = [&](std::size_t lhs, std::size_t rhs) {
    const Vec2 & a_l = pairs[lhs].traj_a.back();
    const Vec2 & a_r = pairs[rhs].traj_a.back();
    const Vec2 & b_l = pairs[lhs].traj_b.back();
    const Vec2 & b_r = pairs[rhs].traj_b.back();
    const double da =
      std::sqrt((a_l.x - a_r.x) * (a_l.x - a_r.x) + (a_l.y - a_r.y) * (a_l.y - a_r.y));
    const double db =
      std::sqrt((b_l.x - b_r.x) * (b_l.x - b_r.x) + (b_l.y - b_r.y) * (b_l.y - b_r.y));
    return std::max(da, db);
  };

  std::vector<std::size_t> accepted;
  accepted.reserve(k);
  std::vector<std::size_t> remaining = order;
  double eps = eps0;
  while (accepted.size() < k) {
    std::vector<std::size_t> next;
    next.reserve(remaining.size());
    for (const std::size_t idx : remaining) {
      if (accepted.size() == k) {
        next.push_back(idx);
        continue;
      }
      bool clear = true;
      for (const std::size_t kept : accepted) {
        if (separation(idx, kept) < eps) {
          clear = false;
          break;
        }
      }
      if (clear) {
        accepted.push_back(idx);
      } else {
        next.push_back(idx);
      }
    }
    remaining.swap(next);
    if (accepted.size() == k) {
      break;
    }
    eps *= gamma;
    if (eps < kEpsFloor) {
      for (const std::size_t idx : remaining) {
        if (accepted.size() == k) {
          break;
        }
        accepted.push_back(idx);
      }
      break;
    }
  }

  std::sort(accepted.begin(), accepted.end(), by_score);
  std::vector<PairPrediction> out;
  out.reserve(accepted.size());
  for (const std::size_t idx : accepted) {
    out.push_back(PairPrediction{pairs[idx].traj_a, pairs[idx].traj_b, scores[idx], idx});
  }
  return out;
}

}  // namespace prospectnet
