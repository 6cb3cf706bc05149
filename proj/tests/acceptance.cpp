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

// Release gate. Each check covers one shipping guarantee, prints a single
// PASS or FAIL line, and the binary exits nonzero when anything fails. The
// checks rerun the unit-test oracles at release tolerances and add the two
// desk-scale training runs (overfit and held-out comparison) that are too
// slow for the regular suite.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "oracles.hpp"
#include "prospectnet/joint.hpp"
#include "prospectnet/marginal.hpp"
#include "prospectnet/metrics.hpp"
#include "prospectnet/mining.hpp"
#include "prospectnet/model_config.hpp"
#include "prospectnet/nn.hpp"
#include "prospectnet/pair_scorer.hpp"
#include "prospectnet/pipeline.hpp"
#include "prospectnet/run_config.hpp"
#include "prospectnet/scenario.hpp"
#include "prospectnet/synthetic.hpp"
#include "prospectnet/targets.hpp"
#include "prospectnet/tensor.hpp"

namespace fs = std::filesystem;

using prospectnet::AgentShape;
using prospectnet::AgentTrack;
using prospectnet::CandidateVars;
using prospectnet::EvalRecord;
using prospectnet::Frame;
using prospectnet::JointAgentInputs;
using prospectnet::MapPolyline;
using prospectnet::MetricsReport;
using prospectnet::ModelConfig;
using prospectnet::OtherAgentFuture;
using prospectnet::PairPrediction;
using prospectnet::ParameterStore;
using prospectnet::RunConfig;
using prospectnet::Scenario;
using prospectnet::TargetParams;
using prospectnet::TargetSet;
using prospectnet::Tape;
using prospectnet::Tensor;
using prospectnet::TrajectoryPair;
using prospectnet::Var;
using prospectnet::Vec2;

namespace
{

struct Outcome
{
  bool ok = false;
  std::string detail;
};

double seconds_since(const std::chrono::steady_clock::time_point & start)
{
  const auto elapsed = std::chrono::steady_clock::now() - start;
  return std::chrono::duration<double>(elapsed).count();
}

std::string fmt(const char * pattern, double value)
{
  char buf[64];
  std::snprintf(buf, sizeof(buf), pattern, value);
  return buf;
}

Tensor random_tensor(std::size_t rows, std::size_t cols, std::mt19937_64 & rng, double scale)
{
  std::uniform_real_distribution<double> dist(-scale, scale);
  Tensor out = Tensor::zeros(rows, cols);
  for (std::size_t k = 0; k < out.size(); ++k) {
    out[k] = dist(rng);
  }
  return out;
}

void randomize_param(
  ParameterStore & store, const std::string & name, std::mt19937_64 & rng, double scale)
{
  std::uniform_real_distribution<double> dist(-scale, scale);
  Tensor & value = store.value(name);
  for (std::size_t k = 0; k < value.size(); ++k) {
    value[k] = dist(rng);
  }
}

// Shared model fixture: a crossing pair on two straight lanes, small enough
// that finite differences stay fast but every code path is exercised.

ModelConfig tiny_config()
{
  ModelConfig config;
  config.embed_dim = 4;
  config.gru_hidden = 4;
  config.n_candidates = 2;
  config.top_k = 2;
  config.horizon = 4;
  config.targets.n_targets = 50;
  return config;
}

AgentTrack straight_track(const std::string & id, std::size_t steps, Vec2 start, Vec2 step)
{
  AgentTrack track;
  track.agent_id = id;
  track.is_predictable = true;
  for (std::size_t t = 0; t < steps; ++t) {
    track.positions.push_back(
      Vec2{start.x + step.x * static_cast<double>(t), start.y + step.y * static_cast<double>(t)});
    track.headings.push_back(std::atan2(step.y, step.x));
    track.valid.push_back(1);
  }
  return track;
}

Scenario crossing_scene()
{
  Scenario scene;
  scene.id = "cross";
  scene.history_len = 3;
  scene.horizon = 4;
  scene.tracks.push_back(straight_track("A", 7, Vec2{0.0, 0.0}, Vec2{1.2, 0.0}));
  scene.tracks.push_back(straight_track("B", 7, Vec2{7.0, -5.0}, Vec2{0.0, 1.1}));
  MapPolyline lane_a;
  lane_a.polyline_id = "lane_a";
  for (int x = -10; x <= 20; x += 5) {
    lane_a.points.push_back(Vec2{static_cast<double>(x), 0.0});
  }
  MapPolyline lane_b;
  lane_b.polyline_id = "lane_b";
  for (int y = -12; y <= 12; y += 4) {
    lane_b.points.push_back(Vec2{7.0, static_cast<double>(y)});
  }
  scene.map.push_back(lane_a);
  scene.map.push_back(lane_b);
  return scene;
}

TargetSet targets_near(const Vec2 & center)
{
  TargetSet targets;
  targets.points = {Vec2{center.x + 3.0, center.y}, Vec2{center.x + 5.5, center.y + 1.0},
                    Vec2{center.x + 1.0, center.y - 2.0}, Vec2{center.x + 4.0, center.y + 3.0}};
  return targets;
}

std::vector<Vec2> tensor_traj(const Tensor & m)
{
  std::vector<Vec2> out;
  for (std::size_t t = 0; t < m.rows(); ++t) {
    out.push_back(Vec2{m.at(t, 0), m.at(t, 1)});
  }
  return out;
}

// ---------------------------------------------------------------------------
// 1. Finite-difference gradient sweep.
//
// Four sweeps cover every trainable operation: the full per-agent loss, the
// complete conditional step (latent update, goal and regression heads, pair
// scoring), the biased attention on its own, and a two-step GRU chain. Every
// parameter scalar is perturbed in both directions.

struct CompositeParts
{
  Var total;
  std::vector<std::vector<Vec2>> cand_a;
  std::vector<std::vector<Vec2>> cand_b_in_a;
};

/// The full training objective of the conditional stage, rebuilt on one
/// tape. `dist` is the fixed scoring target; pass nullptr to skip the
/// scoring term and read the candidate values instead.
CompositeParts composite_loss(
  Tape & tape, const Scenario & scene, const TargetSet & targets_a, const TargetSet & targets_b,
  const ModelConfig & config, const std::vector<double> * dist)
{
  const Frame frame_a =
    prospectnet::agent_frame(prospectnet::find_track(scene, "A"), scene.history_len);
  const Frame frame_b =
    prospectnet::agent_frame(prospectnet::find_track(scene, "B"), scene.history_len);

  const auto enc_a = prospectnet::encode_context_t(tape, scene, "A", config);
  const auto enc_b = prospectnet::encode_context_t(tape, scene, "B", config);
  JointAgentInputs in_a{
    enc_a.h, enc_a.m, enc_a.c,
    prospectnet::select_candidates_t(
      tape, prospectnet::pooled_latent(tape, enc_a.h), targets_a, config),
    frame_a, &targets_a};
  JointAgentInputs in_b{
    enc_b.h, enc_b.m, enc_b.c,
    prospectnet::select_candidates_t(
      tape, prospectnet::pooled_latent(tape, enc_b.h), targets_b, config),
    frame_b, &targets_b};
  const auto joint = prospectnet::joint_learning_process(tape, in_a, in_b, config);

  const auto loss_a =
    prospectnet::marginal_loss_from_latent_t(tape, joint.h_a, scene, "A", targets_a, config);
  const auto loss_b =
    prospectnet::marginal_loss_from_latent_t(tape, joint.h_b, scene, "B", targets_b, config);
  Var total = tape.add(loss_a.total, loss_b.total);

  const CandidateVars cand_a = prospectnet::select_candidates_t(
    tape, prospectnet::pooled_latent(tape, joint.h_a), targets_a, config);
  const CandidateVars cand_b = prospectnet::select_candidates_t(
    tape, prospectnet::pooled_latent(tape, joint.h_b), targets_b, config);
  std::vector<Var> aligned_b;
  for (const Var traj : cand_b.trajectories) {
    aligned_b.push_back(prospectnet::align_candidates_t(tape, {traj}, frame_b, frame_a));
  }

  CompositeParts parts;
  if (dist != nullptr) {
    const Var scores =
      prospectnet::score_pairs_t(tape, cand_a.trajectories, joint.h_a, aligned_b, joint.h_b);
    total = tape.add(total, prospectnet::scoring_loss_t(tape, scores, *dist));
  } else {
    for (const Var traj : cand_a.trajectories) {
      parts.cand_a.push_back(tensor_traj(traj.value()));
    }
    for (const Var traj : aligned_b) {
      parts.cand_b_in_a.push_back(tensor_traj(traj.value()));
    }
  }
  parts.total = total;
  return parts;
}

Outcome check_gradients()
{
  const auto start = std::chrono::steady_clock::now();
  const Scenario scene = crossing_scene();
  const ModelConfig config = tiny_config();
  const TargetSet targets_a = targets_near(Vec2{5.0, 0.0});
  const TargetSet targets_b = targets_near(Vec2{1.0, 1.0});

  std::size_t points = 0;
  double worst = 0.0;
  std::string worst_param;
  const auto fold = [&](const oracles::GradCheckResult & result) {
    points += result.checked;
    if (result.max_rel_err > worst) {
      worst = result.max_rel_err;
      worst_param = result.worst_param;
    }
  };

  {
    ParameterStore store;
    std::mt19937_64 rng(21);
    prospectnet::init_marginal_params(store, config, rng);
    {
      Tape tape(&store);
      tape.backward(prospectnet::marginal_loss_t(tape, scene, "A", targets_a, config).total);
    }
    fold(oracles::fd_gradient_check(store, [&]() {
      return prospectnet::marginal_loss(scene, "A", store, targets_a, config).total;
    }));
  }

  {
    ParameterStore store;
    std::mt19937_64 rng(34);
    prospectnet::init_marginal_params(store, config, rng);
    prospectnet::init_joint_params(store, config, rng);
    prospectnet::init_pair_params(store, config, rng);
    randomize_param(store, "joint.attn.wo", rng, 0.3);

    std::vector<double> dist;
    {
      Tape tape(&store);
      const CompositeParts parts =
        composite_loss(tape, scene, targets_a, targets_b, config, nullptr);
      const Frame frame_a =
        prospectnet::agent_frame(prospectnet::find_track(scene, "A"), scene.history_len);
      const TrajectoryPair gt{
        prospectnet::to_frame(
          prospectnet::future_positions(prospectnet::find_track(scene, "A"), scene.history_len),
          frame_a),
        prospectnet::to_frame(
          prospectnet::future_positions(prospectnet::find_track(scene, "B"), scene.history_len),
          frame_a)};
      std::vector<TrajectoryPair> pairs;
      for (const auto & ta : parts.cand_a) {
        for (const auto & tb : parts.cand_b_in_a) {
          pairs.push_back(TrajectoryPair{ta, tb});
        }
      }
      dist = prospectnet::gt_pair_distribution(pairs, gt, config.alpha);
    }
    {
      Tape tape(&store);
      tape.backward(composite_loss(tape, scene, targets_a, targets_b, config, &dist).total);
    }
    fold(oracles::fd_gradient_check(
      store,
      [&]() {
        Tape tape(&store);
        return composite_loss(tape, scene, targets_a, targets_b, config, &dist)
          .total.value()
          .at(0, 0);
      },
      1e-4));
  }

  {
    ParameterStore store;
    std::mt19937_64 rng(55);
    store.create("q", random_tensor(3, 4, rng, 1.0));
    store.create("k", random_tensor(5, 4, rng, 1.0));
    store.create("v", random_tensor(5, 4, rng, 1.0));
    store.create("kb", random_tensor(5, 4, rng, 1.0));
    const Tensor mask = random_tensor(3, 5, rng, 1.0);
    const auto build = [&](Tape & tape) {
      const auto attn = prospectnet::weighted_attention_full(
        tape, tape.param("q"), tape.param("k"), tape.param("v"), tape.param("kb"));
      return tape.add(
        tape.sum(attn.output), tape.sum(tape.mul(attn.weights, tape.constant(mask))));
    };
    {
      Tape tape(&store);
      tape.backward(build(tape));
    }
    fold(oracles::fd_gradient_check(store, [&]() {
      Tape tape(&store);
      return build(tape).value().at(0, 0);
    }));
  }

  {
    ParameterStore store;
    std::mt19937_64 rng(56);
    prospectnet::init_gru(store, "g", 3, 4, rng);
    randomize_param(store, "g.bz", rng, 0.5);
    randomize_param(store, "g.br", rng, 0.5);
    randomize_param(store, "g.bc", rng, 0.5);
    store.create("g.x", random_tensor(2, 3, rng, 1.0));
    store.create("g.h", random_tensor(2, 4, rng, 1.0));
    const Tensor mask = random_tensor(2, 4, rng, 1.0);
    const auto build = [&](Tape & tape) {
      const auto p = prospectnet::gru_vars(tape, "g");
      const Var x = tape.param("g.x");
      const Var h1 = prospectnet::gru_step(tape, x, tape.param("g.h"), p);
      const Var h2 = prospectnet::gru_step(tape, x, h1, p);
      return tape.sum(tape.mul(h2, tape.constant(mask)));
    };
    {
      Tape tape(&store);
      tape.backward(build(tape));
    }
    fold(oracles::fd_gradient_check(store, [&]() {
      Tape tape(&store);
      return build(tape).value().at(0, 0);
    }));
  }

  const double elapsed = seconds_since(start);
  Outcome out;
  out.ok = points >= 100 && worst < 1e-4 && elapsed < 120.0;
  out.detail = std::to_string(points) + " points, max rel err " + fmt("%.2e", worst) + " (" +
               worst_param + "), " + fmt("%.1f", elapsed) + " s";
  return out;
}

// ---------------------------------------------------------------------------
// 2. Attention invariants: rows sum to one, a shared bias row cancels, and a
// lone key token passes its value through untouched.

Outcome check_attention_invariants()
{
  std::mt19937_64 rng(77);
  double worst_row_sum = 0.0;
  double worst_bias_shift = 0.0;
  bool singles_exact = true;

  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t width = 2 + rng() % 7;
    const std::size_t n_q = 1 + rng() % 5;
    const std::size_t n_kv = 1 + rng() % 6;
    Tape tape;
    const auto attn = prospectnet::weighted_attention_full(
      tape, tape.constant(random_tensor(n_q, width, rng, 2.0)),
      tape.constant(random_tensor(n_kv, width, rng, 2.0)),
      tape.constant(random_tensor(n_kv, width, rng, 2.0)),
      tape.constant(random_tensor(n_kv, width, rng, 2.0)));
    for (std::size_t r = 0; r < n_q; ++r) {
      double sum = 0.0;
      for (std::size_t c = 0; c < n_kv; ++c) {
        sum += attn.weights.value().at(r, c);
      }
      worst_row_sum = std::max(worst_row_sum, std::abs(sum - 1.0));
    }
  }

  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t width = 2 + rng() % 7;
    const std::size_t n_q = 1 + rng() % 5;
    const std::size_t n_kv = 1 + rng() % 6;
    const Tensor q = random_tensor(n_q, width, rng, 2.0);
    const Tensor k = random_tensor(n_kv, width, rng, 2.0);
    const Tensor v = random_tensor(n_kv, width, rng, 2.0);
    const Tensor shared_row = random_tensor(1, width, rng, 2.0);
    Tensor constant_bias = Tensor::zeros(n_kv, width);
    for (std::size_t r = 0; r < n_kv; ++r) {
      for (std::size_t c = 0; c < width; ++c) {
        constant_bias.at(r, c) = shared_row.at(0, c);
      }
    }
    Tape tape;
    const auto biased = prospectnet::weighted_attention_full(
      tape, tape.constant(q), tape.constant(k), tape.constant(v), tape.constant(constant_bias));
    const auto plain = prospectnet::weighted_attention_full(
      tape, tape.constant(q), tape.constant(k), tape.constant(v),
      tape.constant(Tensor::zeros(n_kv, width)));
    for (std::size_t idx = 0; idx < biased.output.value().size(); ++idx) {
      worst_bias_shift = std::max(
        worst_bias_shift, std::abs(biased.output.value()[idx] - plain.output.value()[idx]));
    }
    for (std::size_t idx = 0; idx < biased.weights.value().size(); ++idx) {
      worst_bias_shift = std::max(
        worst_bias_shift, std::abs(biased.weights.value()[idx] - plain.weights.value()[idx]));
    }
  }

  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t width = 2 + rng() % 7;
    const std::size_t n_q = 1 + rng() % 5;
    const Tensor v = random_tensor(1, width, rng, 2.0);
    Tape tape;
    const auto attn = prospectnet::weighted_attention_full(
      tape, tape.constant(random_tensor(n_q, width, rng, 2.0)),
      tape.constant(random_tensor(1, width, rng, 2.0)), tape.constant(v),
      tape.constant(random_tensor(1, width, rng, 2.0)));
    for (std::size_t r = 0; r < n_q; ++r) {
      singles_exact = singles_exact && attn.weights.value().at(r, 0) == 1.0;
      for (std::size_t c = 0; c < width; ++c) {
        singles_exact = singles_exact && attn.output.value().at(r, c) == v.at(0, c);
      }
    }
  }

  Outcome out;
  out.ok = worst_row_sum <= 1e-12 && worst_bias_shift <= 1e-12 && singles_exact;
  out.detail = "row-sum dev " + fmt("%.2e", worst_row_sum) + ", shared-bias dev " +
               fmt("%.2e", worst_bias_shift) +
               (singles_exact ? ", single-token exact" : ", single-token NOT exact");
  return out;
}

// ---------------------------------------------------------------------------
// 3. A freshly initialized conditional stage (zero output projection) must
// reproduce the per-agent predictions bit for bit.

Outcome check_untrained_identity()
{
  std::size_t mismatches = 0;
  std::size_t compared = 0;

  const auto compare_scene = [&](const Scenario & scene, const TargetSet & targets_a,
                                 const TargetSet & targets_b, const ModelConfig & config,
                                 std::uint64_t seed) {
    ParameterStore store;
    std::mt19937_64 rng(seed);
    prospectnet::init_marginal_params(store, config, rng);
    prospectnet::init_joint_params(store, config, rng);

    const auto marg_a = prospectnet::marginal_predict(scene, "A", store, targets_a, config);
    const auto marg_b = prospectnet::marginal_predict(scene, "B", store, targets_b, config);
    const auto joint =
      prospectnet::joint_predict(scene, "A", "B", store, targets_a, targets_b, config);

    const auto check_bits = [&](double got, double want) {
      ++compared;
      if (got != want) {
        ++mismatches;
      }
    };
    const auto check_set = [&](const prospectnet::CandidateSet & got,
                               const prospectnet::CandidateSet & want) {
      if (got.trajectories.size() != want.trajectories.size()) {
        ++mismatches;
        return;
      }
      for (std::size_t i = 0; i < got.trajectories.size(); ++i) {
        check_bits(got.probabilities[i], want.probabilities[i]);
        for (std::size_t t = 0; t < got.trajectories[i].size(); ++t) {
          check_bits(got.trajectories[i][t].x, want.trajectories[i][t].x);
          check_bits(got.trajectories[i][t].y, want.trajectories[i][t].y);
        }
      }
    };
    check_set(joint.candidates_a, marg_a.candidates);
    check_set(joint.candidates_b, marg_b.candidates);
    if (joint.goal_indices_a != marg_a.goal_indices ||
        joint.goal_indices_b != marg_b.goal_indices) {
      ++mismatches;
    }
    for (std::size_t k = 0; k < joint.latent_a.h.size(); ++k) {
      check_bits(joint.latent_a.h[k], marg_a.latent.h[k]);
      check_bits(joint.latent_b.h[k], marg_b.latent.h[k]);
    }
  };

  {
    ModelConfig config = tiny_config();
    config.n_candidates = 3;
    compare_scene(
      crossing_scene(), targets_near(Vec2{5.0, 0.0}), targets_near(Vec2{1.0, 1.0}), config, 34);
  }
  {
    ModelConfig config;
    config.embed_dim = 16;
    config.gru_hidden = 16;
    config.n_candidates = 8;
    config.top_k = 4;
    config.targets.n_targets = 300;
    const Scenario scene =
      prospectnet::generate_synthetic(prospectnet::ScenarioKind::kYieldTurn, 3);
    const auto targets_for = [&](const std::string & id) {
      const AgentTrack & track = prospectnet::find_track(scene, id);
      std::vector<Vec2> centers;
      for (const AgentTrack & other : scene.tracks) {
        if (other.agent_id != id) {
          centers.push_back(other.positions[scene.history_len - 1]);
        }
      }
      return prospectnet::sample_targets(
        scene.map, prospectnet::agent_frame(track, scene.history_len), config.targets, centers, 9);
    };
    compare_scene(scene, targets_for("A"), targets_for("B"), config, 35);
  }

  Outcome out;
  out.ok = mismatches == 0 && compared > 0;
  out.detail = std::to_string(mismatches) + " of " + std::to_string(compared) +
               " values differ across 2 scenes";
  return out;
}

// ---------------------------------------------------------------------------
// 4. The score-distribution target matches an extended-precision softmax of
// the pair deviations, and the two-pair head case lands on its known value.

Outcome check_pair_distribution()
{
  std::mt19937_64 rng(91);
  std::uniform_real_distribution<double> coord(-20.0, 20.0);
  const double alphas[] = {0.3, 1.0, 2.5};
  double worst = 0.0;

  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t count = 1 + rng() % 12;
    const std::size_t steps = 1 + rng() % 6;
    const double alpha = alphas[rng() % 3];
    const auto traj = [&]() {
      std::vector<Vec2> out;
      for (std::size_t t = 0; t < steps; ++t) {
        out.push_back(Vec2{coord(rng), coord(rng)});
      }
      return out;
    };
    const TrajectoryPair gt{traj(), traj()};
    std::vector<TrajectoryPair> pairs;
    for (std::size_t p = 0; p < count; ++p) {
      pairs.push_back(TrajectoryPair{traj(), traj()});
    }

    const auto got = prospectnet::gt_pair_distribution(pairs, gt, alpha);

    const auto linf = [&](const std::vector<Vec2> & a, const std::vector<Vec2> & b) {
      long double m = 0.0L;
      for (std::size_t t = 0; t < a.size(); ++t) {
        m = std::max(m, std::fabsl(static_cast<long double>(a[t].x) - b[t].x));
        m = std::max(m, std::fabsl(static_cast<long double>(a[t].y) - b[t].y));
      }
      return m;
    };
    std::vector<std::vector<long double>> logits(1);
    for (const auto & pair : pairs) {
      const long double dev =
        0.5L * (linf(pair.traj_a, gt.traj_a) + linf(pair.traj_b, gt.traj_b));
      logits[0].push_back(-dev / (2.0L * static_cast<long double>(alpha)));
    }
    const auto expected = oracles::softmax_rows(logits)[0];
    for (std::size_t p = 0; p < count; ++p) {
      worst = std::max(worst, std::abs(got[p] - static_cast<double>(expected[p])));
    }
  }

  const std::vector<Vec2> origin(3, Vec2{0.0, 0.0});
  const TrajectoryPair gt{origin, origin};
  const std::vector<Vec2> off_one(3, Vec2{1.0, 0.0});
  const std::vector<Vec2> off_three(3, Vec2{3.0, 0.0});
  const auto head = prospectnet::gt_pair_distribution(
    {TrajectoryPair{off_one, off_one}, TrajectoryPair{off_three, off_three}}, gt, 1.0);

  Outcome out;
  out.ok = worst <= 1e-12 && std::abs(head[0] - 0.7311) <= 1e-4 &&
           std::abs(head[1] - 0.2689) <= 1e-4;
  out.detail = "softmax dev " + fmt("%.2e", worst) + ", unit-gap split (" +
               fmt("%.4f", head[0]) + ", " + fmt("%.4f", head[1]) + ")";
  return out;
}

// ---------------------------------------------------------------------------
// 5. Every evaluation metric agrees with its brute-force reimplementation on
// random small instances, and the rectangle IoU agrees with polygon clipping.

EvalRecord random_record(std::mt19937_64 & rng)
{
  std::uniform_real_distribution<double> coord(-30.0, 30.0);
  std::uniform_real_distribution<double> score(0.0, 1.0);
  std::uniform_real_distribution<double> speed(0.0, 15.0);
  std::uniform_real_distribution<double> angle(-3.1, 3.1);
  std::uniform_real_distribution<double> box_len(1.0, 6.0);
  std::uniform_real_distribution<double> box_wid(0.5, 3.0);
  const std::size_t horizon = 1 + rng() % 10;
  const std::size_t modes = 1 + rng() % 6;

  const auto traj = [&]() {
    std::vector<Vec2> out;
    for (std::size_t t = 0; t < horizon; ++t) {
      out.push_back(Vec2{coord(rng), coord(rng)});
    }
    return out;
  };
  const auto angles = [&]() {
    std::vector<double> out;
    for (std::size_t t = 0; t < horizon; ++t) {
      out.push_back(angle(rng));
    }
    return out;
  };

  EvalRecord record;
  record.gt = TrajectoryPair{traj(), traj()};
  record.gt_headings_a = angles();
  record.gt_headings_b = angles();
  for (std::size_t k = 0; k < modes; ++k) {
    PairPrediction mode;
    mode.traj_a = traj();
    mode.traj_b = traj();
    mode.score = score(rng);
    record.pairs.push_back(mode);
  }
  record.shape_a = AgentShape{box_len(rng), box_wid(rng)};
  record.shape_b = AgentShape{box_len(rng), box_wid(rng)};
  const std::size_t n_others = rng() % 5;
  for (std::size_t o = 0; o < n_others; ++o) {
    record.others.push_back(OtherAgentFuture{traj(), angles(), AgentShape{box_len(rng), box_wid(rng)}});
  }
  record.speed_a = speed(rng);
  record.speed_b = speed(rng);
  return record;
}

Outcome check_metric_oracles()
{
  std::mt19937_64 rng(101);
  std::vector<EvalRecord> records;
  double worst_metric = 0.0;
  for (int i = 0; i < 100; ++i) {
    records.push_back(random_record(rng));
    const EvalRecord & record = records.back();
    worst_metric = std::max(
      worst_metric, std::abs(prospectnet::min_ade(record) -
                             static_cast<double>(oracles::record_min_ade(record))));
    worst_metric = std::max(
      worst_metric, std::abs(prospectnet::min_fde(record) -
                             static_cast<double>(oracles::record_min_fde(record))));
  }
  worst_metric = std::max(
    worst_metric, std::abs(prospectnet::miss_rate(records) -
                           static_cast<double>(oracles::batch_miss_rate(records, 2.0L))));
  worst_metric = std::max(
    worst_metric, std::abs(prospectnet::overlap_rate(records) -
                           static_cast<double>(oracles::batch_overlap_rate(records, 0.0L))));
  worst_metric = std::max(
    worst_metric, std::abs(prospectnet::map_metric(records) -
                           static_cast<double>(oracles::batch_ap11(records, 2.0L))));

  std::uniform_real_distribution<double> pos(-20.0, 20.0);
  std::uniform_real_distribution<double> angle(-3.14, 3.14);
  std::uniform_real_distribution<double> box_len(1.0, 6.0);
  std::uniform_real_distribution<double> box_wid(0.5, 3.0);
  double worst_iou = 0.0;
  for (int i = 0; i < 500; ++i) {
    const Frame pose_a{Vec2{pos(rng), pos(rng)}, angle(rng)};
    const Frame pose_b{Vec2{pos(rng) * 0.2, pos(rng) * 0.2}, angle(rng)};
    const AgentShape shape_a{box_len(rng), box_wid(rng)};
    const AgentShape shape_b{box_len(rng), box_wid(rng)};
    const double got = prospectnet::oriented_rect_iou(pose_a, shape_a, pose_b, shape_b);
    const double want =
      static_cast<double>(oracles::rect_iou_clip(pose_a, shape_a, pose_b, shape_b));
    worst_iou = std::max(worst_iou, std::abs(got - want));
  }

  Outcome out;
  out.ok = worst_metric <= 1e-9 && worst_iou <= 1e-9;
  out.detail = "100 records, metric dev " + fmt("%.2e", worst_metric) + "; 500 boxes, IoU dev " +
               fmt("%.2e", worst_iou);
  return out;
}

// ---------------------------------------------------------------------------
// 6. Mode selection equals the independent greedy-with-decay routine and the
// accepted pairs respect the threshold in force when they were accepted.

Outcome check_pair_selection()
{
  std::mt19937_64 rng(57);
  std::uniform_real_distribution<double> coord(-5.0, 5.0);
  std::uniform_real_distribution<double> score_dist(0.0, 1.0);
  const double eps_choices[] = {0.5, 2.0, 4.0};
  const double gamma_choices[] = {0.3, 0.5, 0.7};

  std::size_t index_mismatches = 0;
  std::size_t separation_violations = 0;

  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t n_a = 1 + rng() % 5;
    const std::size_t n_b = 1 + rng() % 5;
    const std::size_t count = n_a * n_b;
    const std::size_t k = 1 + rng() % count;
    const double eps0 = eps_choices[rng() % 3];
    const double gamma = gamma_choices[rng() % 3];

    std::vector<TrajectoryPair> pairs;
    std::vector<double> scores;
    std::vector<oracles::NmsPair> mirror;
    for (std::size_t p = 0; p < count; ++p) {
      TrajectoryPair pair;
      pair.traj_a = {Vec2{coord(rng), coord(rng)}, Vec2{coord(rng), coord(rng)}};
      pair.traj_b = {Vec2{coord(rng), coord(rng)}, Vec2{coord(rng), coord(rng)}};
      const double s = score_dist(rng);
      mirror.push_back(oracles::NmsPair{pair.traj_a.back().x, pair.traj_a.back().y,
                                        pair.traj_b.back().x, pair.traj_b.back().y, s});
      pairs.push_back(pair);
      scores.push_back(s);
    }

    const auto picked = prospectnet::select_topk_pairs(pairs, scores, k, eps0, gamma);
    const auto expected = oracles::nms_select(mirror, k, eps0, gamma);
    if (picked.size() != k || expected.size() != k) {
      ++index_mismatches;
      continue;
    }
    for (std::size_t i = 0; i < k; ++i) {
      if (picked[i].source_index != expected[i]) {
        ++index_mismatches;
      }
    }

    // Acceptance-order trace: replay the decay loop and verify each accepted
    // pair clears every earlier acceptance at the threshold in force.
    const auto separation = [&](std::size_t lhs, std::size_t rhs) {
      const double da = std::hypot(
        static_cast<double>(mirror[lhs].ax - mirror[rhs].ax),
        static_cast<double>(mirror[lhs].ay - mirror[rhs].ay));
      const double db = std::hypot(
        static_cast<double>(mirror[lhs].bx - mirror[rhs].bx),
        static_cast<double>(mirror[lhs].by - mirror[rhs].by));
      return std::max(da, db);
    };
    std::vector<std::size_t> order(count);
    for (std::size_t i = 0; i < count; ++i) {
      order[i] = i;
    }
    std::sort(order.begin(), order.end(), [&](std::size_t lhs, std::size_t rhs) {
      if (scores[lhs] != scores[rhs]) {
        return scores[lhs] > scores[rhs];
      }
      return lhs < rhs;
    });
    std::vector<char> taken(count, 0);
    std::vector<std::size_t> accepted;
    double eps = eps0;
    while (accepted.size() < k && eps >= 0.01) {
      for (const std::size_t idx : order) {
        if (taken[idx] != 0 || accepted.size() >= k) {
          continue;
        }
        bool clear = true;
        for (const std::size_t prior : accepted) {
          if (separation(idx, prior) < eps) {
            clear = false;
            break;
          }
        }
        if (clear) {
          for (const std::size_t prior : accepted) {
            if (separation(idx, prior) < eps) {
              ++separation_violations;
            }
          }
          taken[idx] = 1;
          accepted.push_back(idx);
        }
      }
      eps *= gamma;
    }
    std::set<std::size_t> final_set;
    for (const auto & pair : picked) {
      final_set.insert(pair.source_index);
    }
    std::set<std::size_t> traced(accepted.begin(), accepted.end());
    for (const std::size_t idx : order) {
      if (traced.size() < k && traced.count(idx) == 0) {
        traced.insert(idx);
      }
    }
    if (traced != final_set) {
      ++index_mismatches;
    }
  }

  Outcome out;
  out.ok = index_mismatches == 0 && separation_violations == 0;
  out.detail = "1000 trials, " + std::to_string(index_mismatches) + " selection mismatches, " +
               std::to_string(separation_violations) + " separation violations";
  return out;
}

// ---------------------------------------------------------------------------
// 7. Interactive-pair mining equals brute force over every agent pair and is
// monotone in the distance threshold.

AgentTrack walk_track(
  const std::string & id, std::mt19937_64 & rng, std::size_t steps)
{
  std::uniform_real_distribution<double> start(-30.0, 30.0);
  std::uniform_real_distribution<double> move(-1.5, 1.5);
  std::bernoulli_distribution hole(0.15);
  AgentTrack track;
  track.agent_id = id;
  track.is_predictable = true;
  Vec2 p{start(rng), start(rng)};
  for (std::size_t t = 0; t < steps; ++t) {
    p = {p.x + move(rng), p.y + move(rng)};
    track.positions.push_back(p);
    track.headings.push_back(0.0);
    track.valid.push_back(hole(rng) ? 0 : 1);
  }
  return track;
}

Scenario random_mining_scenario(std::mt19937_64 & rng, std::size_t agents)
{
  Scenario s;
  s.id = "mine-fixture";
  s.history_len = 3;
  s.horizon = 9;
  for (std::size_t i = 0; i < agents; ++i) {
    s.tracks.push_back(walk_track("ag" + std::to_string(i), rng, s.steps()));
  }
  s.map.push_back(MapPolyline{"lane", {{-50.0, 0.0}, {50.0, 0.0}}});
  return s;
}

Outcome check_mining()
{
  std::mt19937_64 rng(42);
  std::size_t set_mismatches = 0;
  std::size_t nesting_breaks = 0;

  const auto oracle_interactive = [](const AgentTrack & a, const AgentTrack & b,
                                     std::size_t history_len, double threshold) {
    for (std::size_t t = history_len; t < a.positions.size(); ++t) {
      if (!a.valid[t] || !b.valid[t]) {
        continue;
      }
      const double dx = a.positions[t].x - b.positions[t].x;
      const double dy = a.positions[t].y - b.positions[t].y;
      if (std::sqrt(dx * dx + dy * dy) < threshold) {
        return true;
      }
    }
    return false;
  };

  for (int trial = 0; trial < 200; ++trial) {
    const Scenario s = random_mining_scenario(rng, 8);
    const double threshold = std::uniform_real_distribution<double>(1.0, 8.0)(rng);
    const auto pairs = prospectnet::mine_interactive_pairs(s, threshold);
    const std::set<std::pair<std::string, std::string>> got(pairs.begin(), pairs.end());
    std::set<std::pair<std::string, std::string>> expected;
    for (std::size_t i = 0; i < s.tracks.size(); ++i) {
      for (std::size_t j = i + 1; j < s.tracks.size(); ++j) {
        if (oracle_interactive(s.tracks[i], s.tracks[j], s.history_len, threshold)) {
          const auto key = std::minmax(s.tracks[i].agent_id, s.tracks[j].agent_id);
          expected.insert({key.first, key.second});
        }
      }
    }
    if (got != expected) {
      ++set_mismatches;
    }

    std::set<std::pair<std::string, std::string>> previous;
    for (const double t : {1.0, 2.0, 3.5, 5.0, 6.5, 8.0}) {
      const auto mined = prospectnet::mine_interactive_pairs(s, t);
      const std::set<std::pair<std::string, std::string>> current(mined.begin(), mined.end());
      if (!std::includes(current.begin(), current.end(), previous.begin(), previous.end())) {
        ++nesting_breaks;
      }
      previous = current;
    }
  }

  Outcome out;
  out.ok = set_mismatches == 0 && nesting_breaks == 0;
  out.detail = "200 scenarios, " + std::to_string(set_mismatches) + " brute-force mismatches, " +
               std::to_string(nesting_breaks) + " threshold-nesting breaks";
  return out;
}

// ---------------------------------------------------------------------------
// 8. Desk-scale overfit: training both stages on 32 yield scenes drives the
// training-set joint minADE under half a meter.

RunConfig pipeline_config(const fs::path & base)
{
  RunConfig config;
  config.paths.scenarios = (base / "data" / "scenarios.jsonl").string();
  config.paths.pairs = (base / "data" / "pairs.jsonl").string();
  config.paths.marginal_checkpoint = (base / "out" / "marginal.ckpt").string();
  config.paths.joint_checkpoint = (base / "out" / "joint.ckpt").string();
  config.paths.predictions = (base / "out" / "predictions.jsonl").string();
  config.paths.report = (base / "out" / "report.json").string();
  config.paths.target_report = (base / "out" / "targets.json").string();
  config.paths.plot = (base / "out" / "plot.svg").string();
  return config;
}

Outcome check_overfit(const fs::path & root)
{
  const auto start = std::chrono::steady_clock::now();
  RunConfig config = pipeline_config(root / "overfit");
  config.data.kind = "yield_turn";
  config.data.count = 32;
  config.optimizer.steps = 1000;
  config.optimizer.seed = 5;

  std::ostringstream sink;
  prospectnet::run_gen_data(config, "", sink);
  prospectnet::run_mine_pairs(config, "", sink);
  prospectnet::run_train_marginal(config, "", sink);
  prospectnet::run_train_joint(config, "", sink);
  prospectnet::run_predict(config, "", sink);
  const MetricsReport report = prospectnet::run_evaluate(config, "", sink);

  const double elapsed = seconds_since(start);
  Outcome out;
  out.ok = report.min_ade < 0.5 && elapsed < 600.0;
  out.detail = "32 yield scenes, 1000+1000 steps, train minADE " + fmt("%.3f", report.min_ade) +
               " m, " + fmt("%.1f", elapsed) + " s";
  return out;
}

// ---------------------------------------------------------------------------
// 9. Held-out comparison: averaged over three seeds, the conditional model's
// minFDE does not exceed the factorized product baseline.

Outcome check_held_out(const fs::path & root)
{
  const std::uint64_t seeds[] = {11, 12, 13};
  std::ostringstream per_seed;
  double joint_sum = 0.0;
  double baseline_sum = 0.0;
  int violations = 0;

  for (const std::uint64_t seed : seeds) {
    const fs::path base = root / ("held_seed_" + std::to_string(seed));
    std::ostringstream sink;

    RunConfig train = pipeline_config(base / "train");
    train.data.kind = "yield_turn";
    train.data.count = 64;
    train.optimizer.steps = 1000;
    train.optimizer.seed = seed;
    prospectnet::run_gen_data(train, "", sink);
    prospectnet::run_mine_pairs(train, "", sink);
    prospectnet::run_train_marginal(train, "", sink);
    prospectnet::run_train_joint(train, "", sink);

    RunConfig held = pipeline_config(base / "held");
    held.data.kind = "yield_turn";
    held.data.count = 200;
    held.optimizer.seed = seed + 1000;
    held.paths.marginal_checkpoint = train.paths.marginal_checkpoint;
    held.paths.joint_checkpoint = train.paths.joint_checkpoint;
    prospectnet::run_gen_data(held, "", sink);
    prospectnet::run_mine_pairs(held, "", sink);

    held.predict.mode = "joint";
    held.paths.predictions = (base / "held" / "out" / "joint.jsonl").string();
    held.paths.report = (base / "held" / "out" / "joint_report.json").string();
    prospectnet::run_predict(held, "", sink);
    const MetricsReport joint_report = prospectnet::run_evaluate(held, "", sink);

    held.predict.mode = "baseline";
    held.paths.predictions = (base / "held" / "out" / "baseline.jsonl").string();
    held.paths.report = (base / "held" / "out" / "baseline_report.json").string();
    prospectnet::run_predict(held, "", sink);
    const MetricsReport baseline_report = prospectnet::run_evaluate(held, "", sink);

    joint_sum += joint_report.min_fde;
    baseline_sum += baseline_report.min_fde;
    if (joint_report.min_fde > baseline_report.min_fde) {
      ++violations;
    }
    per_seed << " seed " << seed << ": " << fmt("%.3f", joint_report.min_fde) << " vs "
             << fmt("%.3f", baseline_report.min_fde) << ";";
  }

  const double joint_mean = joint_sum / 3.0;
  const double baseline_mean = baseline_sum / 3.0;
  Outcome out;
  out.ok = joint_mean <= baseline_mean;
  out.detail = "held-out minFDE joint vs baseline, mean " + fmt("%.3f", joint_mean) + " vs " +
               fmt("%.3f", baseline_mean) + ";" + per_seed.str() + " " +
               std::to_string(violations) + " single-seed violations";
  return out;
}

// ---------------------------------------------------------------------------
// 10. Goal sampling: more targets never hurt the best-mode displacement, and
// the fourteen shipped parameter sets carry exactly the published values.

Outcome check_target_sampling()
{
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> coord(-50.0, 50.0);
  std::size_t monotonicity_breaks = 0;

  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t total = 2 + rng() % 39;
    const std::size_t subset = 1 + rng() % total;
    TargetSet sup;
    for (std::size_t i = 0; i < total; ++i) {
      sup.points.push_back(Vec2{coord(rng), coord(rng)});
    }
    TargetSet sub;
    sub.points.assign(sup.points.begin(), sup.points.begin() + static_cast<long>(subset));
    const Vec2 endpoint{coord(rng), coord(rng)};
    if (prospectnet::best_mode_displacement(sup, endpoint) >
        prospectnet::best_mode_displacement(sub, endpoint)) {
      ++monotonicity_breaks;
    }
  }

  struct Row
  {
    std::size_t n;
    double x0, x1, y0, y1, lane, object;
  };
  const Row expected[14] = {
    {8000, -100.0, 50.0, -80.0, 80.0, 80.0, 60.0},
    {8000, -150.0, 100.0, -100.0, 100.0, 160.0, 120.0},
    {8000, -200.0, 100.0, -150.0, 150.0, 160.0, 120.0},
    {10000, -200.0, 100.0, -150.0, 150.0, 160.0, 120.0},
    {6000, -150.0, 100.0, -100.0, 100.0, 120.0, 100.0},
    {8000, -300.0, 200.0, -200.0, 200.0, 200.0, 200.0},
    {6000, -200.0, 100.0, -150.0, 150.0, 100.0, 100.0},
    {6000, -200.0, 100.0, -150.0, 150.0, 160.0, 120.0},
    {10000, -200.0, 100.0, -100.0, 100.0, 160.0, 120.0},
    {12000, -200.0, 100.0, -150.0, 150.0, 140.0, 100.0},
    {12000, -200.0, 100.0, -100.0, 100.0, 160.0, 120.0},
    {12000, -200.0, 100.0, -100.0, 100.0, 200.0, 200.0},
    {16000, -200.0, 100.0, -100.0, 100.0, 200.0, 200.0},
    {20000, -200.0, 100.0, -100.0, 100.0, 200.0, 200.0},
  };
  std::size_t preset_mismatches = 0;
  for (int preset = 1; preset <= 14; ++preset) {
    const TargetParams got = prospectnet::preset_params(preset);
    const Row & want = expected[preset - 1];
    if (got.n_targets != want.n || got.x_min != want.x0 || got.x_max != want.x1 ||
        got.y_min != want.y0 || got.y_max != want.y1 || got.lane_radius != want.lane ||
        got.object_radius != want.object) {
      ++preset_mismatches;
    }
  }

  Outcome out;
  out.ok = monotonicity_breaks == 0 && preset_mismatches == 0;
  out.detail = "200 superset trials, " + std::to_string(monotonicity_breaks) +
               " regressions; " + std::to_string(14 - preset_mismatches) + "/14 presets exact";
  return out;
}

}  // namespace

int main()
{
  const fs::path root = fs::temp_directory_path() / "pn_acceptance";
  fs::remove_all(root);
  fs::create_directories(root);

  struct Check
  {
    const char * name;
    std::function<Outcome()> run;
  };
  const std::vector<Check> checks = {
    {"gradient sweep", check_gradients},
    {"attention invariants", check_attention_invariants},
    {"untrained joint identity", check_untrained_identity},
    {"pair score distribution", check_pair_distribution},
    {"metric oracles", check_metric_oracles},
    {"mode selection oracle", check_pair_selection},
    {"pair mining brute force", check_mining},
    {"training-set overfit", [&]() { return check_overfit(root); }},
    {"held-out joint vs baseline", [&]() { return check_held_out(root); }},
    {"target sampling", check_target_sampling},
  };

  int failures = 0;
  for (std::size_t i = 0; i < checks.size(); ++i) {
    Outcome outcome;
    try {
      outcome = checks[i].run();
    } catch (const std::exception & err) {
      outcome.ok = false;
      outcome.detail = std::string("exception: ") + err.what();
    }
    if (!outcome.ok) {
      ++failures;
    }
    std::printf(
      "[%2zu/%zu] %s %s: %s\n", i + 1, checks.size(), outcome.ok ? "PASS" : "FAIL",
      checks[i].name, outcome.detail.c_str());
    std::fflush(stdout);
  }

  if (failures == 0) {
    std::printf("acceptance: all %zu checks passed\n", checks.size());
    return 0;
  }
  std::printf("acceptance: %d of %zu checks FAILED\n", failures, checks.size());
  return 1;
}
