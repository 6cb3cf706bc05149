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

#include <doctest.h>

#include <cmath>
#include <cstddef>
#include <random>
#include <vector>

#include "oracles.hpp"
#include "prospectnet/errors.hpp"
#include "prospectnet/metrics.hpp"

using prospectnet::AgentShape;
using prospectnet::ContractError;
using prospectnet::EvalRecord;
using prospectnet::Frame;
using prospectnet::OtherAgentFuture;
using prospectnet::PairPrediction;
using prospectnet::TrajectoryPair;
using prospectnet::ValidationError;
using prospectnet::Vec2;

namespace
{

std::vector<Vec2> line(Vec2 start, Vec2 step, std::size_t n)
{
  std::vector<Vec2> out;
  for (std::size_t t = 0; t < n; ++t) {
    out.push_back(Vec2{start.x + step.x * static_cast<double>(t),
                       start.y + step.y * static_cast<double>(t)});
  }
  return out;
}

std::vector<Vec2> offset_by(std::vector<Vec2> traj, double dx, double dy)
{
  for (Vec2 & p : traj) {
    p.x += dx;
    p.y += dy;
  }
  return traj;
}

/// Two agents driving straight along +x, lanes 6 m apart, no bystanders.
EvalRecord straight_record(std::size_t horizon = 4)
{
  EvalRecord record;
  record.gt.traj_a = line(Vec2{1.0, 0.0}, Vec2{1.0, 0.0}, horizon);
  record.gt.traj_b = line(Vec2{1.0, 6.0}, Vec2{1.0, 0.0}, horizon);
  record.gt_headings_a.assign(horizon, 0.0);
  record.gt_headings_b.assign(horizon, 0.0);
  record.speed_a = 10.0;
  record.speed_b = 10.0;
  return record;
}

PairPrediction mode_of(std::vector<Vec2> a, std::vector<Vec2> b, double score)
{
  PairPrediction out;
  out.traj_a = std::move(a);
  out.traj_b = std::move(b);
  out.score = score;
  return out;
}

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
    record.pairs.push_back(mode_of(traj(), traj(), score(rng)));
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

}  // namespace

TEST_CASE("a mode matching the ground truth zeroes both displacement metrics")
{
  EvalRecord record = straight_record();
  record.pairs.push_back(
    mode_of(offset_by(record.gt.traj_a, 3.0, 1.0), offset_by(record.gt.traj_b, -2.0, 0.5), 0.4));
  record.pairs.push_back(mode_of(record.gt.traj_a, record.gt.traj_b, 0.6));

  CHECK(prospectnet::min_ade(record) == 0.0);
  CHECK(prospectnet::min_fde(record) == 0.0);
}

TEST_CASE("a single constant-offset mode scores the offset length")
{
  EvalRecord record = straight_record();
  record.pairs.push_back(
    mode_of(offset_by(record.gt.traj_a, 3.0, 4.0), offset_by(record.gt.traj_b, 3.0, 4.0), 1.0));

  CHECK(prospectnet::min_ade(record) == 5.0);
  CHECK(prospectnet::min_fde(record) == 5.0);
}

TEST_CASE("displacement minima may come from different modes")
{
  EvalRecord record = straight_record();
  std::vector<Vec2> late_a = record.gt.traj_a;
  std::vector<Vec2> late_b = record.gt.traj_b;
  late_a.back().y += 6.0;
  late_b.back().y += 6.0;
  record.pairs.push_back(mode_of(late_a, late_b, 0.5));
  record.pairs.push_back(
    mode_of(offset_by(record.gt.traj_a, 0.0, 2.0), offset_by(record.gt.traj_b, 0.0, 2.0), 0.5));

  CHECK(prospectnet::min_ade(record) == 1.5);
  CHECK(prospectnet::min_fde(record) == 2.0);
}

TEST_CASE("adding a mode never worsens the displacement minima")
{
  std::mt19937_64 rng(70);
  for (int trial = 0; trial < 50; ++trial) {
    EvalRecord base = random_record(rng);
    EvalRecord extended = base;
    extended.pairs.push_back(
      mode_of(extended.pairs.front().traj_a, extended.pairs.front().traj_b, 0.1));
    for (Vec2 & p : extended.pairs.back().traj_a) {
      p.x += 1.0;
    }
    CHECK(prospectnet::min_ade(extended) <= prospectnet::min_ade(base));
    CHECK(prospectnet::min_fde(extended) <= prospectnet::min_fde(base));
  }
}

TEST_CASE("the miss threshold scales with speed between the breakpoints")
{
  CHECK(prospectnet::miss_threshold(0.0) == 1.0);
  CHECK(prospectnet::miss_threshold(1.4) == 1.0);
  CHECK(prospectnet::miss_threshold(6.2) == 1.5);
  CHECK(prospectnet::miss_threshold(11.0) == 2.0);
  CHECK(prospectnet::miss_threshold(25.0) == 2.0);
  CHECK(prospectnet::miss_threshold(6.2, 4.0) == 3.0);
  for (double v = 0.0; v < 14.0; v += 0.5) {
    CHECK(prospectnet::miss_threshold(v + 0.5) >= prospectnet::miss_threshold(v));
  }
}

TEST_CASE("miss rate counts records where every mode is off target")
{
  EvalRecord exact = straight_record();
  exact.pairs.push_back(mode_of(exact.gt.traj_a, exact.gt.traj_b, 1.0));
  CHECK(prospectnet::miss_rate({exact}) == 0.0);

  EvalRecord parked;
  parked.gt.traj_a = line(Vec2{0.0, 0.0}, Vec2{0.0, 0.0}, 3);
  parked.gt.traj_b = line(Vec2{10.0, 0.0}, Vec2{0.0, 0.0}, 3);
  parked.gt_headings_a.assign(3, 0.0);
  parked.gt_headings_b.assign(3, 0.0);
  parked.speed_a = 0.0;
  parked.speed_b = 0.0;
  parked.pairs.push_back(
    mode_of(offset_by(parked.gt.traj_a, 2.0, 0.0), offset_by(parked.gt.traj_b, 2.0, 0.0), 1.0));
  CHECK(prospectnet::miss_rate({parked}) == 1.0);
  CHECK(prospectnet::miss_rate({exact, parked}) == 0.5);

  CHECK_THROWS_AS(prospectnet::miss_rate({}), ContractError);
}

TEST_CASE("miss rate never rises when the threshold base grows")
{
  std::mt19937_64 rng(71);
  std::vector<EvalRecord> records;
  for (int i = 0; i < 40; ++i) {
    records.push_back(random_record(rng));
  }
  double previous = 1.0;
  for (const double base : {0.5, 1.0, 2.0, 4.0, 8.0, 30.0, 120.0}) {
    const double rate = prospectnet::miss_rate(records, base);
    CHECK(rate <= previous);
    previous = rate;
  }
}

TEST_CASE("oriented rectangle overlap covers the textbook cases")
{
  const AgentShape unit{1.0, 1.0};
  const Frame at_origin{Vec2{0.0, 0.0}, 0.0};

  CHECK(prospectnet::oriented_rect_iou(at_origin, unit, at_origin, unit) == 1.0);

  const Frame tilted{Vec2{0.0, 0.0}, 0.7};
  CHECK(prospectnet::oriented_rect_iou(tilted, unit, tilted, unit) ==
        doctest::Approx(1.0).epsilon(1e-12));

  const Frame far_away{Vec2{40.0, -3.0}, 1.2};
  CHECK(prospectnet::oriented_rect_iou(at_origin, unit, far_away, unit) == 0.0);

  const Frame beside{Vec2{1.0, 0.0}, 0.0};
  CHECK(prospectnet::oriented_rect_iou(at_origin, unit, beside, unit) == 0.0);

  const Frame half_step{Vec2{0.5, 0.0}, 0.0};
  CHECK(prospectnet::oriented_rect_iou(at_origin, unit, half_step, unit) ==
        doctest::Approx(1.0 / 3.0).epsilon(1e-12));

  const AgentShape bar{4.0, 2.0};
  const Frame upright{Vec2{0.0, 0.0}, std::acos(-1.0) / 2.0};
  CHECK(prospectnet::oriented_rect_iou(at_origin, bar, upright, bar) ==
        doctest::Approx(1.0 / 3.0).epsilon(1e-12));

  CHECK_THROWS_AS(
    prospectnet::oriented_rect_iou(at_origin, AgentShape{0.0, 1.0}, at_origin, unit),
    ValidationError);
}

TEST_CASE("rectangle overlap is symmetric and within bounds")
{
  std::mt19937_64 rng(72);
  std::uniform_real_distribution<double> coord(-4.0, 4.0);
  std::uniform_real_distribution<double> angle(-3.1, 3.1);
  std::uniform_real_distribution<double> box_len(1.0, 6.0);
  std::uniform_real_distribution<double> box_wid(0.5, 3.0);
  for (int trial = 0; trial < 200; ++trial) {
    const Frame pa{Vec2{coord(rng), coord(rng)}, angle(rng)};
    const Frame pb{Vec2{coord(rng), coord(rng)}, angle(rng)};
    const AgentShape sa{box_len(rng), box_wid(rng)};
    const AgentShape sb{box_len(rng), box_wid(rng)};
    const double ab = prospectnet::oriented_rect_iou(pa, sa, pb, sb);
    const double ba = prospectnet::oriented_rect_iou(pb, sb, pa, sa);
    CHECK(ab >= 0.0);
    CHECK(ab <= 1.0);
    CHECK(std::abs(ab - ba) <= 1e-12);
  }
}

TEST_CASE("rectangle overlap matches the polygon clipping oracle")
{
  std::mt19937_64 rng(73);
  std::uniform_real_distribution<double> coord(-5.0, 5.0);
  std::uniform_real_distribution<double> angle(-3.1, 3.1);
  std::uniform_real_distribution<double> box_len(1.0, 6.0);
  std::uniform_real_distribution<double> box_wid(0.5, 3.0);
  double worst = 0.0;
  for (int trial = 0; trial < 500; ++trial) {
    const Frame pa{Vec2{coord(rng), coord(rng)}, angle(rng)};
    const Frame pb{Vec2{coord(rng), coord(rng)}, angle(rng)};
    const AgentShape sa{box_len(rng), box_wid(rng)};
    const AgentShape sb{box_len(rng), box_wid(rng)};
    const double mine = prospectnet::oriented_rect_iou(pa, sa, pb, sb);
    const double reference = static_cast<double>(oracles::rect_iou_clip(pa, sa, pb, sb));
    worst = std::max(worst, std::abs(mine - reference));
  }
  CHECK(worst <= 1e-9);
}

TEST_CASE("overlap rate flags collisions of the best mode only")
{
  EvalRecord record = straight_record();
  record.pairs.push_back(mode_of(record.gt.traj_a, record.gt.traj_b, 0.9));
  record.shape_a = AgentShape{4.0, 2.0};
  record.shape_b = AgentShape{4.0, 2.0};

  SUBCASE("no other agents")
  {
    CHECK(prospectnet::overlap_rate({record}) == 0.0);
  }

  SUBCASE("a crossing agent collides at one step")
  {
    OtherAgentFuture crossing;
    crossing.positions = record.gt.traj_a;
    crossing.positions[2].y += 0.5;
    crossing.headings.assign(4, 0.0);
    crossing.shape = AgentShape{1.0, 1.0};
    record.others.push_back(crossing);
    CHECK(prospectnet::overlap_rate({record}) == 1.0);
  }

  SUBCASE("a low-scored colliding mode does not count")
  {
    OtherAgentFuture blocker;
    blocker.positions = line(Vec2{100.0, 0.0}, Vec2{0.0, 0.0}, 4);
    blocker.headings.assign(4, 0.0);
    blocker.shape = AgentShape{1.0, 1.0};
    record.others.push_back(blocker);
    record.pairs.push_back(
      mode_of(blocker.positions, offset_by(blocker.positions, 0.0, 30.0), 0.2));
    CHECK(prospectnet::overlap_rate({record}) == 0.0);
  }
}

TEST_CASE("a parked prediction takes its box heading from the ground truth")
{
  EvalRecord record;
  const std::size_t horizon = 3;
  record.gt.traj_a = line(Vec2{0.0, 0.0}, Vec2{0.0, 0.0}, horizon);
  record.gt.traj_b = line(Vec2{50.0, 50.0}, Vec2{1.0, 0.0}, horizon);
  record.gt_headings_b.assign(horizon, 0.0);
  record.speed_a = 0.0;
  record.speed_b = 10.0;
  record.shape_a = AgentShape{4.0, 0.5};
  record.shape_b = AgentShape{4.0, 2.0};
  record.pairs.push_back(mode_of(record.gt.traj_a, record.gt.traj_b, 1.0));

  OtherAgentFuture bystander;
  bystander.positions = line(Vec2{0.0, 1.8}, Vec2{0.0, 0.0}, horizon);
  bystander.headings.assign(horizon, 0.0);
  bystander.shape = AgentShape{0.6, 0.6};
  record.others.push_back(bystander);

  record.gt_headings_a.assign(horizon, std::acos(-1.0) / 2.0);
  CHECK(prospectnet::overlap_rate({record}) == 1.0);

  record.gt_headings_a.assign(horizon, 0.0);
  CHECK(prospectnet::overlap_rate({record}) == 0.0);
}

TEST_CASE("average precision hits the endpoints and handles ties")
{
  EvalRecord hit = straight_record();
  hit.pairs.push_back(mode_of(hit.gt.traj_a, hit.gt.traj_b, 0.8));
  EvalRecord miss = straight_record();
  miss.pairs.push_back(
    mode_of(offset_by(miss.gt.traj_a, 50.0, 0.0), offset_by(miss.gt.traj_b, 50.0, 0.0), 0.8));

  CHECK(prospectnet::map_metric({hit, hit, hit}) == 1.0);
  CHECK(prospectnet::map_metric({miss, miss}) == 0.0);

  const double tied = prospectnet::map_metric({hit, miss});
  CHECK(tied == doctest::Approx(3.0 / 11.0).epsilon(1e-12));
  CHECK(tied ==
        doctest::Approx(static_cast<double>(oracles::batch_ap11({hit, miss}, 2.0L)))
          .epsilon(1e-12));

  EvalRecord confident_hit = hit;
  confident_hit.pairs.front().score = 0.95;
  const double ordered = prospectnet::map_metric({confident_hit, miss, hit});
  CHECK(ordered ==
        doctest::Approx(static_cast<double>(oracles::batch_ap11({confident_hit, miss, hit}, 2.0L)))
          .epsilon(1e-12));
}

TEST_CASE("every metric matches its brute-force double check on random records")
{
  std::mt19937_64 rng(74);
  std::vector<EvalRecord> records;
  for (int i = 0; i < 100; ++i) {
    records.push_back(random_record(rng));
  }

  for (const EvalRecord & record : records) {
    CHECK(std::abs(prospectnet::min_ade(record) -
                   static_cast<double>(oracles::record_min_ade(record))) <= 1e-9);
    CHECK(std::abs(prospectnet::min_fde(record) -
                   static_cast<double>(oracles::record_min_fde(record))) <= 1e-9);
  }

  CHECK(std::abs(prospectnet::miss_rate(records) -
                 static_cast<double>(oracles::batch_miss_rate(records, 2.0L))) <= 1e-9);
  CHECK(std::abs(prospectnet::overlap_rate(records) -
                 static_cast<double>(oracles::batch_overlap_rate(records, 0.0L))) <= 1e-9);
  CHECK(std::abs(prospectnet::map_metric(records) -
                 static_cast<double>(oracles::batch_ap11(records, 2.0L))) <= 1e-9);

  for (std::size_t start = 0; start < 100; start += 20) {
    const std::vector<EvalRecord> batch(records.begin() + start, records.begin() + start + 20);
    CHECK(std::abs(prospectnet::miss_rate(batch) -
                   static_cast<double>(oracles::batch_miss_rate(batch, 2.0L))) <= 1e-9);
    CHECK(std::abs(prospectnet::map_metric(batch) -
                   static_cast<double>(oracles::batch_ap11(batch, 2.0L))) <= 1e-9);
  }
}

TEST_CASE("the evaluation report aggregates per-record values")
{
  std::mt19937_64 rng(75);
  std::vector<EvalRecord> records;
  for (int i = 0; i < 12; ++i) {
    records.push_back(random_record(rng));
  }
  const auto report = prospectnet::evaluate_records(records);

  double ade = 0.0;
  double fde = 0.0;
  for (const EvalRecord & record : records) {
    ade += prospectnet::min_ade(record);
    fde += prospectnet::min_fde(record);
  }
  CHECK(report.min_ade == doctest::Approx(ade / 12.0).epsilon(1e-12));
  CHECK(report.min_fde == doctest::Approx(fde / 12.0).epsilon(1e-12));
  CHECK(report.miss_rate == prospectnet::miss_rate(records));
  CHECK(report.overlap_rate == prospectnet::overlap_rate(records));
  CHECK(report.map == prospectnet::map_metric(records));

  CHECK_THROWS_AS(prospectnet::evaluate_records({}), ContractError);
}

TEST_CASE("records with inconsistent lengths are rejected")
{
  EvalRecord record = straight_record();
  CHECK_THROWS_AS(prospectnet::min_ade(record), ValidationError);

  record.pairs.push_back(mode_of(record.gt.traj_a, record.gt.traj_b, 1.0));
  record.pairs.front().traj_b.pop_back();
  CHECK_THROWS_AS(prospectnet::min_ade(record), ValidationError);

  record.pairs.front().traj_b = record.gt.traj_b;
  record.gt_headings_a.pop_back();
  CHECK_THROWS_AS(prospectnet::overlap_rate({record}), ValidationError);
}
