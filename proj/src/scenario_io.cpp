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

#include "prospectnet/scenario_io.hpp"

#include <fstream>
#include <nlohmann/json.hpp>

#include "prospectnet/errors.hpp"

namespace prospectnet
{

namespace
{

using nlohmann::json;

json points_to_xy(const std::vector<Vec2> & pts)
{
  json x = json::array();
  json y = json::array();
  for (const Vec2 & p : pts) {
    x.push_back(p.x);
    y.push_back(p.y);
  }
  return json{{"x", std::move(x)}, {"y", std::move(y)}};
}

std::vector<Vec2> xy_to_points(const json & j)
{
  const auto & x = j.at("x");
  const auto & y = j.at("y");
  if (!x.is_array() || !y.is_array() || x.size() != y.size()) {
    throw ParseError("x and y must be arrays of equal length");
  }
  std::vector<Vec2> pts(x.size());
  for (std::size_t i = 0; i < pts.size(); ++i) {
    pts[i] = {x[i].get<double>(), y[i].get<double>()};
  }
  return pts;
}

json scenario_to_json(const Scenario & s)
{
  json tracks = json::array();
  for (const AgentTrack & t : s.tracks) {
    json jt = points_to_xy(t.positions);
    jt["agent_id"] = t.agent_id;
    jt["heading"] = t.headings;
    jt["valid"] = t.valid;
    jt["length"] = t.length;
    jt["width"] = t.width;
    jt["predictable"] = t.is_predictable;
    tracks.push_back(std::move(jt));
  }
  json map = json::array();
  for (const MapPolyline & line : s.map) {
    json jl = points_to_xy(line.points);
    jl["polyline_id"] = line.polyline_id;
    jl["kind"] = to_string(line.kind);
    map.push_back(std::move(jl));
  }
  return json{{"id", s.id},
              {"history_len", s.history_len},
              {"horizon", s.horizon},
              {"tracks", std::move(tracks)},
              {"map", std::move(map)}};
}

Scenario scenario_from_json(const json & j)
{
  Scenario s;
  s.id = j.at("id").get<std::string>();
  s.history_len = j.at("history_len").get<std::size_t>();
  s.horizon = j.at("horizon").get<std::size_t>();
  for (const json & jt : j.at("tracks")) {
    AgentTrack t;
    t.agent_id = jt.at("agent_id").get<std::string>();
    t.positions = xy_to_points(jt);
    t.headings = jt.at("heading").get<std::vector<double>>();
    t.valid = jt.at("valid").get<std::vector<std::uint8_t>>();
    t.length = jt.at("length").get<double>();
    t.width = jt.at("width").get<double>();
    t.is_predictable = jt.at("predictable").get<bool>();
    s.tracks.push_back(std::move(t));
  }
  for (const json & jl : j.at("map")) {
    MapPolyline line;
    line.polyline_id = jl.at("polyline_id").get<std::string>();
    line.kind = polyline_kind_from_string(jl.at("kind").get<std::string>());
    line.points = xy_to_points(jl);
    s.map.push_back(std::move(line));
  }
  return s;
}

/// Calls parse_line for each non-empty line, converting json exceptions into
/// ParseError tagged with "path:line".
template <typename Fn>
void for_each_line(const std::string & path, Fn parse_line)
{
  std::ifstream in(path);
  if (!in) {
    throw NotFoundError("cannot open '" + path + "'");
  }
  std::string line;
  std::size_t line_no = 0;
  std::size_t records = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) {
      continue;
    }
    try {
      parse_line(json::parse(line));
    } catch (const Error &) {
      throw;
    } catch (const std::exception & e) {
      throw ParseError(path + ":" + std::to_string(line_no) + ": " + e.what());
    }
    ++records;
  }
  if (records == 0) {
    throw ParseError(path + ": no records");
  }
}

void write_lines(const std::string & path, const std::vector<json> & lines)
{
  std::ofstream out(path, std::ios::trunc);
  if (!out) {
    throw IoError("cannot write '" + path + "'");
  }
  for (const json & j : lines) {
    out << j.dump() << '\n';
  }
  if (!out) {
    throw IoError("write failed for '" + path + "'");
  }
}

}  // namespace

std::vector<Scenario> read_scenarios(const std::string & path)
{
  std::vector<Scenario> out;
  for_each_line(path, [&](const json & j) {
    Scenario s = scenario_from_json(j);
    validate_scenario(s);
    out.push_back(std::move(s));
  });
  return out;
}

void write_scenarios(const std::string & path, const std::vector<Scenario> & scenarios)
{
  std::vector<json> lines;
  lines.reserve(scenarios.size());
  for (const Scenario & s : scenarios) {
    validate_scenario(s);
    lines.push_back(scenario_to_json(s));
  }
  write_lines(path, lines);
}

std::vector<PredictionRecord> read_predictions(const std::string & path)
{
  std::vector<PredictionRecord> out;
  for_each_line(path, [&](const json & j) {
    PredictionRecord r;
    r.scenario_id = j.at("scenario_id").get<std::string>();
    r.agent_a = j.at("agent_a").get<std::string>();
    r.agent_b = j.at("agent_b").get<std::string>();
    for (const json & jp : j.at("pairs")) {
      PairPrediction p;
      p.score = jp.at("score").get<double>();
      if (p.score < 0.0 || p.score > 1.0) {
        throw ValidationError("pair score outside [0, 1]");
      }
      const auto & ax = jp.at("ax");
      const auto & ay = jp.at("ay");
      const auto & bx = jp.at("bx");
      const auto & by = jp.at("by");
      if (ax.size() != ay.size() || bx.size() != by.size() || ax.size() != bx.size()) {
        throw ValidationError("pair trajectories must share one length");
      }
      for (std::size_t i = 0; i < ax.size(); ++i) {
        p.traj_a.push_back({ax[i].get<double>(), ay[i].get<double>()});
        p.traj_b.push_back({bx[i].get<double>(), by[i].get<double>()});
      }
      r.pairs.push_back(std::move(p));
    }
    out.push_back(std::move(r));
  });
  return out;
}

void write_predictions(const std::string & path, const std::vector<PredictionRecord> & records)
{
  std::vector<json> lines;
  lines.reserve(records.size());
  for (const PredictionRecord & r : records) {
    json pairs = json::array();
    for (const PairPrediction & p : r.pairs) {
      json jp;
      jp["score"] = p.score;
      json ax = json::array(), ay = json::array(), bx = json::array(), by = json::array();
      for (const Vec2 & v : p.traj_a) {
        ax.push_back(v.x);
        ay.push_back(v.y);
      }
      for (const Vec2 & v : p.traj_b) {
        bx.push_back(v.x);
        by.push_back(v.y);
      }
      jp["ax"] = std::move(ax);
      jp["ay"] = std::move(ay);
      jp["bx"] = std::move(bx);
      jp["by"] = std::move(by);
      pairs.push_back(std::move(jp));
    }
    lines.push_back(json{{"scenario_id", r.scenario_id},
                         {"agent_a", r.agent_a},
                         {"agent_b", r.agent_b},
                         {"pairs", std::move(pairs)}});
  }
  write_lines(path, lines);
}

}  // namespace prospectnet
