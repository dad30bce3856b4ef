/*
 * SPDX-FileCopyrightText: Copyright (c) 2026 The pawsim Authors
 * SPDX-License-Identifier: Apache-2.0
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "pawsim/config.hpp"

#include <algorithm>
#include <fstream>
#include <initializer_list>

#include "pawsim/error.hpp"

namespace pawsim {

using nlohmann::json;

namespace {

void check_keys(const json& j, std::initializer_list<const char*> allowed, const std::string& section) {
  if (!j.is_object()) throw Error(ErrorCode::Parse, "config section '" + section + "' must be an object");
  for (const auto& [key, value] : j.items()) {
    if (std::none_of(allowed.begin(), allowed.end(), [&](const char* a) { return key == a; })) {
      throw Error(ErrorCode::Parse, "unknown key '" + key + "' in config section '" + section + "'");
    }
  }
}

template <class T>
T get(const json& j, const char* key, T fallback) {
  auto it = j.find(key);
  if (it == j.end()) return fallback;
  try {
    return it->get<T>();
  } catch (const json::exception& e) {
    throw Error(ErrorCode::Parse, std::string("config key '") + key + "': " + e.what());
  }
}

const json& section(const json& root, const char* name) {
  static const json empty = json::object();
  auto it = root.find(name);
  return it == root.end() ? empty : *it;
}

}  // namespace

json to_json(const Grid2D& g) { return {{"nx", g.nx()}, {"ny", g.ny()}, {"dx", g.dx()}, {"dy", g.dy()}}; }
json to_json(const TimeGrid& t) { return {{"nt", t.nt()}, {"dt", t.dt()}}; }
json to_json(const MediumParams& m) { return {{"c0", m.c0}, {"rho0", m.rho0}}; }

json to_json(const FnoConfig& c) {
  return {{"modes_x", c.modes_x},   {"modes_y", c.modes_y},         {"modes_t", c.modes_t},
          {"width", c.width},       {"n_layers", c.n_layers},       {"in_channels", c.in_channels},
          {"out_channels", c.out_channels}};
}

json to_json(const TrainConfig& c) {
  return {{"epochs", c.epochs},
          {"batch_size", c.batch_size},
          {"lr", c.lr},
          {"lr_decay_step", c.lr_decay_step},
          {"lr_decay_gamma", c.lr_decay_gamma},
          {"seed", c.seed},
          {"precision", to_string(c.precision)},
          {"threads", c.threads}};
}

json to_json(const PhantomSpec& p) {
  json j{{"kind", to_string(p.kind)}, {"seed", p.seed}, {"params", p.params}};
  if (!p.path.empty()) j["path"] = p.path;
  return j;
}

Grid2D grid_from_json(const json& j) {
  check_keys(j, {"nx", "ny", "dx", "dy"}, "grid");
  return Grid2D(get<std::size_t>(j, "nx", 32), get<std::size_t>(j, "ny", 32), get<double>(j, "dx", 1e-4),
                get<double>(j, "dy", 1e-4));
}

TimeGrid time_from_json(const json& j) {
  check_keys(j, {"nt", "dt"}, "time");
  return TimeGrid(get<std::size_t>(j, "nt", 20), get<double>(j, "dt", 2e-8));
}

MediumParams medium_from_json(const json& j) {
  check_keys(j, {"c0", "rho0"}, "medium");
  MediumParams m{get<double>(j, "c0", 1480.0), get<double>(j, "rho0", 1000.0)};
  m.validate();
  return m;
}

FnoConfig fno_config_from_json(const json& j) {
  check_keys(j, {"modes_x", "modes_y", "modes_t", "modes", "width", "n_layers", "in_channels", "out_channels"}, "fno");
  FnoConfig c;
  const std::size_t modes = get<std::size_t>(j, "modes", 0);
  if (modes != 0) c.modes_x = c.modes_y = modes;
  c.modes_x = get<std::size_t>(j, "modes_x", c.modes_x);
  c.modes_y = get<std::size_t>(j, "modes_y", c.modes_y);
  c.modes_t = get<std::size_t>(j, "modes_t", c.modes_t);
  c.width = get<std::size_t>(j, "width", c.width);
  c.n_layers = get<std::size_t>(j, "n_layers", c.n_layers);
  c.in_channels = get<std::size_t>(j, "in_channels", c.in_channels);
  c.out_channels = get<std::size_t>(j, "out_channels", c.out_channels);
  c.validate();
  return c;
}

TrainConfig train_config_from_json(const json& j) {
  check_keys(j, {"epochs", "batch_size", "lr", "lr_decay_step", "lr_decay_gamma", "seed", "precision", "threads"},
             "train");
  TrainConfig c;
  c.epochs = get<std::size_t>(j, "epochs", c.epochs);
  c.batch_size = get<std::size_t>(j, "batch_size", c.batch_size);
  c.lr = get<double>(j, "lr", c.lr);
  c.lr_decay_step = get<std::size_t>(j, "lr_decay_step", c.lr_decay_step);
  c.lr_decay_gamma = get<double>(j, "lr_decay_gamma", c.lr_decay_gamma);
  c.seed = get<std::uint64_t>(j, "seed", c.seed);
  c.precision = precision_from_string(get<std::string>(j, "precision", to_string(c.precision)));
  c.threads = get<std::size_t>(j, "threads", c.threads);
  c.validate();
  return c;
}

PhantomSpec phantom_from_json(const json& j) {
  PhantomSpec p;
  p.kind = phantom_kind_from_string(get<std::string>(j, "kind", to_string(p.kind)));
  p.seed = get<std::uint64_t>(j, "seed", 0);
  p.params = get<std::map<std::string, double>>(j, "params", {});
  p.path = get<std::string>(j, "path", "");
  return p;
}

void RunConfig::set_seed(std::uint64_t s) {
  seed = s;
  train.seed = s;
}

void RunConfig::validate() const {
  medium.validate();
  fno.validate_for(grid.nx(), grid.ny(), time.nt());
  train.validate();
  require(propagation.pad_factor >= 1 && recon.pad_factor >= 1, "pad factors must be at least 1");
  require(data.n_train + data.n_test < (std::size_t{1} << 20), "at most 2^20 records per dataset");
  require(sensors.layout == "boundary" || sensors.layout == "linear", "sensors.layout must be boundary or linear");
  require(sensors.count <= grid.nx(), "a linear array cannot have more sensors than columns");
  require(recon.source == "solver" || recon.source == "fno", "recon.source must be solver or fno");
  require(bench.repetitions >= 1 && !bench.frame_counts.empty(), "bench needs repetitions and frame counts");
}

FnoConfig sweep_config(const FnoConfig& base, const SweepEntry& entry, std::size_t nt) {
  FnoConfig c = base;
  c.modes_x = c.modes_y = entry.modes;
  c.modes_t = std::min({base.modes_t, entry.modes, nt / 2});
  c.width = entry.width;
  return c;
}

RunConfig parse_config(const json& root) {
  check_keys(root,
             {"seed", "grid", "medium", "time", "solver", "phantom", "fno", "train", "checkpoint", "sensors", "recon",
              "sweep", "bench", "evaluate"},
             "top level");
  RunConfig c;
  c.grid = grid_from_json(section(root, "grid"));
  c.medium = medium_from_json(section(root, "medium"));
  c.time = time_from_json(section(root, "time"));

  const json& solver = section(root, "solver");
  check_keys(solver, {"method", "pad_factor", "smooth"}, "solver");
  const std::string method = get<std::string>(solver, "method", "exact");
  require(method == "exact" || method == "kspace", "solver.method must be exact or kspace");
  c.method = method == "exact" ? SolverMethod::Exact : SolverMethod::KSpace;
  c.propagation.pad_factor = get<std::size_t>(solver, "pad_factor", c.propagation.pad_factor);
  c.propagation.smooth = get<bool>(solver, "smooth", c.propagation.smooth);

  const json& phantom = section(root, "phantom");
  check_keys(phantom, {"kind", "params", "path", "n_train", "n_test", "train_data", "test_data"}, "phantom");
  c.data.phantom = phantom_from_json(json{{"kind", get<std::string>(phantom, "kind", "vasculature")},
                                          {"params", get<std::map<std::string, double>>(phantom, "params", {})},
                                          {"path", get<std::string>(phantom, "path", "")}});
  c.data.n_train = get<std::size_t>(phantom, "n_train", c.data.n_train);
  c.data.n_test = get<std::size_t>(phantom, "n_test", c.data.n_test);
  c.data.train_path = get<std::string>(phantom, "train_data", "");
  c.data.test_path = get<std::string>(phantom, "test_data", "");

  c.fno = fno_config_from_json(section(root, "fno"));
  c.train = train_config_from_json(section(root, "train"));
  const bool explicit_train_seed = section(root, "train").contains("seed");
  c.seed = get<std::uint64_t>(root, "seed", 0);
  if (!explicit_train_seed) c.train.seed = c.seed;
  c.checkpoint = get<std::string>(root, "checkpoint", "");

  const json& sensors = section(root, "sensors");
  check_keys(sensors, {"layout", "count"}, "sensors");
  c.sensors.layout = get<std::string>(sensors, "layout", c.sensors.layout);
  c.sensors.count = get<std::size_t>(sensors, "count", c.sensors.count);

  const json& recon = section(root, "recon");
  check_keys(recon, {"pad_factor", "source"}, "recon");
  c.recon.pad_factor = get<std::size_t>(recon, "pad_factor", c.recon.pad_factor);
  c.recon.source = get<std::string>(recon, "source", c.recon.source);

  const json& sweep = section(root, "sweep");
  check_keys(sweep, {"configs", "modes", "widths"}, "sweep");
  if (sweep.contains("configs")) {
    c.sweep.clear();
    for (const json& e : sweep.at("configs")) {
      check_keys(e, {"modes", "width"}, "sweep.configs");
      c.sweep.push_back({get<std::size_t>(e, "modes", c.fno.modes_x), get<std::size_t>(e, "width", c.fno.width)});
    }
  } else if (sweep.contains("modes") || sweep.contains("widths")) {
    const auto modes = get<std::vector<std::size_t>>(sweep, "modes", {c.fno.modes_x});
    const auto widths = get<std::vector<std::size_t>>(sweep, "widths", {c.fno.width});
    c.sweep.clear();
    for (std::size_t w : widths)
      for (std::size_t m : modes) c.sweep.push_back({m, w});
  }

  const json& bench = section(root, "bench");
  check_keys(bench, {"frame_counts", "repetitions", "random_weights"}, "bench");
  c.bench.frame_counts = get<std::vector<std::size_t>>(bench, "frame_counts", c.bench.frame_counts);
  c.bench.repetitions = get<std::size_t>(bench, "repetitions", c.bench.repetitions);
  c.bench.random_weights = get<bool>(bench, "random_weights", c.bench.random_weights);

  const json& ev = section(root, "evaluate");
  check_keys(ev, {"phantoms", "records_per_kind", "prediction", "target"}, "evaluate");
  if (ev.contains("phantoms")) {
    c.evaluate.phantoms.clear();
    for (const auto& name : get<std::vector<std::string>>(ev, "phantoms", {}))
      c.evaluate.phantoms.push_back(phantom_kind_from_string(name));
  }
  c.evaluate.records_per_kind = get<std::size_t>(ev, "records_per_kind", c.evaluate.records_per_kind);
  c.evaluate.prediction = get<std::string>(ev, "prediction", "");
  c.evaluate.target = get<std::string>(ev, "target", "");

  c.validate();
  return c;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream f(path);
  if (!f) throw Error(ErrorCode::Io, "cannot open config " + path.string());
  json j;
  try {
    j = json::parse(f);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::Parse, path.string() + ": " + e.what(), e.byte - 1);
  }
  return parse_config(j);
}

json to_json(const RunConfig& c) {
  json sweep = json::array();
  for (const SweepEntry& e : c.sweep) sweep.push_back({{"modes", e.modes}, {"width", e.width}});
  json phantoms = json::array();
  for (PhantomKind k : c.evaluate.phantoms) phantoms.push_back(to_string(k));
  json phantom = to_json(c.data.phantom);
  phantom.erase("seed");
  phantom["n_train"] = c.data.n_train;
  phantom["n_test"] = c.data.n_test;
  if (!c.data.train_path.empty()) phantom["train_data"] = c.data.train_path;
  if (!c.data.test_path.empty()) phantom["test_data"] = c.data.test_path;
  json j{{"seed", c.seed},
         {"grid", to_json(c.grid)},
         {"medium", to_json(c.medium)},
         {"time", to_json(c.time)},
         {"solver",
          {{"method", c.method == SolverMethod::Exact ? "exact" : "kspace"},
           {"pad_factor", c.propagation.pad_factor},
           {"smooth", c.propagation.smooth}}},
         {"phantom", phantom},
         {"fno", to_json(c.fno)},
         {"train", to_json(c.train)},
         {"sensors", {{"layout", c.sensors.layout}, {"count", c.sensors.count}}},
         {"recon", {{"pad_factor", c.recon.pad_factor}, {"source", c.recon.source}}},
         {"sweep", {{"configs", sweep}}},
         {"bench",
          {{"frame_counts", c.bench.frame_counts},
           {"repetitions", c.bench.repetitions},
           {"random_weights", c.bench.random_weights}}},
         {"evaluate", {{"phantoms", phantoms}, {"records_per_kind", c.evaluate.records_per_kind}}}};
  if (!c.checkpoint.empty()) j["checkpoint"] = c.checkpoint;
  if (!c.evaluate.prediction.empty()) j["evaluate"]["prediction"] = c.evaluate.prediction;
  if (!c.evaluate.target.empty()) j["evaluate"]["target"] = c.evaluate.target;
  return j;
}

}  // namespace pawsim
