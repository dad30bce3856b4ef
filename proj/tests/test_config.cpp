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

#include <filesystem>
#include <fstream>

#include "doctest.h"
#include "pawsim/config.hpp"
#include "pawsim/error.hpp"

using namespace pawsim;
using nlohmann::json;

TEST_SUITE("config") {

TEST_CASE("empty object gives the desk defaults") {
  const RunConfig c = parse_config(json::object());
  CHECK(c.grid == Grid2D(32, 32));
  CHECK(c.time.nt() == 20);
  CHECK(c.time.dt() == 2e-8);
  CHECK(c.medium.c0 == 1480.0);
  CHECK(c.fno.modes_x == 12);
  CHECK(c.fno.modes_t == 8);
  CHECK(c.fno.width == 8);
  CHECK(c.train.epochs == 400);
  CHECK(c.data.n_train == 200);
  CHECK(c.data.phantom.kind == PhantomKind::Vasculature);
}

TEST_CASE("sections override defaults") {
  const json j = json::parse(R"({
    "seed": 9,
    "grid": {"nx": 16, "ny": 24},
    "time": {"nt": 10},
    "phantom": {"kind": "discs", "params": {"n_discs": 2}, "n_train": 5},
    "fno": {"modes": 4, "modes_t": 2, "width": 3},
    "train": {"epochs": 7, "precision": "f64"},
    "sweep": {"modes": [2, 4], "widths": [2, 3]}
  })");
  const RunConfig c = parse_config(j);
  CHECK(c.grid.ny() == 24);
  CHECK(c.data.phantom.kind == PhantomKind::Discs);
  CHECK(c.data.phantom.params.at("n_discs") == 2.0);
  CHECK(c.fno.modes_x == 4);
  CHECK(c.fno.modes_y == 4);
  CHECK(c.train.precision == Precision::Double);
  CHECK(c.train.seed == 9);
  CHECK(c.sweep.size() == 4);
  CHECK(c.sweep[1] == SweepEntry{4, 2});
}

TEST_CASE("effective config round-trips through json") {
  const json j = json::parse(R"({"seed": 4, "grid": {"nx": 16, "ny": 16}, "time": {"nt": 8},
                                 "fno": {"modes": 4, "modes_t": 2}, "train": {"seed": 99}})");
  const RunConfig c = parse_config(j);
  CHECK(c.train.seed == 99);
  const json once = to_json(c);
  CHECK(to_json(parse_config(once)) == once);
}

TEST_CASE("seed override reaches every consumer") {
  RunConfig c = parse_config(json::object());
  c.set_seed(17);
  CHECK(c.seed == 17);
  CHECK(c.train.seed == 17);
}

TEST_CASE("typos and bad values are rejected") {
  CHECK_THROWS_AS(parse_config(json::parse(R"({"grdi": {}})")), Error);
  CHECK_THROWS_AS(parse_config(json::parse(R"({"grid": {"nz": 3}})")), Error);
  CHECK_THROWS_AS(parse_config(json::parse(R"({"fno": {"modes_x": 40}})")), Error);
  CHECK_THROWS_AS(parse_config(json::parse(R"({"solver": {"method": "fdtd"}})")), Error);
  CHECK_THROWS_AS(parse_config(json::parse(R"({"train": {"epochs": "many"}})")), Error);
  CHECK_THROWS_AS(parse_config(json::parse(R"({"phantom": {"kind": "teapot"}})")), Error);
}

TEST_CASE("config files") {
  const auto dir = std::filesystem::temp_directory_path() / "pawsim_config_test";
  std::filesystem::create_directories(dir);
  std::ofstream(dir / "bad.json") << "{\"seed\": 1,,}";
  try {
    load_config(dir / "bad.json");
    FAIL("expected a parse error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::Parse);
    CHECK(e.offset().has_value());
  }
  CHECK_THROWS_AS(load_config(dir / "missing.json"), Error);
  std::filesystem::remove_all(dir);
}

TEST_CASE("sweep entries cap the frame modes") {
  FnoConfig base;
  const FnoConfig a = sweep_config(base, {4, 2}, 20);
  CHECK(a.modes_x == 4);
  CHECK(a.modes_t == 4);
  CHECK(a.width == 2);
  CHECK(sweep_config(base, {12, 8}, 20).modes_t == 8);
  CHECK(sweep_config(base, {12, 8}, 10).modes_t == 5);
}

}  // TEST_SUITE
