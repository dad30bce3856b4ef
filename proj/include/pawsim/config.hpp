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

#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"
#include "pawsim/fno.hpp"
#include "pawsim/grid.hpp"
#include "pawsim/phantoms.hpp"
#include "pawsim/solver.hpp"
#include "pawsim/train.hpp"

namespace pawsim {

enum class SolverMethod { Exact, KSpace };

struct DataPlan {
  PhantomSpec phantom;  // seed is overwritten per record
  std::size_t n_train = 200;
  std::size_t n_test = 40;
  std::string train_path;  // existing dataset files; empty means generate
  std::string test_path;
};

struct SensorPlan {
  std::string layout = "boundary";  // boundary | linear
  std::size_t count = 0;            // linear arrays only; 0 means one per column
};

struct ReconPlan {
  std::size_t pad_factor = 4;
  std::string source = "solver";  // solver | fno
};

struct SweepEntry {
  std::size_t modes;
  std::size_t width;
  friend bool operator==(const SweepEntry&, const SweepEntry&) = default;
};

struct BenchPlan {
  std::vector<std::size_t> frame_counts{20, 40};
  std::size_t repetitions = 5;
  bool random_weights = true;
};

struct EvalPlan {
  std::vector<PhantomKind> phantoms{PhantomKind::SheppLogan, PhantomKind::TumorBlobs};
  std::size_t records_per_kind = 20;
  std::string prediction;  // field files compared directly when both are set
  std::string target;
};

struct RunConfig {
  std::uint64_t seed = 0;
  Grid2D grid{32, 32};
  MediumParams medium;
  TimeGrid time{20};
  SolverMethod method = SolverMethod::Exact;
  PropagationOptions propagation;
  DataPlan data;
  FnoConfig fno;
  TrainConfig train;
  std::string checkpoint;  // model to load; empty means train or use random weights
  SensorPlan sensors;
  ReconPlan recon;
  std::vector<SweepEntry> sweep{{4, 8}, {8, 8}, {12, 8}};
  BenchPlan bench;
  EvalPlan evaluate;

  /// Applies the global seed to every consumer.
  void set_seed(std::uint64_t s);
  void validate() const;
};

/// Missing keys take defaults; unknown keys are rejected so that typos
/// surface. The seed of the training section follows the global seed.
RunConfig parse_config(const nlohmann::json& j);
RunConfig load_config(const std::filesystem::path& path);
nlohmann::json to_json(const RunConfig& config);

/// Sweep entry applied to a base model configuration: modes_x = modes_y =
/// modes, modes_t capped by the base value and by the frame band.
FnoConfig sweep_config(const FnoConfig& base, const SweepEntry& entry, std::size_t nt);

nlohmann::json to_json(const Grid2D& g);
nlohmann::json to_json(const TimeGrid& t);
nlohmann::json to_json(const MediumParams& m);
nlohmann::json to_json(const FnoConfig& c);
nlohmann::json to_json(const TrainConfig& c);
nlohmann::json to_json(const PhantomSpec& p);
Grid2D grid_from_json(const nlohmann::json& j);
TimeGrid time_from_json(const nlohmann::json& j);
MediumParams medium_from_json(const nlohmann::json& j);
FnoConfig fno_config_from_json(const nlohmann::json& j);
TrainConfig train_config_from_json(const nlohmann::json& j);
PhantomSpec phantom_from_json(const nlohmann::json& j);

}  // namespace pawsim
