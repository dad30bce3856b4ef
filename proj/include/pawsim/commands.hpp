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

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"
#include "pawsim/config.hpp"
#include "pawsim/fno.hpp"

namespace pawsim {

/// Trained or freshly initialised model at either precision.
using AnyParams = std::variant<FnoParams<float>, FnoParams<double>>;

/// Loads `config.checkpoint`; without one, random weights at the training
/// precision when `allow_random`, otherwise an error.
AnyParams load_model(const RunConfig& config, bool allow_random);
SpaceTimeField predict(const AnyParams& params, const Field2D& p0, const TimeGrid& tgrid);
const FnoConfig& model_config(const AnyParams& params);

/// Phantom used by the single-field commands (simulate, infer, reconstruct).
Field2D command_phantom(const RunConfig& config);

const std::vector<std::string>& command_names();

/// Runs one subcommand, writes `<out>/<name>.json` and returns the report.
/// infer, evaluate and reconstruct fall back to `<out>/model.paws` when no
/// checkpoint is set. Progress lines go to `log` when given.
nlohmann::json run_command(const std::string& name, const RunConfig& config, const std::filesystem::path& out,
                           std::ostream* log = nullptr);

nlohmann::json cmd_gen_data(const RunConfig& config, const std::filesystem::path& out, std::ostream* log);
nlohmann::json cmd_train(const RunConfig& config, const std::filesystem::path& out, std::ostream* log);
nlohmann::json cmd_infer(const RunConfig& config, const std::filesystem::path& out, std::ostream* log);
nlohmann::json cmd_simulate(const RunConfig& config, const std::filesystem::path& out, std::ostream* log);
nlohmann::json cmd_reconstruct(const RunConfig& config, const std::filesystem::path& out, std::ostream* log);
nlohmann::json cmd_evaluate(const RunConfig& config, const std::filesystem::path& out, std::ostream* log);
nlohmann::json cmd_sweep(const RunConfig& config, const std::filesystem::path& out, std::ostream* log);
nlohmann::json cmd_bench(const RunConfig& config, const std::filesystem::path& out, std::ostream* log);

/// Mean over frames of the SSIM between normalized frames.
double field_ssim(const SpaceTimeField& a, const SpaceTimeField& b);
/// Mean of the squared target values: the MSE of predicting zero everywhere.
double zero_predictor_mse(std::span<const SpaceTimeField> targets);

void write_history_csv(const std::filesystem::path& path, std::span<const EpochStats> history);
void write_image(const std::filesystem::path& path, const Field2D& field);

}  // namespace pawsim
