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

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"
#include "pawsim/config.hpp"
#include "pawsim/container.hpp"
#include "pawsim/fno.hpp"
#include "pawsim/phantoms.hpp"
#include "pawsim/train.hpp"

namespace pawsim {

enum class Split { Train, Test };
const char* to_string(Split s) noexcept;

struct DatasetRecord {
  Field2D p0;
  SpaceTimeField target;
  PhantomSpec phantom;
  std::uint64_t hash = 0;
};

struct Dataset {
  nlohmann::json metadata = nlohmann::json::object();  // grid, time, medium, solver, smoothing
  std::vector<DatasetRecord> records;

  std::vector<Example> examples() const;
};

/// FNV-1a over the raw bytes of p0 followed by the target.
std::uint64_t content_hash(const Field2D& p0, const SpaceTimeField& target);

/// Seed of the phantom behind record `index` of a split. Train records use
/// indices [0, n_train), test records [n_train, n_train + n_test), so the
/// two splits never share a seed.
std::uint64_t record_seed(std::uint64_t seed, std::size_t index);

/// Phantoms and solver targets for one split of the configured dataset.
/// Records are independent and generated in index order.
Dataset generate_dataset(const RunConfig& config, Split split);
/// Same construction for an arbitrary phantom kind (out-of-distribution sets).
Dataset generate_records(const RunConfig& config, const PhantomSpec& base, std::size_t first_index,
                         std::size_t count);

SpaceTimeField propagate(const RunConfig& config, const Field2D& p0);

Container dataset_to_container(const Dataset& dataset);
Dataset dataset_from_container(const Container& container);
void save_dataset(const std::filesystem::path& path, const Dataset& dataset);
Dataset load_dataset(const std::filesystem::path& path);

/// Checkpoint: metadata {kind, fno, precision, ...} and the parameter
/// tensors in declaration order at their native precision.
template <class Real>
Container checkpoint_to_container(const FnoParams<Real>& params, nlohmann::json extra = nlohmann::json::object());
template <class Real>
FnoParams<Real> params_from_container(const Container& container);
Precision checkpoint_precision(const Container& container);

/// Single space-time field with its grid in the metadata.
Container field_to_container(const SpaceTimeField& field, nlohmann::json extra = nlohmann::json::object());
SpaceTimeField field_from_container(const Container& container);
Container image_to_container(const Field2D& field, nlohmann::json extra = nlohmann::json::object());
Field2D image_from_container(const Container& container);

}  // namespace pawsim
