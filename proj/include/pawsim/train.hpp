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
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "pawsim/field.hpp"
#include "pawsim/fno.hpp"

namespace pawsim {

/// Mean over all entries of the squared difference.
double mse_loss(const SpaceTimeField& pred, const SpaceTimeField& target);

template <class Real>
using FnoGrads = FnoParams<Real>;

template <class Real>
struct LossAndGrads {
  double loss;
  FnoGrads<Real> grads;
};

/// Loss of one record and its gradient with respect to every parameter.
/// Complex gradients are dL/dRe + i dL/dIm.
template <class Real>
LossAndGrads<Real> backward(const FnoParams<Real>& params, const InputTensor& input, const SpaceTimeField& target);

template <class Real>
struct AdamState {
  FnoParams<Real> m;
  FnoParams<Real> v;
  std::uint64_t t = 0;
  double lr = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;

  static AdamState fresh(const FnoParams<Real>& like, double lr);
};

/// One bias-corrected Adam update on (Re, Im) of every entry.
template <class Real>
void adam_step(FnoParams<Real>& params, const FnoGrads<Real>& grads, AdamState<Real>& state);

enum class Precision { Single, Double };
const char* to_string(Precision p) noexcept;
Precision precision_from_string(const std::string& name);

struct TrainConfig {
  std::size_t epochs = 400;
  std::size_t batch_size = 8;
  double lr = 1e-3;
  std::size_t lr_decay_step = 100;  // epochs
  double lr_decay_gamma = 0.5;
  std::uint64_t seed = 0;
  Precision precision = Precision::Single;
  std::size_t threads = 1;

  void validate() const;
  double lr_at(std::size_t epoch) const;
};

struct Example {
  Field2D p0;
  SpaceTimeField target;
};

struct EpochStats {
  std::size_t epoch;
  double train_mse;  // mean of the mini-batch losses seen during the epoch
  double test_mse;   // after the epoch; NaN without a test set
  double lr;
  double wall_seconds;  // since training started
};

template <class Real>
struct TrainResult {
  FnoParams<Real> best;  // lowest test loss (lowest train loss without a test set)
  FnoParams<Real> last;  // after the final epoch
  std::size_t best_epoch = 0;
  double best_test_mse = 0.0;
  double initial_train_mse = 0.0;  // before the first update
  std::vector<EpochStats> history;
};

/// Mean squared error of the model over a set of examples.
template <class Real>
double evaluate_mse(const FnoParams<Real>& params, std::span<const Example> examples, std::size_t threads = 1);

template <class Real>
TrainResult<Real> train(std::span<const Example> train_set, std::span<const Example> test_set,
                        const FnoConfig& fno_config, const TrainConfig& config,
                        const std::function<void(const EpochStats&)>& on_epoch = {});

/// Same as above, starting from the given parameters instead of init_params.
template <class Real>
TrainResult<Real> train_from(FnoParams<Real> params, std::span<const Example> train_set,
                             std::span<const Example> test_set, const TrainConfig& config,
                             const std::function<void(const EpochStats&)>& on_epoch = {});

}  // namespace pawsim
