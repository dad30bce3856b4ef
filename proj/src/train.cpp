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

#include "pawsim/train.hpp"

#include <chrono>
#include <cmath>
#include <exception>
#include <limits>
#include <numeric>
#include <thread>

#include "pawsim/error.hpp"
#include "pawsim/recon.hpp"
#include "pawsim/rng.hpp"

namespace pawsim {

double mse_loss(const SpaceTimeField& pred, const SpaceTimeField& target) { return mse(pred, target); }

namespace {

template <class Real>
double squared_error(const Real* a, const Real* b, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = static_cast<double>(a[i]) - static_cast<double>(b[i]);
    acc += d * d;
  }
  return acc;
}

// g = scale (out - target)
template <class Real>
void loss_gradient(const Real* out, const Real* target, std::size_t n, double scale, Real* g) {
  const Real s = static_cast<Real>(scale);
  for (std::size_t i = 0; i < n; ++i) g[i] = s * (out[i] - target[i]);
}

}  // namespace

template <class Real>
LossAndGrads<Real> backward(const FnoParams<Real>& params, const InputTensor& input, const SpaceTimeField& target) {
  params.check_shapes();
  require(input.shape.nx == target.grid().nx() && input.shape.ny == target.grid().ny() &&
              input.shape.nt == target.nt(),
          "target does not match the input tensor");
  require(params.config.out_channels == 1, "training needs a single output channel");
  FnoEngine<Real> engine(params.config, input.shape);
  const std::size_t n = input.shape.points();
  const std::vector<Real> in(input.values.begin(), input.values.end());
  const std::vector<Real> tgt = to_feature_layout<Real>(target);
  std::vector<Real> out(n), g(n);
  engine.forward(params, in.data(), out.data());
  const double loss = squared_error(out.data(), tgt.data(), n) / static_cast<double>(n);
  if (!std::isfinite(loss)) throw Error(ErrorCode::NumericalFailure, "non-finite loss");
  loss_gradient(out.data(), tgt.data(), n, 2.0 / static_cast<double>(n), g.data());
  LossAndGrads<Real> result{loss, FnoParams<Real>::zeros(params.config)};
  engine.backward(params, in.data(), g.data(), result.grads);
  return result;
}

template <class Real>
AdamState<Real> AdamState<Real>::fresh(const FnoParams<Real>& like, double lr) {
  AdamState s{FnoParams<Real>::zeros(like.config), FnoParams<Real>::zeros(like.config)};
  s.lr = lr;
  return s;
}

template <class Real>
void adam_step(FnoParams<Real>& params, const FnoGrads<Real>& grads, AdamState<Real>& state) {
  require(grads.config == params.config && state.m.config == params.config && state.v.config == params.config,
          "Adam state does not match the parameters");
  require(state.lr > 0 && state.beta1 > 0 && state.beta1 < 1 && state.beta2 > 0 && state.beta2 < 1 && state.eps > 0,
          "invalid Adam hyperparameters");
  ++state.t;
  const double b1 = state.beta1, b2 = state.beta2;
  const double c1 = 1.0 - std::pow(b1, static_cast<double>(state.t));
  const double c2 = 1.0 - std::pow(b2, static_cast<double>(state.t));
  auto p = params.tensors();
  const auto g = grads.tensors();
  auto m = state.m.tensors();
  auto v = state.v.tensors();
  for (std::size_t t = 0; t < p.size(); ++t) {
    for (std::size_t i = 0; i < p[t].reals.size(); ++i) {
      const double gi = g[t].reals[i];
      const double mi = b1 * m[t].reals[i] + (1.0 - b1) * gi;
      const double vi = b2 * v[t].reals[i] + (1.0 - b2) * gi * gi;
      m[t].reals[i] = static_cast<Real>(mi);
      v[t].reals[i] = static_cast<Real>(vi);
      const double step = state.lr * (mi / c1) / (std::sqrt(vi / c2) + state.eps);
      p[t].reals[i] = static_cast<Real>(p[t].reals[i] - step);
    }
  }
}

const char* to_string(Precision p) noexcept { return p == Precision::Single ? "f32" : "f64"; }

Precision precision_from_string(const std::string& name) {
  if (name == "f32" || name == "single" || name == "float") return Precision::Single;
  if (name == "f64" || name == "double") return Precision::Double;
  throw_invalid("unknown precision '" + name + "'");
}

void TrainConfig::validate() const {
  require(epochs >= 1, "epochs must be positive");
  require(batch_size >= 1, "batch size must be positive");
  require(std::isfinite(lr) && lr > 0, "learning rate must be positive");
  require(lr_decay_step >= 1, "learning-rate decay step must be positive");
  require(std::isfinite(lr_decay_gamma) && lr_decay_gamma > 0, "learning-rate decay factor must be positive");
  require(threads >= 1, "thread count must be positive");
}

double TrainConfig::lr_at(std::size_t epoch) const {
  return lr * std::pow(lr_decay_gamma, static_cast<double>(epoch / lr_decay_step));
}

namespace {

template <class Real>
struct Prepared {
  aligned_vector<Real> input;
  aligned_vector<Real> target;
};

template <class Real>
std::vector<Prepared<Real>> prepare(std::span<const Example> examples, const FeatureShape& shape) {
  std::vector<Prepared<Real>> out;
  out.reserve(examples.size());
  for (const Example& e : examples) {
    require(e.p0.grid() == e.target.grid(), "example input and target grids differ");
    require(e.p0.grid().nx() == shape.nx && e.p0.grid().ny() == shape.ny && e.target.nt() == shape.nt,
            "all examples must share one grid and frame count");
    const InputTensor in = build_input(e.p0, e.target.tgrid());
    const std::vector<Real> t = to_feature_layout<Real>(e.target);
    out.push_back({aligned_vector<Real>(in.values.begin(), in.values.end()), aligned_vector<Real>(t.begin(), t.end())});
  }
  return out;
}

FeatureShape shape_of(const Example& e) { return {e.p0.grid().nx(), e.p0.grid().ny(), e.target.nt()}; }

template <class Real>
struct Worker {
  Worker(const FnoConfig& config, const FeatureShape& shape)
      : engine(config, shape), grads(FnoParams<Real>::zeros(config)), out(shape.points()), g(shape.points()) {}
  FnoEngine<Real> engine;
  FnoParams<Real> grads;
  aligned_vector<Real> out;
  aligned_vector<Real> g;
  double value = 0.0;
};

// Runs job(worker, item) for items [0, count) in waves, one item per worker.
// after(worker, item) runs on the calling thread in item order after each
// wave, which keeps reductions independent of the thread count.
template <class Real, class Job, class After>
void run_waves(std::vector<Worker<Real>>& workers, std::size_t count, Job job, After after) {
  for (std::size_t start = 0; start < count; start += workers.size()) {
    const std::size_t wave = std::min(workers.size(), count - start);
    if (wave == 1) {
      job(workers[0], start);
    } else {
      std::vector<std::exception_ptr> errors(wave);
      std::vector<std::thread> pool;
      pool.reserve(wave);
      for (std::size_t t = 0; t < wave; ++t) {
        pool.emplace_back([&, t] {
          try {
            job(workers[t], start + t);
          } catch (...) {
            errors[t] = std::current_exception();
          }
        });
      }
      for (auto& th : pool) th.join();
      for (auto& e : errors) {
        if (e) std::rethrow_exception(e);
      }
    }
    for (std::size_t t = 0; t < wave; ++t) after(workers[t], start + t);
  }
}

template <class Real>
std::vector<Worker<Real>> make_workers(const FnoConfig& config, const FeatureShape& shape, std::size_t n) {
  std::vector<Worker<Real>> w;
  w.reserve(n);
  for (std::size_t i = 0; i < n; ++i) w.emplace_back(config, shape);
  return w;
}

template <class Real>
double mean_mse(const FnoParams<Real>& params, const std::vector<Prepared<Real>>& data,
                std::vector<Worker<Real>>& workers) {
  if (data.empty()) return std::numeric_limits<double>::quiet_NaN();
  const std::size_t n = data.front().target.size();
  double total = 0.0;
  run_waves<Real>(
      workers, data.size(),
      [&](Worker<Real>& w, std::size_t i) {
        w.engine.forward(params, data[i].input.data(), w.out.data());
        w.value = squared_error(w.out.data(), data[i].target.data(), n) / static_cast<double>(n);
      },
      [&](Worker<Real>& w, std::size_t) { total += w.value; });
  return total / static_cast<double>(data.size());
}

template <class Real>
void accumulate(FnoParams<Real>& total, const FnoParams<Real>& part) {
  auto dst = total.tensors();
  const auto src = part.tensors();
  for (std::size_t t = 0; t < dst.size(); ++t) {
    for (std::size_t i = 0; i < dst[t].reals.size(); ++i) dst[t].reals[i] += src[t].reals[i];
  }
}

}  // namespace

template <class Real>
double evaluate_mse(const FnoParams<Real>& params, std::span<const Example> examples, std::size_t threads) {
  params.check_shapes();
  require(threads >= 1, "thread count must be positive");
  if (examples.empty()) return std::numeric_limits<double>::quiet_NaN();
  const FeatureShape shape = shape_of(examples.front());
  const auto data = prepare<Real>(examples, shape);
  auto workers = make_workers<Real>(params.config, shape, std::min(threads, data.size()));
  return mean_mse(params, data, workers);
}

template <class Real>
TrainResult<Real> train_from(FnoParams<Real> params, std::span<const Example> train_set,
                             std::span<const Example> test_set, const TrainConfig& config,
                             const std::function<void(const EpochStats&)>& on_epoch) {
  config.validate();
  params.check_shapes();
  require(!train_set.empty(), "training set is empty");
  const FeatureShape shape = shape_of(train_set.front());
  params.config.validate_for(shape.nx, shape.ny, shape.nt);
  const auto train_data = prepare<Real>(train_set, shape);
  const auto test_data = prepare<Real>(test_set, shape);
  const std::size_t n = shape.points();

  auto workers = make_workers<Real>(params.config, shape, std::min(config.threads, config.batch_size));
  FnoParams<Real> batch_grads = FnoParams<Real>::zeros(params.config);
  AdamState<Real> adam = AdamState<Real>::fresh(params, config.lr);

  TrainResult<Real> result;
  result.best = params;
  result.initial_train_mse = mean_mse(params, train_data, workers);
  double best = std::numeric_limits<double>::infinity();
  const auto t0 = std::chrono::steady_clock::now();

  std::vector<std::size_t> order(train_data.size());
  for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
    std::iota(order.begin(), order.end(), std::size_t{0});
    CounterRng rng(config.seed, 0x7368756600000000ULL + epoch);
    for (std::size_t i = order.size(); i > 1; --i) std::swap(order[i - 1], order[rng.below(i)]);
    adam.lr = config.lr_at(epoch);

    double loss_sum = 0.0;
    std::size_t batches = 0;
    for (std::size_t start = 0; start < order.size(); start += config.batch_size) {
      const std::size_t b = std::min(config.batch_size, order.size() - start);
      const double g_scale = 2.0 / (static_cast<double>(n) * static_cast<double>(b));
      batch_grads.set_zero();
      double batch_loss = 0.0;
      run_waves<Real>(
          workers, b,
          [&](Worker<Real>& w, std::size_t j) {
            const Prepared<Real>& rec = train_data[order[start + j]];
            w.engine.forward(params, rec.input.data(), w.out.data());
            w.value = squared_error(w.out.data(), rec.target.data(), n) / static_cast<double>(n);
            loss_gradient(w.out.data(), rec.target.data(), n, g_scale, w.g.data());
            w.grads.set_zero();
            w.engine.backward(params, rec.input.data(), w.g.data(), w.grads);
          },
          [&](Worker<Real>& w, std::size_t) {
            batch_loss += w.value;
            accumulate(batch_grads, w.grads);
          });
      batch_loss /= static_cast<double>(b);
      if (!std::isfinite(batch_loss)) {
        throw Error(ErrorCode::NumericalFailure, "training loss became non-finite at epoch " +
                                                     std::to_string(epoch) + ", batch " + std::to_string(batches));
      }
      adam_step(params, batch_grads, adam);
      loss_sum += batch_loss;
      ++batches;
    }

    EpochStats stats{epoch, loss_sum / static_cast<double>(batches), mean_mse(params, test_data, workers),
                     adam.lr, 0.0};
    stats.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const double score = test_data.empty() ? stats.train_mse : stats.test_mse;
    if (score < best) {
      best = score;
      result.best = params;
      result.best_epoch = epoch;
      result.best_test_mse = stats.test_mse;
    }
    result.history.push_back(stats);
    if (on_epoch) on_epoch(stats);
  }
  result.last = std::move(params);
  return result;
}

template <class Real>
TrainResult<Real> train(std::span<const Example> train_set, std::span<const Example> test_set,
                        const FnoConfig& fno_config, const TrainConfig& config,
                        const std::function<void(const EpochStats&)>& on_epoch) {
  return train_from(init_params<Real>(fno_config, config.seed), train_set, test_set, config, on_epoch);
}

#define PAWSIM_INSTANTIATE(R)                                                                                  \
  template LossAndGrads<R> backward<R>(const FnoParams<R>&, const InputTensor&, const SpaceTimeField&);        \
  template struct AdamState<R>;                                                                                \
  template void adam_step<R>(FnoParams<R>&, const FnoGrads<R>&, AdamState<R>&);                                \
  template double evaluate_mse<R>(const FnoParams<R>&, std::span<const Example>, std::size_t);                 \
  template TrainResult<R> train<R>(std::span<const Example>, std::span<const Example>, const FnoConfig&,       \
                                   const TrainConfig&, const std::function<void(const EpochStats&)>&);         \
  template TrainResult<R> train_from<R>(FnoParams<R>, std::span<const Example>, std::span<const Example>,      \
                                        const TrainConfig&, const std::function<void(const EpochStats&)>&);

PAWSIM_INSTANTIATE(float)
PAWSIM_INSTANTIATE(double)
#undef PAWSIM_INSTANTIATE

}  // namespace pawsim
