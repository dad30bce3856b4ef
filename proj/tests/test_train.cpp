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

#include <cmath>
#include <utility>

#include "doctest.h"
#include "oracles/finite_diff.hpp"
#include "pawsim/error.hpp"
#include "pawsim/recon.hpp"
#include "pawsim/solver.hpp"
#include "pawsim/train.hpp"
#include "support.hpp"

using namespace pawsim;

namespace {

FnoConfig tiny_config() {
  FnoConfig c;
  c.modes_x = c.modes_y = c.modes_t = 1;
  c.width = 2;
  return c;
}

SpaceTimeField random_target(const Grid2D& g, const TimeGrid& tg, std::uint64_t seed) {
  const auto v = testing::random_vector(g.size() * tg.nt(), seed);
  return SpaceTimeField(g, tg, v);
}

double loss_of(const FnoParams<double>& p, const InputTensor& in, const SpaceTimeField& target) {
  return mse_loss(forward(p, in, target.grid(), target.tgrid()), target);
}

std::vector<Example> constant_dataset(std::size_t n, const Grid2D& g, const TimeGrid& tg, std::uint64_t seed) {
  std::vector<Example> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back({testing::random_field(g, seed + i), SpaceTimeField(g, tg)});
  return out;
}

}  // namespace

TEST_SUITE("train") {
  TEST_CASE("mse_loss examples") {
    const Grid2D g(4, 4);
    const TimeGrid tg(2);
    const SpaceTimeField a = random_target(g, tg, 1);
    CHECK(mse_loss(a, a) == 0.0);
    CHECK(mse_loss(SpaceTimeField(g, tg, 1.0), SpaceTimeField(g, tg)) == 1.0);
    CHECK(mse(std::vector<double>{0, 2}, std::vector<double>{0, 0}) == 2.0);
    CHECK_THROWS_AS(mse_loss(a, SpaceTimeField(g, TimeGrid(3))), Error);
  }

  TEST_CASE("gradients match central finite differences") {
    const Grid2D g(4, 4);
    const TimeGrid tg(2);
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
      FnoParams<double> p = testing::random_params(tiny_config(), seed);
      const InputTensor in = build_input(testing::random_field(g, seed + 10), tg);
      const SpaceTimeField target = random_target(g, tg, seed + 20);
      const auto [loss, grads] = backward(p, in, target);
      CHECK(loss == doctest::Approx(loss_of(p, in, target)).epsilon(1e-12));

      double worst = 0.0;
      auto params = p.tensors();
      const auto gt = grads.tensors();
      for (std::size_t t = 0; t < params.size(); ++t) {
        for (std::size_t i = 0; i < params[t].reals.size(); ++i) {
          const double fd =
              oracle::central_difference([&] { return loss_of(p, in, target); }, params[t].reals[i], 1e-5);
          const double err = oracle::relative_error(gt[t].reals[i], fd);
          if (err > 1e-4) MESSAGE(params[t].name << "[" << i << "]: " << gt[t].reals[i] << " vs " << fd);
          worst = std::max(worst, err);
        }
      }
      CHECK(worst <= 1e-4);
    }
  }

  TEST_CASE("zero parameters and target give zero loss and zero gradients") {
    const Grid2D g(4, 4);
    const TimeGrid tg(2);
    const auto p = FnoParams<double>::zeros(tiny_config());
    const auto [loss, grads] = backward(p, build_input(testing::random_field(g, 3), tg), SpaceTimeField(g, tg));
    CHECK(loss == 0.0);
    for (const auto& t : grads.tensors())
      for (double x : t.reals) CHECK(x == 0.0);
  }

  TEST_CASE("gradients are affine in the target scale") {
    const Grid2D g(4, 4);
    const TimeGrid tg(2);
    const auto p = testing::random_params(tiny_config(), 8);
    const InputTensor in = build_input(testing::random_field(g, 9), tg);
    const SpaceTimeField target = random_target(g, tg, 10);
    auto scaled = [&](double alpha) {
      SpaceTimeField t = target;
      for (double& v : t.values()) v *= alpha;
      return backward(p, in, t);
    };
    const auto g0 = scaled(0.0), g1 = scaled(1.0), ga = scaled(2.5);
    // L(alpha) is quadratic: second difference over equal steps
    const auto g2 = scaled(2.0);
    CHECK(ga.loss == doctest::Approx(g0.loss + 2.5 * (g1.loss - g0.loss) +
                                     2.5 * 1.5 * 0.5 * (g2.loss - 2.0 * g1.loss + g0.loss))
                         .epsilon(1e-10));
    const auto t0 = g0.grads.tensors(), t1 = g1.grads.tensors(), ta = ga.grads.tensors();
    double worst = 0.0;
    for (std::size_t t = 0; t < t0.size(); ++t)
      for (std::size_t i = 0; i < t0[t].reals.size(); ++i) {
        const double want = t0[t].reals[i] + 2.5 * (t1[t].reals[i] - t0[t].reals[i]);
        worst = std::max(worst, oracle::relative_error(ta[t].reals[i], want, 1e-10));
      }
    CHECK(worst <= 1e-9);

    // and each scaled gradient still matches finite differences
    SpaceTimeField t25 = target;
    for (double& v : t25.values()) v *= 2.5;
    FnoParams<double> q = p;
    auto qt = q.tensors();
    double fd_worst = 0.0;
    for (std::size_t t = 0; t < qt.size(); ++t)
      for (std::size_t i = 0; i < qt[t].reals.size(); i += 3) {
        const double fd = oracle::central_difference([&] { return loss_of(q, in, t25); }, qt[t].reals[i], 1e-5);
        fd_worst = std::max(fd_worst, oracle::relative_error(ta[t].reals[i], fd));
      }
    CHECK(fd_worst <= 1e-4);
  }

  TEST_CASE("adam_step closed-form cases") {
    FnoConfig c = tiny_config();
    auto p = testing::random_params(c, 4);
    const auto before = p;
    auto zero = FnoParams<double>::zeros(c);
    auto state = AdamState<double>::fresh(p, 1e-3);
    adam_step(p, zero, state);
    CHECK(state.t == 1);
    const auto a = std::as_const(p).tensors();
    const auto b = before.tensors();
    for (std::size_t t = 0; t < a.size(); ++t)
      for (std::size_t i = 0; i < a[t].reals.size(); ++i) CHECK(a[t].reals[i] == b[t].reals[i]);

    // scalar case: p = 1, g = 1, lr = 0.1
    auto q = FnoParams<double>::zeros(c);
    auto g = FnoParams<double>::zeros(c);
    q.proj_b[0] = 1.0;
    g.proj_b[0] = 1.0;
    g.lift_w[3] = -2.5;
    auto s = AdamState<double>::fresh(q, 0.1);
    adam_step(q, g, s);
    CHECK(q.proj_b[0] == doctest::Approx(1.0 - 0.1 / (1.0 + 1e-8)).epsilon(1e-14));
    CHECK(q.lift_w[3] > 0.0);  // step direction is -sign(g)
  }

  TEST_CASE("adam minimises a quadratic") {
    auto p = FnoParams<double>::zeros(tiny_config());
    p.proj_b[0] = 5.0;
    auto state = AdamState<double>::fresh(p, 0.05);
    auto g = FnoParams<double>::zeros(tiny_config());
    int steps = 0;
    while (std::abs(p.proj_b[0]) >= 1e-2 && steps < 500) {
      g.proj_b[0] = 2.0 * p.proj_b[0];
      adam_step(p, g, state);
      ++steps;
    }
    CHECK(std::abs(p.proj_b[0]) < 1e-2);
    CHECK(steps <= 500);
  }

  TEST_CASE("training learns the zero map") {
    const Grid2D g(4, 4);
    const TimeGrid tg(2);
    const auto data = constant_dataset(8, g, tg, 100);
    TrainConfig tc;
    tc.epochs = 50;
    tc.batch_size = 2;
    tc.lr = 1e-2;
    tc.lr_decay_step = 10;
    tc.lr_decay_gamma = 0.5;
    tc.precision = Precision::Double;
    const auto result = train<double>(data, {}, tiny_config(), tc);
    CHECK(result.history.back().train_mse < 1e-6);
    CHECK(evaluate_mse(result.best, std::span<const Example>(data)) < 1e-6);
  }

  TEST_CASE("a single record is overfitted") {
    const Grid2D g(4, 4);
    const TimeGrid tg(2);
    const Field2D p0 = testing::random_field(g, 1);
    std::vector<Example> data{{p0, exact_propagate(p0, MediumParams{}, tg)}};
    FnoConfig c = tiny_config();
    c.width = 4;
    c.modes_x = c.modes_y = 2;
    TrainConfig tc;
    tc.epochs = 200;
    tc.batch_size = 1;
    tc.lr = 1e-2;
    tc.precision = Precision::Double;
    const auto result = train<double>(data, {}, c, tc);
    CHECK(result.history.back().train_mse * 100.0 <= result.initial_train_mse);
  }

  TEST_CASE("training is reproducible and independent of the thread count") {
    const Grid2D g(8, 8);
    const TimeGrid tg(4);
    std::vector<Example> data;
    for (std::uint64_t i = 0; i < 10; ++i) data.push_back({testing::random_field(g, i), random_target(g, tg, 50 + i)});
    FnoConfig c = tiny_config();
    c.modes_x = c.modes_y = 2;
    TrainConfig tc;
    tc.epochs = 3;
    tc.batch_size = 4;
    tc.seed = 9;
    tc.precision = Precision::Double;
    std::span<const Example> train_set(data.data(), 8), test_set(data.data() + 8, 2);
    const auto a = train<double>(train_set, test_set, c, tc);
    const auto b = train<double>(train_set, test_set, c, tc);
    tc.threads = 3;
    const auto d = train<double>(train_set, test_set, c, tc);
    REQUIRE(a.history.size() == 3);
    for (std::size_t e = 0; e < 3; ++e) {
      CHECK(a.history[e].train_mse == b.history[e].train_mse);
      CHECK(a.history[e].test_mse == b.history[e].test_mse);
      CHECK(a.history[e].train_mse == d.history[e].train_mse);
      CHECK(a.history[e].test_mse == d.history[e].test_mse);
    }
    CHECK(a.history.back().train_mse < a.initial_train_mse);
    const auto pa = a.best.tensors(), pd = d.best.tensors();
    for (std::size_t t = 0; t < pa.size(); ++t)
      CHECK(std::equal(pa[t].reals.begin(), pa[t].reals.end(), pd[t].reals.begin()));
  }

  TEST_CASE("training rejects an empty dataset") {
    CHECK_THROWS_AS(train<double>({}, {}, tiny_config(), TrainConfig{}), Error);
  }
}
