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

// One line per acceptance criterion. Trained models are cached under the
// cache directory keyed by their full effective configuration, so reruns
// skip training.

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <iostream>
#include <limits>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "oracles/fd_wave.hpp"
#include "oracles/finite_diff.hpp"
#include "oracles/naive_fno.hpp"
#include "oracles/ssim_direct.hpp"
#include "pawsim/commands.hpp"
#include "pawsim/container.hpp"
#include "pawsim/error.hpp"
#include "pawsim/io.hpp"
#include "pawsim/recon.hpp"
#include "pawsim/train.hpp"
#include "support.hpp"

using namespace pawsim;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass;
  std::string detail;
};

struct Context {
  fs::path cache;
  fs::path configs;
  RunConfig desk;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

// ---- shared models ---------------------------------------------------------

fs::path model_dir(const Context& ctx, const FnoConfig& fno) {
  if (fno == ctx.desk.fno) return ctx.cache / "desk";
  return ctx.cache / fmt("fno_m%zu_%zu_%zu_w%zu", fno.modes_x, fno.modes_y, fno.modes_t, fno.width);
}

/// Desk protocol with the given model shape, trained once per configuration.
AnyParams trained_model(const Context& ctx, const FnoConfig& fno) {
  RunConfig config = ctx.desk;
  config.fno = fno;
  const fs::path dir = model_dir(ctx, fno);
  const fs::path ckpt = dir / "model.paws";
  if (fs::exists(ckpt)) {
    const Container c = load_container(ckpt);
    if (c.metadata.contains("config") && c.metadata["config"] == to_json(config)) {
      std::cerr << "using cached model " << ckpt << '\n';
      config.checkpoint = ckpt.string();
      return load_model(config, false);
    }
  }
  std::cerr << "training " << dir.filename() << " (cached afterwards)\n";
  run_command("train", config, dir, &std::cerr);
  config.checkpoint = ckpt.string();
  return load_model(config, false);
}

const std::vector<Example>& desk_test_set(const Context& ctx) {
  static const std::vector<Example> set = generate_dataset(ctx.desk, Split::Test).examples();
  return set;
}

double test_mse(const Context& ctx, const AnyParams& model) {
  return std::visit([&](const auto& p) { return evaluate_mse(p, std::span(desk_test_set(ctx)), 1); }, model);
}

// ---- criteria --------------------------------------------------------------

Outcome solver_exactness(Context&) {
  const Grid2D grid(64, 64);
  const TimeGrid time(151, 2e-8);
  const MediumParams medium{1480.0, 1000.0};
  const PhantomKind kinds[] = {PhantomKind::Vasculature, PhantomKind::TumorBlobs, PhantomKind::Discs,
                               PhantomKind::Vasculature, PhantomKind::TumorBlobs};
  double worst = 0.0;
  for (std::size_t i = 0; i < 5; ++i) {
    PhantomSpec spec;
    spec.kind = kinds[i];
    spec.seed = 1000 + i;
    const Field2D p0 = make_phantom(spec, grid);
    const auto exact = exact_propagate(p0, medium, time);
    const auto stepped = kspace_propagate(p0, medium, time);
    for (std::size_t m = 0; m < time.nt(); ++m)
      worst = std::max(worst, testing::relative_l2(stepped.frame(m), exact.frame(m)));
  }
  return {worst <= 1e-10, fmt("worst per-frame relative L2 %.2e over 5 phantoms x 151 frames (limit 1e-10)", worst)};
}

Outcome physical_validation(Context&) {
  const Grid2D g(16, 16);
  const double L = 16 * g.dx(), sigma = 3 * g.dx();
  auto blob = [&](double x, double y) {
    double s = 0.0;
    for (int a = -2; a <= 2; ++a)
      for (int b = -2; b <= 2; ++b) {
        const double dx = x - 8 * g.dx() + a * L, dy = y - 8 * g.dy() + b * L;
        s += std::exp(-(dx * dx + dy * dy) / (2 * sigma * sigma));
      }
    return s;
  };
  Field2D p0(g);
  for (std::size_t iy = 0; iy < 16; ++iy)
    for (std::size_t ix = 0; ix < 16; ++ix) p0.at(ix, iy) = blob(ix * g.dx(), iy * g.dy());
  const TimeGrid tg(20);
  const auto spectral = exact_propagate(p0, {}, tg, {1, false});
  auto discrepancy = [&](std::size_t refine) {
    const auto fd = oracle::fd_wave({16, 16, g.dx(), g.dy(), 1480.0, tg.dt(), 20, refine, refine}, blob);
    double worst = 0.0;
    for (std::size_t m = 0; m < 20; ++m) {
      const auto f = spectral.frame(m);
      worst = std::max(worst, testing::relative_l2(fd[m], std::vector<double>(f.begin(), f.end())));
    }
    return worst;
  };
  const double e4 = discrepancy(4), e8 = discrepancy(8);
  return {e4 <= 1e-3 && e8 < e4,
          fmt("4x-refined FD %.2e (limit 1e-3); halved step %.2e, ratio %.2f", e4, e8, e4 / e8)};
}

Outcome spectral_oracle(Context&) {
  FnoConfig c;
  c.modes_x = c.modes_y = c.modes_t = 2;
  c.width = 3;
  const FeatureShape s{8, 8, 4};
  const oracle::Shape3 os{8, 8, 4};
  double worst_conv = 0.0, worst_fwd = 0.0;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const auto v = testing::random_vector(c.width * s.points(), seed);
    const auto r = testing::random_complex(c.width * c.width * c.mode_count(), seed + 100);
    worst_conv = std::max(worst_conv,
                          testing::relative_l2(spectral_conv<double>(v, r, c, s), oracle::spectral_conv(v, r, c, os)));
    const auto p = testing::random_params(c, seed + 200);
    const auto in = build_input(testing::random_field(Grid2D(8, 8), seed + 300), TimeGrid(4));
    const auto got = to_feature_layout<double>(forward(p, in, Grid2D(8, 8), TimeGrid(4)));
    worst_fwd = std::max(worst_fwd, testing::relative_l2(got, oracle::forward(p, in.values, os)));
  }
  return {worst_conv <= 1e-8 && worst_fwd <= 1e-8,
          fmt("spectral_conv %.2e, forward %.2e relative to direct DFT, 5 seeds (limit 1e-8)", worst_conv, worst_fwd)};
}

Outcome gradient_check(Context&) {
  FnoConfig c;
  c.modes_x = c.modes_y = c.modes_t = 1;
  c.width = 2;
  const Grid2D g(4, 4);
  const TimeGrid tg(2);
  double worst = 0.0;
  std::size_t checked = 0;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    FnoParams<double> p = testing::random_params(c, seed);
    const InputTensor in = build_input(testing::random_field(g, seed + 10), tg);
    SpaceTimeField target(g, tg);
    CounterRng rng(seed + 20, 5);
    for (double& v : target.values()) v = rng.uniform(-1.0, 1.0);
    const auto [loss, grads] = backward(p, in, target);
    auto loss_of = [&] { return mse_loss(forward(p, in, g, tg), target); };
    auto params = p.tensors();
    const auto gt = grads.tensors();
    for (std::size_t t = 0; t < params.size(); ++t)
      for (std::size_t i = 0; i < params[t].reals.size(); ++i) {
        const double fd = oracle::central_difference(loss_of, params[t].reals[i], 1e-5);
        worst = std::max(worst, oracle::relative_error(gt[t].reals[i], fd));
        ++checked;
      }
  }
  return {worst <= 1e-4, fmt("worst relative error %.2e over %zu parameter entries, 5 seeds (limit 1e-4)", worst,
                             checked)};
}

Outcome desk_training(Context& ctx) {
  const AnyParams model = trained_model(ctx, ctx.desk.fno);
  const auto& test = desk_test_set(ctx);
  double lo = 0.0, hi = 0.0;
  for (const auto& e : test) {
    lo = std::min(lo, e.p0.min());
    hi = std::max(hi, e.p0.max());
  }
  std::vector<SpaceTimeField> targets;
  for (const auto& e : test) targets.push_back(e.target);
  const double m = test_mse(ctx, model), zero = zero_predictor_mse(targets);
  return {m <= 1e-3 && m <= 0.1 * zero && lo >= 0.0 && hi <= 1.0,
          fmt("final test MSE %.3e (limit 1e-3); %.3fx the zero predictor %.3e (limit 0.1x); p0 in [%g, %g]", m,
              m / zero, zero, lo, hi)};
}

Outcome generalization(Context& ctx) {
  trained_model(ctx, ctx.desk.fno);
  RunConfig config = ctx.desk;
  config.checkpoint = (model_dir(ctx, ctx.desk.fno) / "model.paws").string();
  config.evaluate.phantoms = {PhantomKind::SheppLogan, PhantomKind::TumorBlobs};
  const json r = run_command("evaluate", config, ctx.cache / "evaluate", &std::cerr);
  const json& m = r["metrics"];
  const double in_dist = m["test"]["mse"];
  bool pass = std::isfinite(in_dist);
  std::string detail = fmt("in-distribution %.3e", in_dist);
  for (const char* kind : {"shepp_logan", "tumor_blobs"}) {
    const double v = m[kind]["mse"], zero = m[kind]["zero_predictor_mse"];
    pass = pass && v <= 25 * in_dist && v <= 0.5 * zero;
    detail += fmt("; %s %.3e = %.1fx in-dist (limit 25x), %.3fx zero predictor (limit 0.5x)", kind, v,
                  v / in_dist, v / zero);
  }
  return {pass, detail};
}

Outcome hyperparameter_trend(Context& ctx) {
  const std::size_t nt = ctx.desk.time.nt();
  std::vector<double> by_modes, by_width;
  for (std::size_t modes : {4u, 8u, 12u})
    by_modes.push_back(test_mse(ctx, trained_model(ctx, sweep_config(ctx.desk.fno, {modes, 8}, nt))));
  for (std::size_t width : {2u, 4u, 8u})
    by_width.push_back(test_mse(ctx, trained_model(ctx, sweep_config(ctx.desk.fno, {12, width}, nt))));
  const bool modes_ok = by_modes[0] > by_modes[1] && by_modes[1] > by_modes[2];
  const bool width_ok = by_width[0] >= by_width[1] && by_width[1] >= by_width[2];
  return {modes_ok && width_ok,
          fmt("modes 4/8/12 at width 8: %.3e %.3e %.3e (strictly decreasing: %s); width 2/4/8 at modes 12: "
              "%.3e %.3e %.3e (nonincreasing: %s)",
              by_modes[0], by_modes[1], by_modes[2], modes_ok ? "yes" : "no", by_width[0], by_width[1], by_width[2],
              width_ok ? "yes" : "no")};
}

Outcome timing_report(Context& ctx) {
  trained_model(ctx, ctx.desk.fno);
  RunConfig config = ctx.desk;
  config.checkpoint = (model_dir(ctx, ctx.desk.fno) / "model.paws").string();
  config.bench.frame_counts = {20, 40};
  // Solver runs take about a millisecond; a wider median keeps the ratio stable.
  config.bench.repetitions = std::max<std::size_t>(config.bench.repetitions, 21);
  const json r = run_command("bench", config, ctx.cache / "bench", &std::cerr);
  const json& m = r["metrics"];
  bool complete = m["rows"].size() == 2;
  for (const json& row : m["rows"]) {
    complete = complete && row.contains("solver_seconds") && row.contains("fno_seconds") && row.contains("speedup") &&
               row["speedup"].get<double>() == row["solver_seconds"].get<double>() / row["fno_seconds"].get<double>();
  }
  const double sg = m["solver_growth"], fg = m["fno_growth"], frames = m["frame_growth"];
  return {complete && sg >= 1.8 && fg < frames,
          fmt("20 -> 40 frames: solver x%.2f (need >= 1.8), FNO x%.2f (need < %.0f); speedup at 20 frames %.3g, at 40 "
              "frames %.3g",
              sg, fg, frames, m["rows"][0]["speedup"].get<double>(), m["rows"][1]["speedup"].get<double>())};
}

Outcome reconstruction(Context& ctx) {
  // Full ring vs top row on a smooth centred blob: 64x64, long record, generously padded.
  const Grid2D grid(64, 64);
  const TimeGrid time(300, 2e-8);
  const Blob blob{31.5, 31.5, 10.0, {}, {}};
  const Field2D p0 = render_blobs(grid, std::span<const Blob>(&blob, 1));
  const Field2D truth = normalize01(p0).field;
  const auto field = exact_propagate(p0, {}, time, {4, false});
  const double ring = ssim(time_reversal(sample_sensors(field, boundary_mask(grid)), {}, {4}), truth);
  const double line = ssim(time_reversal(sample_sensors(field, linear_array_mask(grid, 64)), {}, {4}), truth);

  // Surrogate sensor data on the desk grid, compared with the solver-data reconstruction.
  const AnyParams model = trained_model(ctx, ctx.desk.fno);
  const SensorMask mask = boundary_mask(ctx.desk.grid);
  const auto& test = desk_test_set(ctx);
  const std::size_t n = std::min<std::size_t>(10, test.size());
  double total = 0.0, worst = 1.0;
  for (std::size_t i = 0; i < n; ++i) {
    const Field2D& q0 = test[i].p0;
    const auto solver = exact_propagate(q0, ctx.desk.medium, ctx.desk.time, {4, false});
    const Field2D from_solver = time_reversal(sample_sensors(solver, mask), ctx.desk.medium, {4});
    const Field2D from_fno = time_reversal(sample_sensors(predict(model, q0, ctx.desk.time), mask), ctx.desk.medium, {4});
    const double s = ssim(from_fno, from_solver);
    total += s;
    worst = std::min(worst, s);
  }
  const double fno_mean = total / static_cast<double>(n);
  return {ring >= 0.85 && line < ring && fno_mean >= 0.9,
          fmt("full ring SSIM %.3f (limit 0.85), top row %.3f; FNO-data vs solver-data reconstruction mean SSIM %.3f "
              "over %zu test records, min %.3f (limit 0.9)",
              ring, line, fno_mean, n, worst)};
}

Outcome metric_correctness(Context&) {
  bool identical = true;
  double worst = 0.0;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const std::size_t nx = 12 + 2 * (seed % 5), ny = 16 + 2 * (seed % 3);
    const Field2D x = testing::random_field(Grid2D(nx, ny), seed);
    const Field2D y = testing::random_field(Grid2D(nx, ny), seed + 50);
    identical = identical && ssim(x, x) == 1.0;
    const double direct = oracle::ssim_direct({x.values().begin(), x.values().end()},
                                              {y.values().begin(), y.values().end()}, nx, ny);
    worst = std::max(worst, std::abs(ssim(x, y) - direct));
  }

  CounterRng rng(9, 1);
  std::vector<float> f32(257);
  std::vector<double> f64(255);
  std::vector<std::complex<float>> c64(129);
  std::vector<std::complex<double>> c128(127);
  for (auto& v : f32) v = std::bit_cast<float>(static_cast<std::uint32_t>(rng.below(1ull << 32)));
  for (auto& v : f64) v = std::bit_cast<double>(rng.below(std::numeric_limits<std::uint64_t>::max()));
  for (auto& v : c64) v = {static_cast<float>(rng.normal()), -0.0f};
  for (auto& v : c128) v = {rng.normal(), std::numeric_limits<double>::denorm_min()};
  Container c;
  c.metadata = {{"purpose", "round trip"}};
  c.tensors.push_back(Tensor::from_f32("f32", {257}, f32));
  c.tensors.push_back(Tensor::from_f64("f64", {5, 51}, f64));
  c.tensors.push_back(Tensor::from_c64("c64", {129}, c64));
  c.tensors.push_back(Tensor::from_c128("c128", {127, 1}, c128));
  const fs::path path = fs::temp_directory_path() / "pawsim_acceptance_roundtrip.paws";
  save_container(path, c);
  const auto first = read_file(path);
  const Container back = load_container(path);
  save_container(path, back);
  const bool exact = back == c && read_file(path) == first;
  fs::remove(path);
  return {identical && worst <= 1e-10 && exact,
          fmt("ssim(x,x) == 1 exactly: %s; max |ssim - direct window sum| %.2e (limit 1e-10); container round trip "
              "bit-exact for f32/f64/c64/c128: %s",
              identical ? "yes" : "no", worst, exact ? "yes" : "no")};
}

struct Criterion {
  int id;
  const char* name;
  Outcome (*run)(Context&);
};

const Criterion kCriteria[] = {
    {1, "solver exactness", solver_exactness},
    {2, "solver physical validation", physical_validation},
    {3, "spectral-conv oracle equivalence", spectral_oracle},
    {4, "gradient correctness", gradient_check},
    {5, "desk-scale training", desk_training},
    {6, "generalization trend", generalization},
    {7, "hyperparameter trend", hyperparameter_trend},
    {8, "timing report", timing_report},
    {9, "reconstruction pipeline", reconstruction},
    {10, "metric correctness", metric_correctness},
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"pawsim acceptance checks"};
  std::vector<int> only;
  std::string cache = PAWSIM_ACCEPTANCE_CACHE;
  std::string configs = PAWSIM_CONFIG_DIR;
  app.add_option("--only", only, "Run only these criteria");
  app.add_option("--cache", cache, "Directory for trained models");
  app.add_option("--configs", configs, "Directory holding desk.json");
  CLI11_PARSE(app, argc, argv);

  Context ctx{cache, configs, load_config(fs::path(configs) / "desk.json")};
  int failed = 0;
  for (const Criterion& c : kCriteria) {
    if (!only.empty() && std::find(only.begin(), only.end(), c.id) == only.end()) continue;
    Outcome o;
    try {
      o = c.run(ctx);
    } catch (const std::exception& e) {
      o = {false, std::string("error: ") + e.what()};
    }
    failed += !o.pass;
    std::cout << "criterion " << c.id << " (" << c.name << "): " << (o.pass ? "PASS" : "FAIL") << ": " << o.detail
              << std::endl;
  }
  return failed == 0 ? 0 : 1;
}
