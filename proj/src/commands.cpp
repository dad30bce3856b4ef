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

#include "pawsim/commands.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <set>

#include "pawsim/error.hpp"
#include "pawsim/io.hpp"
#include "pawsim/pgm.hpp"
#include "pawsim/recon.hpp"
#include "pawsim/rng.hpp"

namespace pawsim {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

std::string hex(std::uint64_t h) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::uint64_t field_hash(const SpaceTimeField& f) { return fnv1a64(f.values().data(), f.values().size_bytes()); }

double max_abs(const SpaceTimeField& f) {
  double m = 0.0;
  for (double v : f.values()) m = std::max(m, std::abs(v));
  return m;
}

void note(std::ostream* log, const std::string& line) {
  if (log) *log << line << '\n' << std::flush;
}

json base_report(const std::string& command, const RunConfig& config) {
  return {{"command", command}, {"seed", config.seed}, {"config", to_json(config)}, {"metrics", json::object()}};
}

Dataset load_or_generate(const RunConfig& config, Split split, std::ostream* log) {
  const std::string& path = split == Split::Train ? config.data.train_path : config.data.test_path;
  if (path.empty()) {
    note(log, std::string("generating ") + to_string(split) + " records");
    return generate_dataset(config, split);
  }
  Dataset d = load_dataset(path);
  require(grid_from_json(d.metadata.at("grid")) == config.grid, "dataset " + path + " was built on another grid");
  require(time_from_json(d.metadata.at("time")).nt() == config.time.nt(),
          "dataset " + path + " has a different frame count");
  return d;
}

bool phantom_is_random(PhantomKind kind) { return kind != PhantomKind::SheppLogan && kind != PhantomKind::Bitmap; }

std::vector<SpaceTimeField> targets_of(std::span<const Example> examples) {
  std::vector<SpaceTimeField> out;
  for (const auto& e : examples) out.push_back(e.target);
  return out;
}

double model_mse(const AnyParams& params, std::span<const Example> examples, std::size_t threads) {
  return std::visit([&](const auto& p) { return evaluate_mse(p, examples, threads); }, params);
}

template <class Real>
Container to_checkpoint(const FnoParams<Real>& params, const RunConfig& config, json extra) {
  extra["config"] = to_json(config);
  return checkpoint_to_container(params, std::move(extra));
}

Container any_checkpoint(const AnyParams& params, const RunConfig& config, json extra) {
  return std::visit([&](const auto& p) { return to_checkpoint(p, config, std::move(extra)); }, params);
}

void dump_frames(const fs::path& out, const std::string& stem, const SpaceTimeField& field) {
  write_image(out / (stem + "_first.pgm"), field.frame_field(0));
  write_image(out / (stem + "_last.pgm"), field.frame_field(field.nt() - 1));
}

SensorMask command_mask(const RunConfig& config) {
  if (config.sensors.layout == "linear") {
    return linear_array_mask(config.grid, config.sensors.count ? config.sensors.count : config.grid.nx());
  }
  return boundary_mask(config.grid);
}

template <class Real>
AnyParams train_model(std::span<const Example> train_set, std::span<const Example> test_set, const FnoConfig& fno,
                      const TrainConfig& tc, std::ostream* log, std::vector<EpochStats>& history) {
  auto result = train<Real>(train_set, test_set, fno, tc, [&](const EpochStats& s) {
    if (log && (s.epoch % 10 == 0 || s.epoch + 1 == tc.epochs)) {
      char buf[160];
      std::snprintf(buf, sizeof buf, "epoch %zu  train %.4e  test %.4e  lr %.2e  %.1fs", s.epoch, s.train_mse,
                    s.test_mse, s.lr, s.wall_seconds);
      note(log, buf);
    }
  });
  history = std::move(result.history);
  return AnyParams(std::move(result.last));
}

AnyParams train_any(const RunConfig& config, const FnoConfig& fno, std::span<const Example> train_set,
                    std::span<const Example> test_set, std::ostream* log, std::vector<EpochStats>& history) {
  return config.train.precision == Precision::Single
             ? train_model<float>(train_set, test_set, fno, config.train, log, history)
             : train_model<double>(train_set, test_set, fno, config.train, log, history);
}

}  // namespace

const FnoConfig& model_config(const AnyParams& params) {
  return std::visit([](const auto& p) -> const FnoConfig& { return p.config; }, params);
}

AnyParams load_model(const RunConfig& config, bool allow_random) {
  if (!config.checkpoint.empty()) {
    const Container c = load_container(config.checkpoint);
    if (checkpoint_precision(c) == Precision::Single) return params_from_container<float>(c);
    return params_from_container<double>(c);
  }
  require(allow_random, "this command needs a checkpoint");
  if (config.train.precision == Precision::Single) return init_params<float>(config.fno, config.train.seed);
  return init_params<double>(config.fno, config.train.seed);
}

SpaceTimeField predict(const AnyParams& params, const Field2D& p0, const TimeGrid& tgrid) {
  const InputTensor input = build_input(p0, tgrid);
  return std::visit([&](const auto& p) { return forward(p, input, p0.grid(), tgrid); }, params);
}

Field2D command_phantom(const RunConfig& config) {
  PhantomSpec spec = config.data.phantom;
  spec.seed = config.seed;
  return make_phantom(spec, config.grid);
}

double field_ssim(const SpaceTimeField& a, const SpaceTimeField& b) {
  require(a.grid() == b.grid() && a.nt() == b.nt(), "fields differ in shape");
  double total = 0.0;
  for (std::size_t m = 0; m < a.nt(); ++m) {
    total += ssim(normalize01(a.frame_field(m)).field, normalize01(b.frame_field(m)).field);
  }
  return total / static_cast<double>(a.nt());
}

double zero_predictor_mse(std::span<const SpaceTimeField> targets) {
  require(!targets.empty(), "no targets");
  double total = 0.0;
  for (const auto& t : targets) {
    SpaceTimeField zero(t.grid(), t.tgrid());
    total += mse(zero, t);
  }
  return total / static_cast<double>(targets.size());
}

void write_history_csv(const fs::path& path, std::span<const EpochStats> history) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream f(path);
  if (!f) throw Error(ErrorCode::Io, "cannot write " + path.string());
  f << "epoch,train_mse,test_mse,lr,wall_seconds\n";
  char buf[160];
  for (const auto& s : history) {
    std::snprintf(buf, sizeof buf, "%zu,%.17g,%.17g,%.17g,%.6f\n", s.epoch, s.train_mse, s.test_mse, s.lr,
                  s.wall_seconds);
    f << buf;
  }
}

void write_image(const fs::path& path, const Field2D& field) {
  write_pgm(path, to_gray16(normalize01(field).field));
}

json cmd_gen_data(const RunConfig& config, const fs::path& out, std::ostream* log) {
  json report = base_report("gen-data", config);
  const Dataset train_set = generate_dataset(config, Split::Train);
  const Dataset test_set = generate_dataset(config, Split::Test);
  save_dataset(out / "train.paws", train_set);
  save_dataset(out / "test.paws", test_set);
  note(log, "wrote " + std::to_string(train_set.records.size()) + " train and " +
                std::to_string(test_set.records.size()) + " test records");

  std::set<std::uint64_t> train_hashes;
  for (const auto& r : train_set.records) train_hashes.insert(r.hash);
  std::size_t overlap = 0;
  for (const auto& r : test_set.records) overlap += train_hashes.count(r.hash);
  for (const auto* d : {&train_set, &test_set}) {
    if (d->records.empty()) continue;
    const std::string stem = d == &train_set ? "train_record0" : "test_record0";
    write_image(out / (stem + "_p0.pgm"), d->records[0].p0);
    dump_frames(out, stem + "_target", d->records[0].target);
  }
  report["files"] = {{"train", (out / "train.paws").string()}, {"test", (out / "test.paws").string()}};
  report["metrics"] = {{"n_train", train_set.records.size()},
                       {"n_test", test_set.records.size()},
                       {"hash_overlap", overlap}};
  return report;
}

json cmd_train(const RunConfig& config, const fs::path& out, std::ostream* log) {
  json report = base_report("train", config);
  const Dataset train_data = load_or_generate(config, Split::Train, log);
  const Dataset test_data = load_or_generate(config, Split::Test, log);
  const auto train_set = train_data.examples();
  const auto test_set = test_data.examples();
  config.fno.validate_for(config.grid.nx(), config.grid.ny(), config.time.nt());

  std::vector<EpochStats> history;
  const auto t0 = Clock::now();
  const AnyParams model = train_any(config, config.fno, train_set, test_set, log, history);
  const double wall = seconds_since(t0);

  const double final_test = test_set.empty() ? std::numeric_limits<double>::quiet_NaN()
                                             : model_mse(model, test_set, config.train.threads);
  const double zero_test =
      test_set.empty() ? std::numeric_limits<double>::quiet_NaN() : zero_predictor_mse(targets_of(test_set));
  save_container(out / "model.paws",
                 any_checkpoint(model, config, {{"epochs", config.train.epochs}, {"test_mse", final_test}}));
  write_history_csv(out / "history.csv", history);

  report["files"] = {{"checkpoint", (out / "model.paws").string()}, {"history", (out / "history.csv").string()}};
  report["metrics"] = {{"final_train_mse", history.empty() ? std::numeric_limits<double>::quiet_NaN()
                                                           : history.back().train_mse},
                       {"final_test_mse", final_test},
                       {"zero_predictor_test_mse", zero_test},
                       {"test_to_zero_ratio", final_test / zero_test},
                       {"epochs", history.size()},
                       {"wall_seconds", wall}};
  return report;
}

json cmd_infer(const RunConfig& config, const fs::path& out, std::ostream*) {
  json report = base_report("infer", config);
  const AnyParams model = load_model(config, false);
  const Field2D p0 = command_phantom(config);
  const auto t0 = Clock::now();
  const SpaceTimeField pred = predict(model, p0, config.time);
  const double seconds = seconds_since(t0);
  const SpaceTimeField target = propagate(config, p0);

  save_container(out / "prediction.paws", field_to_container(pred, {{"config", to_json(config)}}));
  write_image(out / "p0.pgm", p0);
  dump_frames(out, "prediction", pred);
  report["files"] = {{"prediction", (out / "prediction.paws").string()}};
  report["metrics"] = {{"mse_vs_solver", mse(pred, target)},
                       {"ssim_vs_solver", field_ssim(pred, target)},
                       {"max_abs", max_abs(pred)},
                       {"inference_seconds", seconds},
                       {"prediction_hash", hex(field_hash(pred))}};
  return report;
}

json cmd_simulate(const RunConfig& config, const fs::path& out, std::ostream*) {
  json report = base_report("simulate", config);
  const Field2D p0 = command_phantom(config);
  const auto t0 = Clock::now();
  const SpaceTimeField field = propagate(config, p0);
  const double seconds = seconds_since(t0);

  save_container(out / "field.paws", field_to_container(field, {{"config", to_json(config)}}));
  save_container(out / "p0.paws", image_to_container(p0, {{"config", to_json(config)}}));
  write_image(out / "p0.pgm", p0);
  dump_frames(out, "field", field);
  report["files"] = {{"field", (out / "field.paws").string()}, {"p0", (out / "p0.paws").string()}};
  report["metrics"] = {{"frames", field.nt()},
                       {"max_abs", max_abs(field)},
                       {"solver_seconds", seconds},
                       {"field_hash", hex(field_hash(field))}};
  return report;
}

json cmd_reconstruct(const RunConfig& config, const fs::path& out, std::ostream*) {
  json report = base_report("reconstruct", config);
  const Field2D p0 = command_phantom(config);
  const SensorMask mask = command_mask(config);
  const PropagationOptions prop{config.recon.pad_factor, config.propagation.smooth};
  const TimeReversalOptions tr{config.recon.pad_factor};
  const SensorData solver_data = sample_sensors(exact_propagate(p0, config.medium, config.time, prop), mask);
  const Field2D from_solver = time_reversal(solver_data, config.medium, tr);
  const Field2D truth = normalize01(p0).field;

  json metrics = {{"sensors", mask.size()},
                  {"ssim_vs_truth", ssim(from_solver, truth)},
                  {"mse_vs_truth", mse(from_solver, truth)}};
  write_image(out / "p0.pgm", p0);
  write_image(out / "reconstruction.pgm", from_solver);
  save_container(out / "reconstruction.paws", image_to_container(from_solver, {{"config", to_json(config)}}));
  if (config.recon.source == "fno") {
    const AnyParams model = load_model(config, false);
    const SensorData fno_data = sample_sensors(predict(model, p0, config.time), mask);
    const Field2D from_fno = time_reversal(fno_data, config.medium, tr);
    write_image(out / "reconstruction_fno.pgm", from_fno);
    metrics["fno_ssim_vs_truth"] = ssim(from_fno, truth);
    metrics["fno_ssim_vs_solver_recon"] = ssim(from_fno, from_solver);
    metrics["fno_mse_vs_solver_recon"] = mse(from_fno, from_solver);
  }
  report["metrics"] = metrics;
  return report;
}

json cmd_evaluate(const RunConfig& config, const fs::path& out, std::ostream* log) {
  json report = base_report("evaluate", config);
  const EvalPlan& plan = config.evaluate;
  if (!plan.prediction.empty() || !plan.target.empty()) {
    require(!plan.prediction.empty() && !plan.target.empty(), "evaluate needs both a prediction and a target");
    const SpaceTimeField pred = field_from_container(load_container(plan.prediction));
    const SpaceTimeField target = field_from_container(load_container(plan.target));
    report["metrics"] = {{"mse", mse(pred, target)}, {"ssim", field_ssim(pred, target)}};
    return report;
  }

  const AnyParams model = load_model(config, false);
  const std::size_t threads = config.train.threads;
  json metrics;
  const Dataset test_data = load_or_generate(config, Split::Test, log);
  double in_dist = std::numeric_limits<double>::quiet_NaN();
  if (!test_data.records.empty()) {
    const auto test_set = test_data.examples();
    in_dist = model_mse(model, test_set, threads);
    metrics["test"] = {{"mse", in_dist}, {"zero_predictor_mse", zero_predictor_mse(targets_of(test_set))}};
  }
  std::size_t first = config.data.n_train + config.data.n_test;
  for (PhantomKind kind : plan.phantoms) {
    PhantomSpec spec;
    spec.kind = kind;
    if (kind == config.data.phantom.kind) spec = config.data.phantom;
    const std::size_t count = phantom_is_random(kind) ? plan.records_per_kind : 1;
    const Dataset d = generate_records(config, spec, first, count);
    first += count;
    const auto set = d.examples();
    const double m = model_mse(model, set, threads);
    const double zero = zero_predictor_mse(targets_of(set));
    metrics[to_string(kind)] = {{"mse", m},
                                {"zero_predictor_mse", zero},
                                {"zero_ratio", m / zero},
                                {"in_distribution_ratio", m / in_dist},
                                {"records", count}};
    write_image(out / (std::string(to_string(kind)) + "_p0.pgm"), set[0].p0);
    dump_frames(out, std::string(to_string(kind)) + "_prediction", predict(model, set[0].p0, config.time));
    note(log, std::string(to_string(kind)) + " mse " + std::to_string(m));
  }
  report["metrics"] = metrics;
  return report;
}

json cmd_sweep(const RunConfig& config, const fs::path& out, std::ostream* log) {
  json report = base_report("sweep", config);
  require(config.sweep.size() >= 2, "a sweep needs at least two configurations");
  for (const SweepEntry& e : config.sweep) {
    sweep_config(config.fno, e, config.time.nt()).validate_for(config.grid.nx(), config.grid.ny(), config.time.nt());
  }
  const Dataset train_data = load_or_generate(config, Split::Train, log);
  const Dataset test_data = load_or_generate(config, Split::Test, log);
  require(!test_data.records.empty(), "a sweep needs a test set");
  const auto train_set = train_data.examples();
  const auto test_set = test_data.examples();

  fs::create_directories(out);
  std::ofstream csv(out / "sweep.csv");
  if (!csv) throw Error(ErrorCode::Io, "cannot write " + (out / "sweep.csv").string());
  csv << "modes,width,test_mse,inference_seconds\n";
  json rows = json::array();
  for (const SweepEntry& entry : config.sweep) {
    const FnoConfig fno = sweep_config(config.fno, entry, config.time.nt());
    note(log, "sweep modes " + std::to_string(entry.modes) + " width " + std::to_string(entry.width));
    std::vector<EpochStats> history;
    const AnyParams model = train_any(config, fno, train_set, test_set, log, history);
    const double test_mse = model_mse(model, test_set, config.train.threads);

    std::vector<double> times;
    for (const auto& e : test_set) {
      const auto t0 = Clock::now();
      predict(model, e.p0, config.time);
      times.push_back(seconds_since(t0));
    }
    const double seconds = median(times);
    char buf[128];
    std::snprintf(buf, sizeof buf, "%zu,%zu,%.17g,%.6g\n", entry.modes, entry.width, test_mse, seconds);
    csv << buf;
    const std::string stem = "sweep_m" + std::to_string(entry.modes) + "_w" + std::to_string(entry.width);
    save_container(out / (stem + ".paws"), any_checkpoint(model, config, {{"test_mse", test_mse}}));
    write_history_csv(out / (stem + "_history.csv"), history);
    rows.push_back({{"modes", entry.modes},
                    {"width", entry.width},
                    {"fno", to_json(fno)},
                    {"test_mse", test_mse},
                    {"inference_seconds", seconds}});
  }
  report["files"] = {{"table", (out / "sweep.csv").string()}};
  report["metrics"] = {{"rows", rows}};
  return report;
}

json cmd_bench(const RunConfig& config, const fs::path& out, std::ostream* log) {
  json report = base_report("bench", config);
  const BenchPlan& plan = config.bench;
  require(!plan.frame_counts.empty() && plan.repetitions >= 1, "bench needs frame counts and repetitions");
  const AnyParams model = load_model(config, plan.random_weights);
  const Field2D p0 = command_phantom(config);

  json rows = json::array();
  for (std::size_t nt : plan.frame_counts) {
    const TimeGrid tgrid(nt, config.time.dt());
    model_config(model).validate_for(config.grid.nx(), config.grid.ny(), nt);
    // Untimed warm-up so that plan creation is not billed to either side.
    const SpaceTimeField solver_field = kspace_propagate(p0, config.medium, tgrid, config.propagation);
    const SpaceTimeField fno_field = predict(model, p0, tgrid);
    std::vector<double> solver_times;
    std::vector<double> fno_times;
    for (std::size_t r = 0; r < plan.repetitions; ++r) {
      auto t0 = Clock::now();
      kspace_propagate(p0, config.medium, tgrid, config.propagation);
      solver_times.push_back(seconds_since(t0));
      t0 = Clock::now();
      predict(model, p0, tgrid);
      fno_times.push_back(seconds_since(t0));
    }
    const double ts = median(solver_times);
    const double tf = median(fno_times);
    rows.push_back({{"frames", nt},
                    {"solver_seconds", ts},
                    {"fno_seconds", tf},
                    {"speedup", ts / tf},
                    {"solver_hash", hex(field_hash(solver_field))},
                    {"fno_hash", hex(field_hash(fno_field))}});
    char buf[160];
    std::snprintf(buf, sizeof buf, "frames %zu  solver %.4fs  fno %.4fs  ratio %.2f", nt, ts, tf, ts / tf);
    note(log, buf);
  }
  json metrics = {{"rows", rows}, {"repetitions", plan.repetitions}};
  if (rows.size() >= 2) {
    const json& a = rows.front();
    const json& b = rows.back();
    metrics["frame_growth"] = b["frames"].get<double>() / a["frames"].get<double>();
    metrics["solver_growth"] = b["solver_seconds"].get<double>() / a["solver_seconds"].get<double>();
    metrics["fno_growth"] = b["fno_seconds"].get<double>() / a["fno_seconds"].get<double>();
  }
  report["metrics"] = metrics;
  (void)out;
  return report;
}

const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names{"gen-data", "train",    "infer", "simulate",
                                              "reconstruct", "evaluate", "sweep", "bench"};
  return names;
}

json run_command(const std::string& name, const RunConfig& given, const fs::path& out, std::ostream* log) {
  given.validate();
  RunConfig config = given;
  if (config.checkpoint.empty() && (name == "infer" || name == "evaluate" || name == "reconstruct") &&
      fs::exists(out / "model.paws")) {
    config.checkpoint = (out / "model.paws").string();
    note(log, "using checkpoint " + config.checkpoint);
  }
  fs::create_directories(out);
  json report;
  if (name == "gen-data") report = cmd_gen_data(config, out, log);
  else if (name == "train") report = cmd_train(config, out, log);
  else if (name == "infer") report = cmd_infer(config, out, log);
  else if (name == "simulate") report = cmd_simulate(config, out, log);
  else if (name == "reconstruct") report = cmd_reconstruct(config, out, log);
  else if (name == "evaluate") report = cmd_evaluate(config, out, log);
  else if (name == "sweep") report = cmd_sweep(config, out, log);
  else if (name == "bench") report = cmd_bench(config, out, log);
  else throw_invalid("unknown command " + name);
  std::ofstream f(out / (name + ".json"));
  if (!f) throw Error(ErrorCode::Io, "cannot write " + (out / (name + ".json")).string());
  f << report.dump(2) << '\n';
  return report;
}

}  // namespace pawsim
