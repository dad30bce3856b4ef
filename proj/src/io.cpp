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

#include "pawsim/io.hpp"

#include <cstdio>

#include "pawsim/error.hpp"
#include "pawsim/rng.hpp"

namespace pawsim {

using nlohmann::json;

const char* to_string(Split s) noexcept { return s == Split::Train ? "train" : "test"; }

std::vector<Example> Dataset::examples() const {
  std::vector<Example> out;
  out.reserve(records.size());
  for (const auto& r : records) out.push_back({r.p0, r.target});
  return out;
}

std::uint64_t content_hash(const Field2D& p0, const SpaceTimeField& target) {
  std::uint64_t h = fnv1a64(p0.values().data(), p0.values().size_bytes());
  return fnv1a64(target.values().data(), target.values().size_bytes(), h);
}

std::uint64_t record_seed(std::uint64_t seed, std::size_t index) { return (seed << 20) + index; }

SpaceTimeField propagate(const RunConfig& config, const Field2D& p0) {
  return config.method == SolverMethod::Exact ? exact_propagate(p0, config.medium, config.time, config.propagation)
                                              : kspace_propagate(p0, config.medium, config.time, config.propagation);
}

namespace {

json dataset_metadata(const RunConfig& config) {
  return {{"kind", "dataset"},
          {"grid", to_json(config.grid)},
          {"time", to_json(config.time)},
          {"medium", to_json(config.medium)},
          {"solver", config.method == SolverMethod::Exact ? "exact" : "kspace"},
          {"pad_factor", config.propagation.pad_factor},
          {"smooth", config.propagation.smooth},
          {"input_encoding", "p0,x,y,t"},
          {"config", to_json(config)}};
}

std::string record_name(std::size_t i, const char* part) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "record%05zu.%s", i, part);
  return buf;
}

std::vector<std::uint32_t> dims32(std::initializer_list<std::size_t> dims) {
  std::vector<std::uint32_t> out;
  for (std::size_t d : dims) out.push_back(static_cast<std::uint32_t>(d));
  return out;
}

}  // namespace

Dataset generate_records(const RunConfig& config, const PhantomSpec& base, std::size_t first_index,
                         std::size_t count) {
  Dataset d;
  d.metadata = dataset_metadata(config);
  for (std::size_t i = 0; i < count; ++i) {
    PhantomSpec spec = base;
    spec.seed = record_seed(config.seed, first_index + i);
    DatasetRecord r{make_phantom(spec, config.grid), SpaceTimeField(config.grid, config.time), spec, 0};
    r.target = propagate(config, r.p0);
    r.hash = content_hash(r.p0, r.target);
    d.records.push_back(std::move(r));
  }
  return d;
}

Dataset generate_dataset(const RunConfig& config, Split split) {
  const std::size_t first = split == Split::Train ? 0 : config.data.n_train;
  const std::size_t count = split == Split::Train ? config.data.n_train : config.data.n_test;
  Dataset d = generate_records(config, config.data.phantom, first, count);
  d.metadata["split"] = to_string(split);
  return d;
}

Container dataset_to_container(const Dataset& dataset) {
  Container c;
  c.metadata = dataset.metadata;
  json records = json::array();
  for (std::size_t i = 0; i < dataset.records.size(); ++i) {
    const DatasetRecord& r = dataset.records[i];
    const Grid2D& g = r.p0.grid();
    records.push_back({{"phantom", to_json(r.phantom)}, {"seed", r.phantom.seed}, {"hash", r.hash}});
    c.tensors.push_back(Tensor::from_f64(record_name(i, "p0"), dims32({g.ny(), g.nx()}), r.p0.values()));
    c.tensors.push_back(
        Tensor::from_f64(record_name(i, "target"), dims32({r.target.nt(), g.ny(), g.nx()}), r.target.values()));
  }
  c.metadata["records"] = records;
  return c;
}

Dataset dataset_from_container(const Container& c) {
  require(c.metadata.value("kind", "") == "dataset", "container is not a dataset");
  Dataset d;
  d.metadata = c.metadata;
  d.metadata.erase("records");
  const Grid2D grid = grid_from_json(c.metadata.at("grid"));
  const TimeGrid time = time_from_json(c.metadata.at("time"));
  const json& records = c.metadata.at("records");
  for (std::size_t i = 0; i < records.size(); ++i) {
    const Tensor& p0 = c.at(record_name(i, "p0"));
    const Tensor& target = c.at(record_name(i, "target"));
    require(p0.dims == dims32({grid.ny(), grid.nx()}), "record p0 shape does not match the grid");
    require(target.dims == dims32({time.nt(), grid.ny(), grid.nx()}), "record target shape does not match the grid");
    DatasetRecord r{Field2D(grid, p0.to_f64()), SpaceTimeField(grid, time, target.to_f64()),
                    phantom_from_json(records[i].at("phantom")), records[i].at("hash").get<std::uint64_t>()};
    d.records.push_back(std::move(r));
  }
  return d;
}

void save_dataset(const std::filesystem::path& path, const Dataset& dataset) {
  save_container(path, dataset_to_container(dataset));
}

Dataset load_dataset(const std::filesystem::path& path) { return dataset_from_container(load_container(path)); }

template <class Real>
Container checkpoint_to_container(const FnoParams<Real>& params, json extra) {
  params.check_shapes();
  Container c;
  c.metadata = std::move(extra);
  c.metadata["kind"] = "checkpoint";
  c.metadata["fno"] = to_json(params.config);
  c.metadata["precision"] = std::is_same_v<Real, float> ? "f32" : "f64";
  for (const auto& t : params.tensors()) {
    std::vector<std::uint32_t> dims(t.dims.begin(), t.dims.end());
    if (t.complex) {
      std::span<const std::complex<Real>> z(reinterpret_cast<const std::complex<Real>*>(t.reals.data()),
                                            t.reals.size() / 2);
      if constexpr (std::is_same_v<Real, float>) {
        c.tensors.push_back(Tensor::from_c64(t.name, dims, z));
      } else {
        c.tensors.push_back(Tensor::from_c128(t.name, dims, z));
      }
    } else if constexpr (std::is_same_v<Real, float>) {
      c.tensors.push_back(Tensor::from_f32(t.name, dims, t.reals));
    } else {
      c.tensors.push_back(Tensor::from_f64(t.name, dims, t.reals));
    }
  }
  return c;
}

Precision checkpoint_precision(const Container& c) {
  require(c.metadata.value("kind", "") == "checkpoint", "container is not a model checkpoint");
  return precision_from_string(c.metadata.at("precision").get<std::string>());
}

template <class Real>
FnoParams<Real> params_from_container(const Container& c) {
  checkpoint_precision(c);
  const FnoConfig config = fno_config_from_json(c.metadata.at("fno"));
  FnoParams<Real> p = FnoParams<Real>::zeros(config);
  for (auto& t : p.tensors()) {
    const Tensor& src = c.at(t.name);
    require(std::vector<std::size_t>(src.dims.begin(), src.dims.end()) == t.dims,
            "checkpoint tensor " + t.name + " has the wrong shape");
    if (t.complex) {
      const auto z = src.to_c128();
      for (std::size_t i = 0; i < z.size(); ++i) {
        t.reals[2 * i] = static_cast<Real>(z[i].real());
        t.reals[2 * i + 1] = static_cast<Real>(z[i].imag());
      }
    } else {
      const auto v = src.to_f64();
      for (std::size_t i = 0; i < v.size(); ++i) t.reals[i] = static_cast<Real>(v[i]);
    }
  }
  return p;
}

template Container checkpoint_to_container<float>(const FnoParams<float>&, json);
template Container checkpoint_to_container<double>(const FnoParams<double>&, json);
template FnoParams<float> params_from_container<float>(const Container&);
template FnoParams<double> params_from_container<double>(const Container&);

Container field_to_container(const SpaceTimeField& field, json extra) {
  Container c;
  c.metadata = std::move(extra);
  c.metadata["kind"] = "field";
  c.metadata["grid"] = to_json(field.grid());
  c.metadata["time"] = to_json(field.tgrid());
  c.tensors.push_back(
      Tensor::from_f64("field", dims32({field.nt(), field.grid().ny(), field.grid().nx()}), field.values()));
  return c;
}

SpaceTimeField field_from_container(const Container& c) {
  require(c.metadata.value("kind", "") == "field", "container is not a space-time field");
  const Grid2D grid = grid_from_json(c.metadata.at("grid"));
  const TimeGrid time = time_from_json(c.metadata.at("time"));
  const Tensor& t = c.at("field");
  require(t.dims == dims32({time.nt(), grid.ny(), grid.nx()}), "field tensor does not match its grid");
  return SpaceTimeField(grid, time, t.to_f64());
}

Container image_to_container(const Field2D& field, json extra) {
  Container c;
  c.metadata = std::move(extra);
  c.metadata["kind"] = "image";
  c.metadata["grid"] = to_json(field.grid());
  c.tensors.push_back(Tensor::from_f64("image", dims32({field.grid().ny(), field.grid().nx()}), field.values()));
  return c;
}

Field2D image_from_container(const Container& c) {
  require(c.metadata.value("kind", "") == "image", "container is not an image");
  const Grid2D grid = grid_from_json(c.metadata.at("grid"));
  const Tensor& t = c.at("image");
  require(t.dims == dims32({grid.ny(), grid.nx()}), "image tensor does not match its grid");
  return Field2D(grid, t.to_f64());
}

}  // namespace pawsim
