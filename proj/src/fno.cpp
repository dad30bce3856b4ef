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

#include "pawsim/fno.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "pawsim/error.hpp"
#include "pawsim/kernels.hpp"
#include "pawsim/rng.hpp"

namespace pawsim {

void FnoConfig::validate() const {
  require(modes_x >= 1 && modes_y >= 1 && modes_t >= 1, "FNO mode counts must be at least 1");
  require(width >= 1, "FNO width must be at least 1");
  require(n_layers >= 1, "FNO needs at least one Fourier layer");
  require(in_channels == 4, "FNO input has exactly 4 channels (p0 and three coordinates)");
  require(out_channels >= 1, "FNO needs at least one output channel");
}

void FnoConfig::validate_for(std::size_t nx, std::size_t ny, std::size_t nt) const {
  validate();
  require(2 * modes_x <= nx, "modes_x exceeds nx/2");
  require(2 * modes_y <= ny, "modes_y exceeds ny/2");
  require(2 * modes_t <= nt, "modes_t exceeds nt/2");
}

namespace {

template <class Real>
bool finite(std::span<const Real> v) {
  for (Real x : v) {
    if (!std::isfinite(x)) return false;
  }
  return true;
}

template <class Real>
void check_finite(std::span<const Real> v, const std::string& where) {
  if (!finite(v)) throw Error(ErrorCode::NumericalFailure, "non-finite value in " + where);
}

std::string layer_name(std::size_t l) { return "layer" + std::to_string(l + 1); }

}  // namespace

template <class Real>
FnoParams<Real> FnoParams<Real>::zeros(const FnoConfig& config) {
  config.validate();
  FnoParams p;
  p.config = config;
  const std::size_t w = config.width;
  p.lift_w.assign(w * config.in_channels, Real(0));
  p.lift_b.assign(w, Real(0));
  p.layers.resize(config.n_layers);
  for (auto& layer : p.layers) {
    layer.r.assign(w * w * config.mode_count(), std::complex<Real>(0));
    layer.w.assign(w * w, Real(0));
    layer.b.assign(w, Real(0));
  }
  p.proj_w.assign(config.out_channels * w, Real(0));
  p.proj_b.assign(config.out_channels, Real(0));
  return p;
}

namespace {

template <class R, class P>
std::vector<TensorView<R>> make_views(P& p) {
  const FnoConfig& c = p.config;
  const std::size_t w = c.width;
  std::vector<TensorView<R>> out;
  out.push_back({"lift.w", {w, c.in_channels}, false, std::span<R>(p.lift_w)});
  out.push_back({"lift.b", {w}, false, std::span<R>(p.lift_b)});
  for (std::size_t l = 0; l < p.layers.size(); ++l) {
    auto& layer = p.layers[l];
    const std::string n = layer_name(l);
    out.push_back({n + ".r",
                   {w, w, 2 * c.modes_x, 2 * c.modes_y, c.modes_t},
                   true,
                   std::span<R>(reinterpret_cast<R*>(layer.r.data()), 2 * layer.r.size())});
    out.push_back({n + ".w", {w, w}, false, std::span<R>(layer.w)});
    out.push_back({n + ".b", {w}, false, std::span<R>(layer.b)});
  }
  out.push_back({"proj.w", {c.out_channels, w}, false, std::span<R>(p.proj_w)});
  out.push_back({"proj.b", {c.out_channels}, false, std::span<R>(p.proj_b)});
  return out;
}

}  // namespace

template <class Real>
std::vector<TensorView<Real>> FnoParams<Real>::tensors() {
  return make_views<Real>(*this);
}

template <class Real>
std::vector<TensorView<const Real>> FnoParams<Real>::tensors() const {
  return make_views<const Real>(*this);
}

template <class Real>
std::size_t FnoParams<Real>::scalar_count() const {
  std::size_t n = 0;
  for (const auto& t : tensors()) n += t.reals.size();
  return n;
}

template <class Real>
bool FnoParams<Real>::all_finite() const {
  for (const auto& t : tensors()) {
    if (!finite<Real>(t.reals)) return false;
  }
  return true;
}

template <class Real>
void FnoParams<Real>::set_zero() {
  for (auto& t : tensors()) std::fill(t.reals.begin(), t.reals.end(), Real(0));
}

template <class Real>
void FnoParams<Real>::check_shapes() const {
  config.validate();
  require(layers.size() == config.n_layers, "parameter layer count does not match the configuration");
  for (const auto& t : tensors()) {
    std::size_t n = t.complex ? 2 : 1;
    for (std::size_t d : t.dims) n *= d;
    require(t.reals.size() == n, "parameter tensor " + t.name + " has the wrong size");
  }
}

template <class To, class From>
FnoParams<To> cast_params(const FnoParams<From>& params) {
  params.check_shapes();
  FnoParams<To> out = FnoParams<To>::zeros(params.config);
  auto src = params.tensors();
  auto dst = out.tensors();
  for (std::size_t t = 0; t < src.size(); ++t) {
    std::transform(src[t].reals.begin(), src[t].reals.end(), dst[t].reals.begin(),
                   [](From v) { return static_cast<To>(v); });
  }
  return out;
}

template <class Real>
FnoParams<Real> init_params(const FnoConfig& config, std::uint64_t seed) {
  FnoParams<Real> p = FnoParams<Real>::zeros(config);
  const CounterRng root(seed, 0x666e6f0000000000ULL);
  auto fill_uniform = [](std::vector<Real>& v, double bound, CounterRng rng) {
    for (Real& x : v) x = static_cast<Real>(rng.uniform(-bound, bound));
  };
  fill_uniform(p.lift_w, std::sqrt(1.0 / static_cast<double>(config.in_channels)), root.split(0));
  const double radius = 1.0 / static_cast<double>(config.width * config.width);
  const double bound = std::sqrt(1.0 / static_cast<double>(config.width));
  for (std::size_t l = 0; l < p.layers.size(); ++l) {
    CounterRng rng = root.split(2 * l + 1);
    for (auto& z : p.layers[l].r) {
      const double rr = radius * std::sqrt(rng.uniform());
      const double th = 2.0 * std::numbers::pi * rng.uniform();
      z = std::complex<Real>(static_cast<Real>(rr * std::cos(th)), static_cast<Real>(rr * std::sin(th)));
    }
    fill_uniform(p.layers[l].w, bound, root.split(2 * l + 2));
  }
  fill_uniform(p.proj_w, bound, root.split(1000));
  return p;
}

InputTensor build_input(const Field2D& p0, const TimeGrid& tgrid) {
  require(p0.all_finite(), "initial pressure contains non-finite values");
  const Grid2D& g = p0.grid();
  InputTensor in;
  in.shape = {g.nx(), g.ny(), tgrid.nt()};
  in.channels = 4;
  const std::size_t n = in.shape.points();
  in.values.resize(4 * n);
  const double nx = static_cast<double>(g.nx());
  const double ny = static_cast<double>(g.ny());
  const double nt = static_cast<double>(tgrid.nt());
  for (std::size_t iy = 0; iy < g.ny(); ++iy) {
    for (std::size_t ix = 0; ix < g.nx(); ++ix) {
      const std::size_t base = (iy * g.nx() + ix) * tgrid.nt();
      for (std::size_t m = 0; m < tgrid.nt(); ++m) {
        in.values[base + m] = p0.at(ix, iy);
        in.values[n + base + m] = static_cast<double>(ix) / nx;
        in.values[2 * n + base + m] = static_cast<double>(iy) / ny;
        in.values[3 * n + base + m] = static_cast<double>(m) / nt;
      }
    }
  }
  return in;
}

template <class Real>
std::vector<Real> to_feature_layout(const SpaceTimeField& field) {
  const std::size_t nx = field.grid().nx();
  const std::size_t ny = field.grid().ny();
  const std::size_t nt = field.nt();
  std::vector<Real> out(field.size());
  for (std::size_t iy = 0; iy < ny; ++iy) {
    for (std::size_t ix = 0; ix < nx; ++ix) {
      for (std::size_t m = 0; m < nt; ++m) out[(iy * nx + ix) * nt + m] = static_cast<Real>(field.at(ix, iy, m));
    }
  }
  return out;
}

SpaceTimeField from_feature_layout(std::span<const double> values, const Grid2D& grid, const TimeGrid& tgrid) {
  require(values.size() == grid.size() * tgrid.nt(), "feature array does not match the grid");
  SpaceTimeField out(grid, tgrid);
  const std::size_t nx = grid.nx();
  const std::size_t nt = tgrid.nt();
  for (std::size_t iy = 0; iy < grid.ny(); ++iy) {
    for (std::size_t ix = 0; ix < nx; ++ix) {
      for (std::size_t m = 0; m < nt; ++m) out.at(ix, iy, m) = values[(iy * nx + ix) * nt + m];
    }
  }
  return out;
}

template <class Real>
SpectralConv<Real>::SpectralConv(const FnoConfig& config, const FeatureShape& shape, std::size_t channels)
    : config_(config),
      shape_(shape),
      channels_(channels),
      modes_(config.mode_count()),
      half_(shape.ny * shape.nx * (shape.nt / 2 + 1)),
      fft_({shape.ny, shape.nx, shape.nt}, channels) {
  config.validate_for(shape.nx, shape.ny, shape.nt);
  require(channels >= 1, "spectral convolution needs at least one channel");
  const std::size_t ht = shape.nt / 2 + 1;
  const std::size_t mx = config.modes_x, my = config.modes_y, mt = config.modes_t;
  offsets_.reserve(modes_);
  for (std::size_t kx = 0; kx < 2 * mx; ++kx) {
    const std::size_t ix = kx < mx ? kx : shape.nx - 2 * mx + kx;
    for (std::size_t ky = 0; ky < 2 * my; ++ky) {
      const std::size_t iy = ky < my ? ky : shape.ny - 2 * my + ky;
      for (std::size_t kt = 0; kt < mt; ++kt) offsets_.push_back((iy * shape.nx + ix) * ht + kt);
    }
  }
  const std::size_t plane = shape.nx * shape.ny;
  mirror_.resize(plane);
  for (std::size_t iy = 0; iy < shape.ny; ++iy) {
    for (std::size_t ix = 0; ix < shape.nx; ++ix) {
      mirror_[iy * shape.nx + ix] = ((shape.ny - iy) % shape.ny) * shape.nx + (shape.nx - ix) % shape.nx;
    }
  }
  const Real inv_n = Real(1) / static_cast<Real>(shape.points());
  adjoint_scale_.resize(modes_);
  for (std::size_t k = 0; k < modes_; ++k) adjoint_scale_[k] = (k % mt == 0 ? Real(1) : Real(2)) * inv_n;
  real_.resize(channels * shape.points());
  spec_.resize(channels * half_);
  mixed_.resize(channels * modes_);
  plane_.resize(plane);
}

template <class Real>
void SpectralConv<Real>::analyse(const Real* v, C* gathered) {
  std::copy_n(v, real_.size(), real_.data());
  fft_.forward(real_.data(), spec_.data());
  for (std::size_t c = 0; c < channels_; ++c) {
    const C* s = spec_.data() + c * half_;
    C* g = gathered + c * modes_;
    for (std::size_t k = 0; k < modes_; ++k) g[k] = s[offsets_[k]];
  }
}

template <class Real>
void SpectralConv<Real>::synthesise(const C* gathered, Real* out) {
  std::fill(spec_.begin(), spec_.end(), C(0));
  const std::size_t ht = shape_.nt / 2 + 1;
  for (std::size_t c = 0; c < channels_; ++c) {
    C* s = spec_.data() + c * half_;
    const C* g = gathered + c * modes_;
    for (std::size_t k = 0; k < modes_; ++k) s[offsets_[k]] = g[k];
    // The kt = 0 plane must be Hermitian for the real inverse transform.
    for (std::size_t p = 0; p < plane_.size(); ++p) plane_[p] = s[p * ht];
    for (std::size_t p = 0; p < plane_.size(); ++p) s[p * ht] = Real(0.5) * (plane_[p] + std::conj(plane_[mirror_[p]]));
  }
  fft_.inverse(spec_.data(), real_.data());
  const Real inv_n = Real(1) / static_cast<Real>(shape_.points());
  for (std::size_t i = 0; i < real_.size(); ++i) out[i] = real_[i] * inv_n;
}

template <class Real>
void SpectralConv<Real>::apply(std::span<const C> r, const Real* v, Real* out, C* gathered) {
  require(r.size() == channels_ * channels_ * modes_, "spectral weight size does not match the configuration");
  aligned_vector<C> local;
  if (gathered == nullptr) {
    local.resize(channels_ * modes_);
    gathered = local.data();
  }
  analyse(v, gathered);
  std::fill(mixed_.begin(), mixed_.end(), C(0));
  const auto& k = kernels::table<Real>();
  for (std::size_t i = 0; i < channels_; ++i) {
    for (std::size_t o = 0; o < channels_; ++o) {
      k.cmac(modes_, r.data() + (i * channels_ + o) * modes_, gathered + i * modes_, mixed_.data() + o * modes_);
    }
  }
  synthesise(mixed_.data(), out);
}

template <class Real>
std::vector<Real> spectral_conv(std::span<const Real> v, std::span<const std::complex<Real>> r,
                                const FnoConfig& config, const FeatureShape& shape) {
  require(v.size() == config.width * shape.points(), "spectral_conv input does not match width and shape");
  if (!finite<Real>(v)) throw Error(ErrorCode::NumericalFailure, "non-finite value in spectral_conv input");
  SpectralConv<Real> conv(config, shape, config.width);
  std::vector<Real> out(v.size());
  conv.apply(r, v.data(), out.data());
  return out;
}

namespace {

// u_o += b_o + sum_i W[o][i] v_i, then relu.
template <class Real>
void pointwise_and_relu(const FnoLayer<Real>& layer, std::size_t width, std::size_t n, const Real* v, Real* u) {
  const auto& k = kernels::table<Real>();
  for (std::size_t o = 0; o < width; ++o) {
    Real* uo = u + o * n;
    const Real b = layer.b[o];
    for (std::size_t j = 0; j < n; ++j) uo[j] += b;
    for (std::size_t i = 0; i < width; ++i) k.axpy(n, layer.w[o * width + i], v + i * n, uo);
  }
  k.relu(width * n, u);
}

}  // namespace

template <class Real>
std::vector<Real> fourier_layer(std::span<const Real> v, const FnoLayer<Real>& layer, const FnoConfig& config,
                                const FeatureShape& shape) {
  const std::size_t w = config.width;
  require(layer.w.size() == w * w && layer.b.size() == w, "Fourier layer weights do not match width");
  std::vector<Real> out = spectral_conv<Real>(v, layer.r, config, shape);
  pointwise_and_relu(layer, w, shape.points(), v.data(), out.data());
  return out;
}

template <class Real>
FnoEngine<Real>::FnoEngine(const FnoConfig& config, const FeatureShape& shape)
    : config_(config), shape_(shape), points_(shape.points()), conv_(config, shape, config.width) {
  const std::size_t wn = config.width * points_;
  acts_.assign(config.n_layers + 1, aligned_vector<Real>(wn));
  spectra_.assign(config.n_layers, aligned_vector<std::complex<Real>>(config.width * conv_.modes()));
  grad_a_.resize(wn);
  grad_v_.resize(wn);
  tmp_.resize(wn);
  coef_.resize(config.width * conv_.modes());
  coef_scaled_.resize(coef_.size());
  mixed_.resize(coef_.size());
}

template <class Real>
void FnoEngine<Real>::forward(const FnoParams<Real>& p, const Real* input, Real* out) {
  require(p.config == config_, "parameters were built for a different configuration");
  const auto& k = kernels::table<Real>();
  const std::size_t w = config_.width;
  const std::size_t n = points_;
  const std::size_t cin = config_.in_channels;

  Real* v0 = acts_[0].data();
  for (std::size_t c = 0; c < w; ++c) {
    std::fill_n(v0 + c * n, n, p.lift_b[c]);
    for (std::size_t j = 0; j < cin; ++j) k.axpy(n, p.lift_w[c * cin + j], input + j * n, v0 + c * n);
  }
  check_finite<Real>(acts_[0], "the lifting layer");

  for (std::size_t l = 0; l < config_.n_layers; ++l) {
    const FnoLayer<Real>& layer = p.layers[l];
    conv_.apply(layer.r, acts_[l].data(), acts_[l + 1].data(), spectra_[l].data());
    pointwise_and_relu(layer, w, n, acts_[l].data(), acts_[l + 1].data());
    check_finite<Real>(acts_[l + 1], "Fourier " + layer_name(l));
  }

  const Real* vl = acts_.back().data();
  for (std::size_t q = 0; q < config_.out_channels; ++q) {
    Real* oq = out + q * n;
    std::fill_n(oq, n, p.proj_b[q]);
    for (std::size_t c = 0; c < w; ++c) k.axpy(n, p.proj_w[q * w + c], vl + c * n, oq);
  }
  check_finite<Real>(std::span<const Real>(out, config_.out_channels * n), "the projection layer");
}

template <class Real>
void FnoEngine<Real>::backward(const FnoParams<Real>& p, const Real* input, const Real* g_out,
                               FnoParams<Real>& grads) {
  require(p.config == config_ && grads.config == config_, "parameters were built for a different configuration");
  const auto& k = kernels::table<Real>();
  const std::size_t w = config_.width;
  const std::size_t n = points_;
  const std::size_t cin = config_.in_channels;
  const std::size_t modes = conv_.modes();

  const Real* vl = acts_.back().data();
  std::fill(grad_a_.begin(), grad_a_.end(), Real(0));
  for (std::size_t q = 0; q < config_.out_channels; ++q) {
    const Real* gq = g_out + q * n;
    grads.proj_b[q] += k.sum(n, gq);
    for (std::size_t c = 0; c < w; ++c) {
      grads.proj_w[q * w + c] += k.dot(n, gq, vl + c * n);
      k.axpy(n, p.proj_w[q * w + c], gq, grad_a_.data() + c * n);
    }
  }

  for (std::size_t l = config_.n_layers; l-- > 0;) {
    const FnoLayer<Real>& layer = p.layers[l];
    FnoLayer<Real>& g = grads.layers[l];
    const Real* v = acts_[l].data();
    Real* gu = grad_a_.data();
    k.relu_backward(w * n, acts_[l + 1].data(), gu);

    std::fill(grad_v_.begin(), grad_v_.end(), Real(0));
    for (std::size_t o = 0; o < w; ++o) {
      g.b[o] += k.sum(n, gu + o * n);
      for (std::size_t i = 0; i < w; ++i) {
        g.w[o * w + i] += k.dot(n, gu + o * n, v + i * n);
        k.axpy(n, layer.w[o * w + i], gu + o * n, grad_v_.data() + i * n);
      }
    }

    conv_.analyse(gu, coef_.data());
    for (std::size_t o = 0; o < w; ++o) {
      k.scale_real(modes, conv_.adjoint_scale().data(), coef_.data() + o * modes, coef_scaled_.data() + o * modes);
    }
    std::fill(mixed_.begin(), mixed_.end(), std::complex<Real>(0));
    const std::complex<Real>* vhat = spectra_[l].data();
    for (std::size_t i = 0; i < w; ++i) {
      for (std::size_t o = 0; o < w; ++o) {
        const std::size_t ro = (i * w + o) * modes;
        k.cmul_conj_acc(modes, coef_scaled_.data() + o * modes, vhat + i * modes, g.r.data() + ro);
        k.cmac_conj(modes, layer.r.data() + ro, coef_.data() + o * modes, mixed_.data() + i * modes);
      }
    }
    conv_.synthesise(mixed_.data(), tmp_.data());
    k.axpy(w * n, Real(1), tmp_.data(), grad_v_.data());
    std::swap(grad_a_, grad_v_);
    check_finite<Real>(grad_a_, "the backward pass of Fourier " + layer_name(l));
  }

  for (std::size_t c = 0; c < w; ++c) {
    const Real* gc = grad_a_.data() + c * n;
    grads.lift_b[c] += k.sum(n, gc);
    for (std::size_t j = 0; j < cin; ++j) grads.lift_w[c * cin + j] += k.dot(n, gc, input + j * n);
  }
}

template <class Real>
SpaceTimeField forward(const FnoParams<Real>& params, const InputTensor& input, const Grid2D& grid,
                       const TimeGrid& tgrid) {
  params.check_shapes();
  require(params.config.out_channels == 1, "a space-time field needs a single output channel");
  require(input.shape.nx == grid.nx() && input.shape.ny == grid.ny() && input.shape.nt == tgrid.nt(),
          "input tensor does not match the grid");
  require(input.channels == params.config.in_channels, "input channel count does not match the model");
  FnoEngine<Real> engine(params.config, input.shape);
  std::vector<Real> in(input.values.begin(), input.values.end());
  std::vector<Real> out(input.shape.points());
  engine.forward(params, in.data(), out.data());
  std::vector<double> wide(out.begin(), out.end());
  return from_feature_layout(wide, grid, tgrid);
}

#define PAWSIM_INSTANTIATE(R)                                                                              \
  template struct FnoParams<R>;                                                                            \
  template FnoParams<R> init_params<R>(const FnoConfig&, std::uint64_t);                                   \
  template std::vector<R> to_feature_layout<R>(const SpaceTimeField&);                                     \
  template class SpectralConv<R>;                                                                          \
  template std::vector<R> spectral_conv<R>(std::span<const R>, std::span<const std::complex<R>>,           \
                                           const FnoConfig&, const FeatureShape&);                         \
  template std::vector<R> fourier_layer<R>(std::span<const R>, const FnoLayer<R>&, const FnoConfig&,       \
                                           const FeatureShape&);                                           \
  template class FnoEngine<R>;                                                                             \
  template SpaceTimeField forward<R>(const FnoParams<R>&, const InputTensor&, const Grid2D&, const TimeGrid&);

PAWSIM_INSTANTIATE(float)
PAWSIM_INSTANTIATE(double)
#undef PAWSIM_INSTANTIATE

template FnoParams<float> cast_params<float, double>(const FnoParams<double>&);
template FnoParams<double> cast_params<double, float>(const FnoParams<float>&);
template FnoParams<float> cast_params<float, float>(const FnoParams<float>&);
template FnoParams<double> cast_params<double, double>(const FnoParams<double>&);

}  // namespace pawsim
