// Copyright 2026 The eegvit Authors
// SPDX-License-Identifier: Apache-2.0
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include "eegvit/cwt.h"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numbers>

#include "eegvit/error.h"
#include "eegvit/simd.h"

namespace eegvit {
namespace {

// FFTW planning is not thread-safe; execution of an existing plan is.
std::mutex& PlannerMutex() {
  static std::mutex mu;
  return mu;
}

// Smallest n' >= n with no prime factor above 7.
std::size_t FastFftSize(std::size_t n) {
  for (std::size_t m = std::max<std::size_t>(n, 1);; ++m) {
    std::size_t r = m;
    for (std::size_t p : {2, 3, 5, 7}) {
      while (r % p == 0) r /= p;
    }
    if (r == 1) return m;
  }
}

void CheckFinite(std::span<const double> signal) {
  for (double v : signal) {
    if (!std::isfinite(v)) throw Error(ErrorKind::kNonFinite, "CWT input");
  }
}

// Work buffers for new-array execution must share FFTW's alignment, which
// std::vector does not promise.
class FftBuffer {
 public:
  explicit FftBuffer(std::size_t n) : p_(fftw_alloc_complex(n)) {}
  ~FftBuffer() { fftw_free(p_); }
  FftBuffer(const FftBuffer&) = delete;
  FftBuffer& operator=(const FftBuffer&) = delete;
  Complex* get() { return reinterpret_cast<Complex*>(p_); }
  fftw_complex* raw() { return p_; }

 private:
  fftw_complex* p_;
};

}  // namespace

Complex Morlet(double t, double omega0) {
  const double norm = std::pow(std::numbers::pi, -0.25);
  const double envelope = norm * std::exp(-0.5 * t * t);
  return {envelope * std::cos(omega0 * t), envelope * std::sin(omega0 * t)};
}

double ScaleForFrequency(double f_hz, double fs_hz, double omega0) {
  return omega0 * fs_hz / (2.0 * std::numbers::pi * f_hz);
}

double FrequencyForScale(double scale, double fs_hz, double omega0) {
  return omega0 * fs_hz / (2.0 * std::numbers::pi * scale);
}

ScaleGrid MakeScaleGrid(double f_min_hz, double f_max_hz, std::size_t n_scales,
                        double fs_hz, double omega0) {
  if (!(f_min_hz > 0.0 && f_min_hz < f_max_hz && f_max_hz < fs_hz / 2.0) ||
      n_scales < 2 || !(omega0 > 0.0)) {
    throw Error(ErrorKind::kBadRange,
                "scale grid needs 0 < f_min < f_max < fs/2 and >= 2 scales");
  }
  ScaleGrid grid;
  grid.omega0 = omega0;
  grid.sample_rate_hz = fs_hz;
  grid.frequencies_hz.resize(n_scales);
  grid.scales.resize(n_scales);
  const double log_max = std::log(f_max_hz);
  const double step = (std::log(f_min_hz) - log_max) / static_cast<double>(n_scales - 1);
  for (std::size_t i = 0; i < n_scales; ++i) {
    double f = std::exp(log_max + step * static_cast<double>(i));
    if (i == 0) f = f_max_hz;
    if (i + 1 == n_scales) f = f_min_hz;
    grid.frequencies_hz[i] = f;
    grid.scales[i] = ScaleForFrequency(f, fs_hz, omega0);
  }
  return grid;
}

std::size_t WaveletHalfWidth(double scale, std::size_t n_samples) {
  const auto width = static_cast<std::size_t>(std::ceil(8.0 * scale));
  return std::min(width, n_samples > 0 ? n_samples - 1 : 0);
}

struct CwtPlan::FftState {
  fftw_complex* in = nullptr;
  fftw_complex* out = nullptr;
  fftw_plan forward = nullptr;
  fftw_plan inverse = nullptr;
};

CwtPlan::CwtPlan(const ScaleGrid& grid, std::size_t n_samples)
    : grid_(grid), n_samples_(n_samples), fft_(std::make_unique<FftState>()) {
  if (n_samples < 2) throw Error(ErrorKind::kBadSize, "CWT needs >= 2 samples");
  if (grid.size() == 0) throw Error(ErrorKind::kBadRange, "empty scale grid");

  max_half_width_ = 0;
  for (double s : grid_.scales) {
    max_half_width_ = std::max(max_half_width_, WaveletHalfWidth(s, n_samples));
  }
  fft_size_ = FastFftSize(n_samples + 2 * max_half_width_);
  const int n = static_cast<int>(fft_size_);

  {
    std::lock_guard<std::mutex> lock(PlannerMutex());
    fft_->in = fftw_alloc_complex(fft_size_);
    fft_->out = fftw_alloc_complex(fft_size_);
    // FFTW_ESTIMATE keeps plan choice, and therefore rounding, reproducible.
    fft_->forward = fftw_plan_dft_1d(n, fft_->in, fft_->out, FFTW_FORWARD,
                                     FFTW_ESTIMATE);
    fft_->inverse = fftw_plan_dft_1d(n, fft_->in, fft_->out, FFTW_BACKWARD,
                                     FFTW_ESTIMATE);
  }

  // Convolution kernel h[m] = psi(m / s) / sqrt(s), stored with m = 0 at
  // index max_half_width_ so every scale shares one output offset.
  wavelet_spectra_.assign(grid_.size() * fft_size_, Complex{});
  FftBuffer taps(fft_size_), taps_spectrum(fft_size_);
  for (std::size_t si = 0; si < grid_.size(); ++si) {
    const double s = grid_.scales[si];
    const double inv_sqrt_s = 1.0 / std::sqrt(s);
    const auto half = static_cast<std::ptrdiff_t>(WaveletHalfWidth(s, n_samples));
    std::fill(taps.get(), taps.get() + fft_size_, Complex{});
    for (std::ptrdiff_t m = -half; m <= half; ++m) {
      taps.get()[static_cast<std::size_t>(static_cast<std::ptrdiff_t>(max_half_width_) + m)] =
          Morlet(static_cast<double>(m) / s, grid_.omega0) * inv_sqrt_s;
    }
    fftw_execute_dft(fft_->forward, taps.raw(), taps_spectrum.raw());
    std::copy(taps_spectrum.get(), taps_spectrum.get() + fft_size_,
              wavelet_spectra_.begin() + static_cast<std::ptrdiff_t>(si * fft_size_));
  }
}

CwtPlan::~CwtPlan() {
  std::lock_guard<std::mutex> lock(PlannerMutex());
  fftw_destroy_plan(fft_->forward);
  fftw_destroy_plan(fft_->inverse);
  fftw_free(fft_->in);
  fftw_free(fft_->out);
}

CoefficientMatrix CwtPlan::Forward(std::span<const double> signal) const {
  if (signal.size() != n_samples_) {
    throw Error(ErrorKind::kBadSize, "signal length does not match CWT plan");
  }
  CheckFinite(signal);

  FftBuffer padded(fft_size_), spectrum(fft_size_), product(fft_size_), result(fft_size_);

  std::fill(padded.get(), padded.get() + fft_size_, Complex{});
  for (std::size_t i = 0; i < n_samples_; ++i) padded.get()[i] = signal[i];
  fftw_execute_dft(fft_->forward, padded.raw(), spectrum.raw());

  const simd::KernelTable& kernels = simd::Active();
  const double inv_n = 1.0 / static_cast<double>(fft_size_);
  CoefficientMatrix out;
  out.n_scales = grid_.size();
  out.n_samples = n_samples_;
  out.values.resize(out.n_scales * n_samples_);
  for (std::size_t si = 0; si < grid_.size(); ++si) {
    kernels.cmul(spectrum.get(), &wavelet_spectra_[si * fft_size_], product.get(),
                 fft_size_);
    fftw_execute_dft(fft_->inverse, product.raw(), result.raw());
    Complex* row = &out.values[si * n_samples_];
    for (std::size_t t = 0; t < n_samples_; ++t) {
      row[t] = result.get()[t + max_half_width_] * inv_n;
    }
  }
  return out;
}

CoefficientMatrix CwtForward(std::span<const double> signal, const ScaleGrid& grid) {
  CwtPlan plan(grid, signal.size());
  return plan.Forward(signal);
}

Scaleogram MakeScaleogram(const CoefficientMatrix& coeffs, const ScaleGrid& grid,
                          std::string channel_name) {
  Scaleogram sg;
  sg.grid = grid;
  sg.channel_name = std::move(channel_name);
  sg.magnitudes = Tensor::Matrix(coeffs.n_scales, coeffs.n_samples);
  for (const Complex& c : coeffs.values) {
    if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) {
      throw Error(ErrorKind::kNonFinite, "CWT coefficient");
    }
  }
  simd::Active().cabs(coeffs.values.data(), sg.magnitudes.data.data(),
                      coeffs.values.size());
  return sg;
}

}  // namespace eegvit
