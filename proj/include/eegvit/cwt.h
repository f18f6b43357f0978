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


#ifndef EEGVIT_CWT_H_
#define EEGVIT_CWT_H_

#include <complex>
#include <cstddef>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "eegvit/tensor.h"

namespace eegvit {

using Complex = std::complex<double>;

inline constexpr double kDefaultOmega0 = 6.0;
inline constexpr double kDefaultFMinHz = 4.0;
inline constexpr double kDefaultFMaxHz = 45.0;
inline constexpr std::size_t kDefaultScales = 224;

// Analytic Morlet mother wavelet pi^(-1/4) exp(i w0 t) exp(-t^2 / 2).
Complex Morlet(double t, double omega0);

// Scale in samples whose Morlet center frequency is f_hz.
double ScaleForFrequency(double f_hz, double fs_hz, double omega0);
double FrequencyForScale(double scale, double fs_hz, double omega0);

// Frequencies are stored high to low, so row 0 of a scaleogram is the highest
// frequency (top of the image).
struct ScaleGrid {
  std::vector<double> frequencies_hz;
  std::vector<double> scales;
  double omega0 = kDefaultOmega0;
  double sample_rate_hz = 128.0;

  std::size_t size() const { return scales.size(); }
};

// n_scales log-spaced frequencies from f_max down to f_min inclusive.
// Throws kBadRange unless 0 < f_min < f_max < fs/2 and n_scales >= 2.
ScaleGrid MakeScaleGrid(double f_min_hz, double f_max_hz, std::size_t n_scales,
                        double fs_hz, double omega0 = kDefaultOmega0);

// Complex CWT coefficients, row-major [n_scales x n_samples].
struct CoefficientMatrix {
  std::size_t n_scales = 0;
  std::size_t n_samples = 0;
  std::vector<Complex> values;

  Complex at(std::size_t s, std::size_t t) const { return values[s * n_samples + t]; }
  std::span<const Complex> row(std::size_t s) const {
    return {values.data() + s * n_samples, n_samples};
  }
};

// Half-width (in samples) of the sampled wavelet at a given scale. Beyond
// eight envelope widths the Gaussian is below 1e-13 of its peak.
std::size_t WaveletHalfWidth(double scale, std::size_t n_samples);

// Precomputed FFT plans and wavelet spectra for one grid and signal length.
// Coefficient (s, tau) is
//   sum_n x[n] * conj(psi((n - tau) / scale_s)) / sqrt(scale_s)
// with the signal zero-padded outside [0, n). Forward() is const and safe to
// call from several threads at once.
class CwtPlan {
 public:
  CwtPlan(const ScaleGrid& grid, std::size_t n_samples);
  ~CwtPlan();
  CwtPlan(const CwtPlan&) = delete;
  CwtPlan& operator=(const CwtPlan&) = delete;

  CoefficientMatrix Forward(std::span<const double> signal) const;

  const ScaleGrid& grid() const { return grid_; }
  std::size_t n_samples() const { return n_samples_; }
  std::size_t fft_size() const { return fft_size_; }

 private:
  struct FftState;

  ScaleGrid grid_;
  std::size_t n_samples_;
  std::size_t max_half_width_;
  std::size_t fft_size_;
  std::vector<Complex> wavelet_spectra_;  // [n_scales x fft_size]
  std::unique_ptr<FftState> fft_;
};

// One-shot convenience over CwtPlan.
CoefficientMatrix CwtForward(std::span<const double> signal, const ScaleGrid& grid);

struct Scaleogram {
  Tensor magnitudes;  // [n_scales x n_samples], entries >= 0
  ScaleGrid grid;
  std::string channel_name;
};

Scaleogram MakeScaleogram(const CoefficientMatrix& coeffs, const ScaleGrid& grid,
                          std::string channel_name);

}  // namespace eegvit

#endif  // EEGVIT_CWT_H_
