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


#ifndef EEGVIT_RASTER_H_
#define EEGVIT_RASTER_H_

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "eegvit/cwt.h"
#include "eegvit/tensor.h"

namespace eegvit {

inline constexpr std::size_t kDefaultImageSize = 224;

struct RasterImage {
  std::size_t height = 0;
  std::size_t width = 0;
  std::vector<double> pixels;  // row-major, values in [0, 1]

  double at(std::size_t r, std::size_t c) const { return pixels[r * width + c]; }
};

// Linear map of [min, max] onto [0, 1]; a constant input maps to 0.5.
std::vector<double> MinMaxNormalize(std::span<const double> values);

// Bilinear resampling with half-pixel centers:
//   src = (dst + 0.5) * src_size / dst_size - 0.5, clamped to [0, src_size - 1].
std::vector<double> ResizeBilinear(std::span<const double> src, std::size_t src_h,
                                   std::size_t src_w, std::size_t dst_h,
                                   std::size_t dst_w);

// Min-max normalizes the scaleogram magnitudes, then resizes to height x width.
RasterImage Rasterize(const Scaleogram& sg, std::size_t height = kDefaultImageSize,
                      std::size_t width = kDefaultImageSize);

// 8-bit binary PGM (P5, maxval 255), value = round(pixel * 255).
std::vector<std::uint8_t> EncodePgm(const RasterImage& image);

}  // namespace eegvit

#endif  // EEGVIT_RASTER_H_
