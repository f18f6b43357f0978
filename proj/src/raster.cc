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


#include "eegvit/raster.h"

#include <algorithm>
#include <cmath>

#include "eegvit/error.h"

namespace eegvit {

std::vector<double> MinMaxNormalize(std::span<const double> values) {
  std::vector<double> out(values.size(), 0.5);
  if (values.empty()) return out;
  const auto [lo_it, hi_it] = std::minmax_element(values.begin(), values.end());
  const double lo = *lo_it, hi = *hi_it;
  if (!(hi > lo)) return out;
  const double inv = 1.0 / (hi - lo);
  for (std::size_t i = 0; i < values.size(); ++i) {
    out[i] = std::clamp((values[i] - lo) * inv, 0.0, 1.0);
  }
  return out;
}

namespace {

struct Tap {
  std::size_t i0, i1;
  double frac;
};

std::vector<Tap> ResampleTaps(std::size_t src, std::size_t dst) {
  std::vector<Tap> taps(dst);
  const double ratio = static_cast<double>(src) / static_cast<double>(dst);
  const double hi = static_cast<double>(src - 1);
  for (std::size_t d = 0; d < dst; ++d) {
    const double x = std::clamp((static_cast<double>(d) + 0.5) * ratio - 0.5, 0.0, hi);
    const auto i0 = static_cast<std::size_t>(std::floor(x));
    taps[d] = {i0, std::min(i0 + 1, src - 1), x - static_cast<double>(i0)};
  }
  return taps;
}

}  // namespace

std::vector<double> ResizeBilinear(std::span<const double> src, std::size_t src_h,
                                   std::size_t src_w, std::size_t dst_h,
                                   std::size_t dst_w) {
  if (src_h < 1 || src_w < 1 || dst_h < 1 || dst_w < 1) {
    throw Error(ErrorKind::kBadSize, "resize dimensions must be >= 1");
  }
  if (src.size() != src_h * src_w) {
    throw Error(ErrorKind::kBadSize, "source buffer does not match dimensions");
  }
  const std::vector<Tap> rows = ResampleTaps(src_h, dst_h);
  const std::vector<Tap> cols = ResampleTaps(src_w, dst_w);
  std::vector<double> out(dst_h * dst_w);
  for (std::size_t r = 0; r < dst_h; ++r) {
    const Tap& ty = rows[r];
    const double* top = src.data() + ty.i0 * src_w;
    const double* bottom = src.data() + ty.i1 * src_w;
    for (std::size_t c = 0; c < dst_w; ++c) {
      const Tap& tx = cols[c];
      const double upper = top[tx.i0] + tx.frac * (top[tx.i1] - top[tx.i0]);
      const double lower = bottom[tx.i0] + tx.frac * (bottom[tx.i1] - bottom[tx.i0]);
      out[r * dst_w + c] = upper + ty.frac * (lower - upper);
    }
  }
  return out;
}

RasterImage Rasterize(const Scaleogram& sg, std::size_t height, std::size_t width) {
  if (height < 1 || width < 1) {
    throw Error(ErrorKind::kBadSize, "raster height/width must be >= 1");
  }
  const Tensor& m = sg.magnitudes;
  if (m.size() == 0) throw Error(ErrorKind::kBadSize, "empty scaleogram");
  const std::vector<double> unit = MinMaxNormalize(m.span());
  RasterImage image;
  image.height = height;
  image.width = width;
  image.pixels = ResizeBilinear(unit, m.rows(), m.cols(), height, width);
  for (double& p : image.pixels) p = std::clamp(p, 0.0, 1.0);
  return image;
}

std::vector<std::uint8_t> EncodePgm(const RasterImage& image) {
  const std::string header = "P5\n" + std::to_string(image.width) + " " +
                             std::to_string(image.height) + "\n255\n";
  std::vector<std::uint8_t> out(header.begin(), header.end());
  out.reserve(out.size() + image.pixels.size());
  for (double p : image.pixels) {
    out.push_back(static_cast<std::uint8_t>(std::lround(std::clamp(p, 0.0, 1.0) * 255.0)));
  }
  return out;
}

}  // namespace eegvit
