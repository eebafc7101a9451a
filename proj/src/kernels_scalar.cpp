// Copyright 2026 The sideobs Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "sideobs/kernels.hpp"

#include <algorithm>

namespace sideobs::kernels {
namespace {

void column_sums_scalar(std::span<const double> weights,
                        std::span<const double> matrix, std::span<double> out) {
  const std::size_t n = out.size();
  std::fill(out.begin(), out.end(), 0.0);
  for (std::size_t j = 0; j < weights.size(); ++j) {
    const double w = weights[j];
    const double* row = matrix.data() + j * n;
    for (std::size_t i = 0; i < n; ++i) out[i] += w * row[i];
  }
}

void mix_feedback_scalar(std::span<const double> s, std::span<const double> loss,
                         std::span<const double> noise, std::span<double> out) {
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = s[i] * loss[i] + (1.0 - s[i]) * noise[i];
  }
}

void scaled_ratio_scalar(std::span<const double> scale,
                         std::span<const double> value,
                         std::span<const double> denom, double gamma,
                         std::span<double> out) {
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = (scale[i] * value[i]) / (denom[i] + gamma);
  }
}

void ratio_scalar(std::span<const double> value, std::span<const double> denom,
                  double gamma, std::span<double> out) {
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = value[i] / (denom[i] + gamma);
  }
}

void threshold_keep_scalar(std::span<const double> m, double eps,
                           std::span<double> out) {
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = m[i] >= eps ? m[i] : 0.0;
  }
}

}  // namespace

const KernelTable& scalar_table() {
  static const KernelTable table{
      "scalar",          column_sums_scalar, mix_feedback_scalar,
      scaled_ratio_scalar, ratio_scalar,      threshold_keep_scalar,
  };
  return table;
}

}  // namespace sideobs::kernels
