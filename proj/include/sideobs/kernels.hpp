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

#pragma once

// Data-parallel inner loops of the learner and the environment.
//
// Every kernel has a scalar reference implementation and, where the target
// supports it, an AVX2 (x86-64) or NEON (aarch64) variant chosen at runtime.
// The vector variants vectorize across output coordinates only and never
// reorder an accumulation, so with floating-point contraction disabled they
// are bit-identical to the scalar reference. Traces therefore do not depend
// on which kernel set is active.

#include <cstddef>
#include <span>
#include <string_view>

namespace sideobs::kernels {

struct KernelTable {
  std::string_view name;

  // out[i] = sum_j weights[j] * matrix[j*n + i], accumulated in j order.
  void (*column_sums)(std::span<const double> weights,
                      std::span<const double> matrix, std::span<double> out);

  // out[i] = s[i] * loss[i] + (1 - s[i]) * noise[i]
  void (*mix_feedback)(std::span<const double> s, std::span<const double> loss,
                       std::span<const double> noise, std::span<double> out);

  // out[i] = (scale[i] * value[i]) / (denom[i] + gamma)
  void (*scaled_ratio)(std::span<const double> scale,
                       std::span<const double> value,
                       std::span<const double> denom, double gamma,
                       std::span<double> out);

  // out[i] = value[i] / (denom[i] + gamma)
  void (*ratio)(std::span<const double> value, std::span<const double> denom,
                double gamma, std::span<double> out);

  // out[i] = m[i] >= eps ? m[i] : 0
  void (*threshold_keep)(std::span<const double> m, double eps,
                         std::span<double> out);
};

enum class KernelChoice { kAuto, kScalar, kAvx2, kNeon };

const KernelTable& scalar_table();
// nullptr when the variant is not compiled in or the CPU lacks support.
const KernelTable* avx2_table();
const KernelTable* neon_table();

// The table used by the library. Defaults to the best supported variant;
// the SIDEOBS_KERNELS environment variable (scalar|avx2|neon|auto) overrides
// the initial choice.
const KernelTable& active();

// Throws Error(kInvalidParameter) if the requested variant is unavailable.
void select(KernelChoice choice);
KernelChoice parse_choice(std::string_view text);

}  // namespace sideobs::kernels
