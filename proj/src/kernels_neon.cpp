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

#if defined(__aarch64__) || defined(_M_ARM64)
#define SIDEOBS_HAVE_NEON_KERNELS 1
#include <arm_neon.h>
#else
#define SIDEOBS_HAVE_NEON_KERNELS 0
#endif

namespace sideobs::kernels {

#if SIDEOBS_HAVE_NEON_KERNELS
namespace {

// vmulq/vaddq only (never vfmaq) to stay bit-identical with the scalar path.
constexpr std::size_t kLanes = 2;

void column_sums_neon(std::span<const double> weights,
                      std::span<const double> matrix, std::span<double> out) {
  const std::size_t n = out.size();
  const std::size_t vec_end = n - n % kLanes;
  double* dst = out.data();
  for (std::size_t i = 0; i < n; ++i) dst[i] = 0.0;
  for (std::size_t j = 0; j < weights.size(); ++j) {
    const double w = weights[j];
    const float64x2_t wv = vdupq_n_f64(w);
    const double* row = matrix.data() + j * n;
    std::size_t i = 0;
    for (; i < vec_end; i += kLanes) {
      const float64x2_t prod = vmulq_f64(wv, vld1q_f64(row + i));
      vst1q_f64(dst + i, vaddq_f64(vld1q_f64(dst + i), prod));
    }
    for (; i < n; ++i) dst[i] += w * row[i];
  }
}

void mix_feedback_neon(std::span<const double> s, std::span<const double> loss,
                       std::span<const double> noise, std::span<double> out) {
  const std::size_t n = out.size();
  const std::size_t vec_end = n - n % kLanes;
  const float64x2_t one = vdupq_n_f64(1.0);
  std::size_t i = 0;
  for (; i < vec_end; i += kLanes) {
    const float64x2_t sv = vld1q_f64(s.data() + i);
    const float64x2_t signal = vmulq_f64(sv, vld1q_f64(loss.data() + i));
    const float64x2_t junk =
        vmulq_f64(vsubq_f64(one, sv), vld1q_f64(noise.data() + i));
    vst1q_f64(out.data() + i, vaddq_f64(signal, junk));
  }
  for (; i < n; ++i) out[i] = s[i] * loss[i] + (1.0 - s[i]) * noise[i];
}

void scaled_ratio_neon(std::span<const double> scale,
                       std::span<const double> value,
                       std::span<const double> denom, double gamma,
                       std::span<double> out) {
  const std::size_t n = out.size();
  const std::size_t vec_end = n - n % kLanes;
  const float64x2_t gv = vdupq_n_f64(gamma);
  std::size_t i = 0;
  for (; i < vec_end; i += kLanes) {
    const float64x2_t num =
        vmulq_f64(vld1q_f64(scale.data() + i), vld1q_f64(value.data() + i));
    const float64x2_t den = vaddq_f64(vld1q_f64(denom.data() + i), gv);
    vst1q_f64(out.data() + i, vdivq_f64(num, den));
  }
  for (; i < n; ++i) out[i] = (scale[i] * value[i]) / (denom[i] + gamma);
}

void ratio_neon(std::span<const double> value, std::span<const double> denom,
                double gamma, std::span<double> out) {
  const std::size_t n = out.size();
  const std::size_t vec_end = n - n % kLanes;
  const float64x2_t gv = vdupq_n_f64(gamma);
  std::size_t i = 0;
  for (; i < vec_end; i += kLanes) {
    const float64x2_t den = vaddq_f64(vld1q_f64(denom.data() + i), gv);
    vst1q_f64(out.data() + i, vdivq_f64(vld1q_f64(value.data() + i), den));
  }
  for (; i < n; ++i) out[i] = value[i] / (denom[i] + gamma);
}

void threshold_keep_neon(std::span<const double> m, double eps,
                         std::span<double> out) {
  const std::size_t n = out.size();
  const std::size_t vec_end = n - n % kLanes;
  const float64x2_t ev = vdupq_n_f64(eps);
  std::size_t i = 0;
  for (; i < vec_end; i += kLanes) {
    const float64x2_t v = vld1q_f64(m.data() + i);
    const uint64x2_t keep = vcgeq_f64(v, ev);
    vst1q_f64(out.data() + i, vreinterpretq_f64_u64(
                                  vandq_u64(vreinterpretq_u64_f64(v), keep)));
  }
  for (; i < n; ++i) out[i] = m[i] >= eps ? m[i] : 0.0;
}

}  // namespace

const KernelTable* neon_table() {
  // Advanced SIMD is mandatory on AArch64.
  static const KernelTable table{
      "neon",          column_sums_neon, mix_feedback_neon,
      scaled_ratio_neon, ratio_neon,     threshold_keep_neon,
  };
  return &table;
}

#else

const KernelTable* neon_table() { return nullptr; }

#endif

}  // namespace sideobs::kernels
