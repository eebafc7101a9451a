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

#if defined(__x86_64__) || defined(_M_X64)
#define SIDEOBS_HAVE_AVX2_KERNELS 1
#include <immintrin.h>
#else
#define SIDEOBS_HAVE_AVX2_KERNELS 0
#endif

namespace sideobs::kernels {

#if SIDEOBS_HAVE_AVX2_KERNELS
namespace {

// Only mul/add/sub/div/cmp are used: no FMA, so each lane rounds exactly like
// the scalar reference.
#define SIDEOBS_AVX2 __attribute__((target("avx2")))

constexpr std::size_t kLanes = 4;

SIDEOBS_AVX2 void column_sums_avx2(std::span<const double> weights,
                                   std::span<const double> matrix,
                                   std::span<double> out) {
  const std::size_t n = out.size();
  const std::size_t vec_end = n - n % kLanes;
  double* dst = out.data();
  for (std::size_t i = 0; i < n; ++i) dst[i] = 0.0;
  for (std::size_t j = 0; j < weights.size(); ++j) {
    const double w = weights[j];
    const __m256d wv = _mm256_set1_pd(w);
    const double* row = matrix.data() + j * n;
    std::size_t i = 0;
    for (; i < vec_end; i += kLanes) {
      const __m256d prod = _mm256_mul_pd(wv, _mm256_loadu_pd(row + i));
      _mm256_storeu_pd(dst + i, _mm256_add_pd(_mm256_loadu_pd(dst + i), prod));
    }
    for (; i < n; ++i) dst[i] += w * row[i];
  }
}

SIDEOBS_AVX2 void mix_feedback_avx2(std::span<const double> s,
                                    std::span<const double> loss,
                                    std::span<const double> noise,
                                    std::span<double> out) {
  const std::size_t n = out.size();
  const std::size_t vec_end = n - n % kLanes;
  const __m256d one = _mm256_set1_pd(1.0);
  std::size_t i = 0;
  for (; i < vec_end; i += kLanes) {
    const __m256d sv = _mm256_loadu_pd(s.data() + i);
    const __m256d signal = _mm256_mul_pd(sv, _mm256_loadu_pd(loss.data() + i));
    const __m256d junk = _mm256_mul_pd(_mm256_sub_pd(one, sv),
                                       _mm256_loadu_pd(noise.data() + i));
    _mm256_storeu_pd(out.data() + i, _mm256_add_pd(signal, junk));
  }
  for (; i < n; ++i) out[i] = s[i] * loss[i] + (1.0 - s[i]) * noise[i];
}

SIDEOBS_AVX2 void scaled_ratio_avx2(std::span<const double> scale,
                                    std::span<const double> value,
                                    std::span<const double> denom, double gamma,
                                    std::span<double> out) {
  const std::size_t n = out.size();
  const std::size_t vec_end = n - n % kLanes;
  const __m256d gv = _mm256_set1_pd(gamma);
  std::size_t i = 0;
  for (; i < vec_end; i += kLanes) {
    const __m256d num = _mm256_mul_pd(_mm256_loadu_pd(scale.data() + i),
                                      _mm256_loadu_pd(value.data() + i));
    const __m256d den = _mm256_add_pd(_mm256_loadu_pd(denom.data() + i), gv);
    _mm256_storeu_pd(out.data() + i, _mm256_div_pd(num, den));
  }
  for (; i < n; ++i) out[i] = (scale[i] * value[i]) / (denom[i] + gamma);
}

SIDEOBS_AVX2 void ratio_avx2(std::span<const double> value,
                             std::span<const double> denom, double gamma,
                             std::span<double> out) {
  const std::size_t n = out.size();
  const std::size_t vec_end = n - n % kLanes;
  const __m256d gv = _mm256_set1_pd(gamma);
  std::size_t i = 0;
  for (; i < vec_end; i += kLanes) {
    const __m256d den = _mm256_add_pd(_mm256_loadu_pd(denom.data() + i), gv);
    _mm256_storeu_pd(out.data() + i,
                     _mm256_div_pd(_mm256_loadu_pd(value.data() + i), den));
  }
  for (; i < n; ++i) out[i] = value[i] / (denom[i] + gamma);
}

SIDEOBS_AVX2 void threshold_keep_avx2(std::span<const double> m, double eps,
                                      std::span<double> out) {
  const std::size_t n = out.size();
  const std::size_t vec_end = n - n % kLanes;
  const __m256d ev = _mm256_set1_pd(eps);
  std::size_t i = 0;
  for (; i < vec_end; i += kLanes) {
    const __m256d v = _mm256_loadu_pd(m.data() + i);
    const __m256d keep = _mm256_cmp_pd(v, ev, _CMP_GE_OQ);
    _mm256_storeu_pd(out.data() + i, _mm256_and_pd(v, keep));
  }
  for (; i < n; ++i) out[i] = m[i] >= eps ? m[i] : 0.0;
}

#undef SIDEOBS_AVX2

}  // namespace

const KernelTable* avx2_table() {
  static const KernelTable table{
      "avx2",          column_sums_avx2, mix_feedback_avx2,
      scaled_ratio_avx2, ratio_avx2,     threshold_keep_avx2,
  };
  static const bool supported = __builtin_cpu_supports("avx2");
  return supported ? &table : nullptr;
}

#else

const KernelTable* avx2_table() { return nullptr; }

#endif

}  // namespace sideobs::kernels
