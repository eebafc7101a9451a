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

#include <cstring>
#include <vector>

#include "doctest.h"
#include "sideobs/kernels.hpp"
#include "sideobs/rng.hpp"

using namespace sideobs;
namespace k = sideobs::kernels;

namespace {

std::vector<const k::KernelTable*> variants() {
  std::vector<const k::KernelTable*> out{&k::scalar_table()};
  if (const auto* t = k::avx2_table()) out.push_back(t);
  if (const auto* t = k::neon_table()) out.push_back(t);
  return out;
}

std::vector<double> random_vec(std::size_t n, Rng& rng, double lo, double hi) {
  std::vector<double> v(n);
  for (double& x : v) x = lo + (hi - lo) * uniform01(rng);
  return v;
}

bool bit_equal(const std::vector<double>& a, const std::vector<double>& b) {
  return a.size() == b.size() && std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0;
}

}  // namespace

TEST_CASE("kernel variants are bit-identical to the scalar reference") {
  const k::KernelTable& ref = k::scalar_table();
  Rng rng(99);
  // Sizes straddle the vector widths so remainder loops are exercised.
  for (std::size_t n : {1, 2, 3, 4, 5, 7, 8, 9, 15, 16, 17, 25, 33, 64, 101}) {
    const auto w = random_vec(n, rng, 0.0, 1.0);
    const auto m = random_vec(n * n, rng, 0.0, 1.0);
    const auto s = random_vec(n, rng, 0.0, 1.0);
    const auto loss = random_vec(n, rng, 0.0, 1.0);
    const auto noise = random_vec(n, rng, -1.0, 1.0);
    const double gamma = 0.1 * uniform01(rng);

    std::vector<double> cs_ref(n), mix_ref(n), sr_ref(n), r_ref(n), th_ref(n * n);
    ref.column_sums(w, m, cs_ref);
    ref.mix_feedback(s, loss, noise, mix_ref);
    ref.scaled_ratio(s, noise, cs_ref, gamma, sr_ref);
    ref.ratio(w, cs_ref, gamma, r_ref);
    ref.threshold_keep(m, 0.5, th_ref);

    for (const k::KernelTable* t : variants()) {
      CAPTURE(t->name);
      CAPTURE(n);
      std::vector<double> cs(n), mix(n), sr(n), r(n), th(n * n);
      t->column_sums(w, m, cs);
      t->mix_feedback(s, loss, noise, mix);
      t->scaled_ratio(s, noise, cs_ref, gamma, sr);
      t->ratio(w, cs_ref, gamma, r);
      t->threshold_keep(m, 0.5, th);
      CHECK(bit_equal(cs, cs_ref));
      CHECK(bit_equal(mix, mix_ref));
      CHECK(bit_equal(sr, sr_ref));
      CHECK(bit_equal(r, r_ref));
      CHECK(bit_equal(th, th_ref));
    }
  }
}

TEST_CASE("scalar kernels compute the documented formulas") {
  const k::KernelTable& t = k::scalar_table();
  const std::vector<double> w{0.25, 0.75};
  const std::vector<double> m{1.0, 0.5, 0.2, 1.0};
  std::vector<double> out(2);
  t.column_sums(w, m, out);
  CHECK(out[0] == doctest::Approx(0.25 + 0.75 * 0.2));
  CHECK(out[1] == doctest::Approx(0.25 * 0.5 + 0.75));
  t.mix_feedback(std::vector<double>{0.5, 1.0}, std::vector<double>{1.0, 0.3},
                 std::vector<double>{-0.5, 9.0}, out);
  CHECK(out[0] == 0.25);
  CHECK(out[1] == 0.3);
  std::vector<double> th(4);
  t.threshold_keep(m, 0.5, th);
  CHECK(th == std::vector<double>{1.0, 0.5, 0.0, 1.0});
}

TEST_CASE("kernel selection") {
  CHECK(k::parse_choice("scalar") == k::KernelChoice::kScalar);
  CHECK(k::parse_choice("auto") == k::KernelChoice::kAuto);
  CHECK_THROWS(k::parse_choice("sse9"));
  const std::string_view before = k::active().name;
  k::select(k::KernelChoice::kScalar);
  CHECK(k::active().name == "scalar");
  k::select(k::KernelChoice::kAuto);
  CHECK_FALSE(k::active().name.empty());
  k::select(k::parse_choice(before));
}
