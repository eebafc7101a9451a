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

#include <atomic>
#include <cstdlib>
#include <string>

#include "sideobs/error.hpp"
#include "sideobs/kernels.hpp"

namespace sideobs::kernels {
namespace {

const KernelTable* best_available() {
  if (const KernelTable* t = avx2_table()) return t;
  if (const KernelTable* t = neon_table()) return t;
  return &scalar_table();
}

const KernelTable* resolve(KernelChoice choice) {
  switch (choice) {
    case KernelChoice::kAuto:
      return best_available();
    case KernelChoice::kScalar:
      return &scalar_table();
    case KernelChoice::kAvx2:
      return avx2_table();
    case KernelChoice::kNeon:
      return neon_table();
  }
  return nullptr;
}

const KernelTable* initial_table() {
  const char* env = std::getenv("SIDEOBS_KERNELS");
  if (env == nullptr || *env == '\0') return best_available();
  const KernelTable* t = resolve(parse_choice(env));
  if (t == nullptr) {
    fail(ErrorCode::kInvalidParameter,
         std::string("SIDEOBS_KERNELS=") + env + " is not supported here");
  }
  return t;
}

std::atomic<const KernelTable*>& current() {
  static std::atomic<const KernelTable*> table{initial_table()};
  return table;
}

}  // namespace

const KernelTable& active() { return *current().load(std::memory_order_acquire); }

void select(KernelChoice choice) {
  const KernelTable* t = resolve(choice);
  if (t == nullptr) {
    fail(ErrorCode::kInvalidParameter,
         "requested kernel variant is not available on this CPU");
  }
  current().store(t, std::memory_order_release);
}

KernelChoice parse_choice(std::string_view text) {
  if (text == "auto") return KernelChoice::kAuto;
  if (text == "scalar") return KernelChoice::kScalar;
  if (text == "avx2") return KernelChoice::kAvx2;
  if (text == "neon") return KernelChoice::kNeon;
  fail(ErrorCode::kInvalidParameter,
       "unknown kernel variant '" + std::string(text) + "'");
}

}  // namespace sideobs::kernels
