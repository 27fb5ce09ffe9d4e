// Copyright 2026 The symtest authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "symtest/parallel.hpp"

#include <algorithm>
#include <cstdlib>
#include <string>

namespace symtest {

int worker_thread_count() {
  int hw = static_cast<int>(std::thread::hardware_concurrency());
  if (hw < 1) hw = 1;
  if (const char* env = std::getenv("SYMTEST_THREADS")) {
    try {
      const int cap = std::stoi(env);
      if (cap >= 1) hw = std::min(hw, cap);
    } catch (...) {
      // ignore unparsable values, keep hardware default
    }
  }
  return hw;
}

int accumulator_block_count(std::size_t bytes_per_accumulator) {
  constexpr std::size_t kBudget = 512ull << 20;  // total partials <= 512 MB
  if (bytes_per_accumulator == 0) return 64;
  const std::size_t fit = kBudget / bytes_per_accumulator;
  return static_cast<int>(std::clamp<std::size_t>(fit, 1, 64));
}

}  // namespace symtest
