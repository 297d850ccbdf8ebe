#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <vector>

namespace masscut::test {

constexpr std::uint64_t kNone = std::numeric_limits<std::uint64_t>::max();

// Fixed-point closure of the base facts under both reductions inside a box
// of h <= h_max, m <= m_max. Sweeps in plain forward order until nothing
// changes, so it shares no ordering assumptions with the search.
struct Closure {
  std::uint64_t h_max, m_max;
  std::vector<std::vector<std::uint64_t>> d;

  Closure(std::uint64_t hm, std::uint64_t mm) : h_max(hm), m_max(mm), d(hm + 1, std::vector<std::uint64_t>(mm + 1, kNone)) {
    auto seed = [&](std::uint64_t h, std::uint64_t m, std::uint64_t v) {
      if (h <= h_max && m <= m_max) d[h][m] = std::min(d[h][m], v);
    };
    for (std::uint64_t m = 1; m <= m_max; ++m) seed(1, m, m);
    seed(1, 3, 3);
    seed(2, 1, 3);
    const std::uint64_t c[] = {0, 2, 3, 5, 9, 15};
    for (std::uint64_t h = 1; h <= 5; ++h) {
      for (std::uint64_t p = 1; 2 * p <= m_max; p *= 2) seed(h, 2 * p, c[h] * p);
    }
    seed(2, 5, 8);

    for (bool changed = true; changed;) {
      changed = false;
      for (std::uint64_t h = 1; h <= h_max; ++h) {
        for (std::uint64_t m = 1; m <= m_max; ++m) {
          std::uint64_t best = d[h][m];
          if (h >= 2 && 2 * m <= m_max && d[h - 1][2 * m] != kNone) best = std::min(best, d[h - 1][2 * m]);
          if (m + 1 <= m_max && d[h][m + 1] != kNone && d[h][m + 1] > 1) best = std::min(best, d[h][m + 1] - 1);
          if (best != d[h][m]) {
            d[h][m] = best;
            changed = true;
          }
        }
      }
    }
  }
};


}  // namespace masscut::test
