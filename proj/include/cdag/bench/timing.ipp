#pragma once

#include <algorithm>
#include <chrono>
#include <vector>

namespace cdag::bench {

template <typename F>
double median_time(F&& fn, std::size_t repetitions, std::size_t warmup) {
  using Clock = std::chrono::steady_clock;
  for (std::size_t i = 0; i < warmup; ++i) fn();
  std::vector<double> t;
  t.reserve(repetitions);
  for (std::size_t i = 0; i < std::max<std::size_t>(1, repetitions); ++i) {
    const auto start = Clock::now();
    fn();
    t.push_back(std::chrono::duration<double>(Clock::now() - start).count());
  }
  auto mid = t.begin() + t.size() / 2;
  std::nth_element(t.begin(), mid, t.end());
  return *mid;
}

}  // namespace cdag::bench
