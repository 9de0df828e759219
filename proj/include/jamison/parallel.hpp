#pragma once

#include <algorithm>
#include <cstdlib>
#include <thread>
#include <vector>

namespace jamison {

/// Worker count: JAMISON_THREADS caps hardware concurrency.
inline unsigned thread_count() {
  unsigned n = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("JAMISON_THREADS")) {
    const long cap = std::strtol(env, nullptr, 10);
    if (cap >= 1) n = std::min<unsigned>(n, static_cast<unsigned>(cap));
  }
  return n;
}

/// Runs fn(shard, begin, end) over disjoint contiguous shards of [0, count).
/// Returns one result per shard in shard order so reductions stay deterministic.
template <class Result, class Fn>
std::vector<Result> map_shards(std::size_t count, Fn fn, std::size_t min_per_shard = 4096) {
  std::size_t shards = std::min<std::size_t>(thread_count(), std::max<std::size_t>(1, count / min_per_shard));
  shards = std::max<std::size_t>(1, shards);
  std::vector<Result> out(shards);
  auto bounds = [&](std::size_t s) { return std::pair{count * s / shards, count * (s + 1) / shards}; };
  if (shards == 1) {
    out[0] = fn(0, 0, count);
    return out;
  }
  std::vector<std::thread> pool;
  for (std::size_t s = 0; s < shards; ++s) {
    auto [b, e] = bounds(s);
    pool.emplace_back([&, s, b, e] { out[s] = fn(s, b, e); });
  }
  for (auto& t : pool) t.join();
  return out;
}

}  // namespace jamison
