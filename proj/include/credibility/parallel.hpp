#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <string>
#include <thread>
#include <vector>

namespace credibility {

/// Worker-thread count for replicate loops; 0 means all available cores.
/// Results never depend on this value.
struct Execution {
  unsigned jobs = 0;

  unsigned resolved_jobs() const {
    if (jobs > 0) return jobs;
    return std::max(1u, std::thread::hardware_concurrency());
  }
};

/// Outcome of a replicate loop: per-replicate results in index order plus the
/// lowest-index failure, if any.
template <typename T>
struct ReplicateBatch {
  std::vector<T> values;
  std::vector<char> failed;
  std::size_t failures = 0;
  std::size_t first_failure = 0;
  std::string first_failure_message;
};

/// Runs `body(b)` for b in [0, count) on contiguous blocks, one per worker.
/// Exceptions derived from std::exception are captured per replicate.
template <typename T, typename Body>
ReplicateBatch<T> run_replicates(std::size_t count, const Execution& exec, Body&& body) {
  ReplicateBatch<T> batch;
  batch.values.assign(count, T{});
  batch.failed.assign(count, 0);
  std::vector<std::string> messages(count);

  auto work = [&](std::size_t begin, std::size_t end) {
    for (std::size_t b = begin; b < end; ++b) {
      try {
        batch.values[b] = body(b);
      } catch (const std::exception& e) {
        batch.failed[b] = 1;
        messages[b] = e.what();
      }
    }
  };

  const std::size_t workers = std::min<std::size_t>(exec.resolved_jobs(), std::max<std::size_t>(count, 1));
  if (workers <= 1) {
    work(0, count);
  } else {
    std::vector<std::thread> threads;
    threads.reserve(workers);
    const std::size_t chunk = (count + workers - 1) / workers;
    for (std::size_t w = 0; w < workers; ++w) {
      const std::size_t begin = w * chunk;
      const std::size_t end = std::min(count, begin + chunk);
      if (begin >= end) break;
      threads.emplace_back(work, begin, end);
    }
    for (auto& t : threads) t.join();
  }

  for (std::size_t b = 0; b < count; ++b) {
    if (!batch.failed[b]) continue;
    if (batch.failures == 0) {
      batch.first_failure = b;
      batch.first_failure_message = messages[b];
    }
    ++batch.failures;
  }
  return batch;
}

}  // namespace credibility
