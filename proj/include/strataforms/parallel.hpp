#pragma once

#include <cstdlib>
#include <functional>
#include <thread>
#include <vector>

namespace strataforms {

// Deterministic parallel map: results land in index order regardless of the
// thread schedule, so reductions stay reproducible.
inline void parallel_for(int count, int jobs, const std::function<void(int)>& body) {
  if (jobs <= 1 || count <= 1) {
    for (int i = 0; i < count; ++i) body(i);
    return;
  }
  jobs = std::min(jobs, count);
  std::vector<std::thread> workers;
  workers.reserve(jobs);
  for (int w = 0; w < jobs; ++w)
    workers.emplace_back([&, w] {
      for (int i = w; i < count; i += jobs) body(i);
    });
  for (auto& t : workers) t.join();
}

inline int default_jobs() {
  if (const char* env = std::getenv("STRATAFORMS_JOBS")) {
    int j = std::atoi(env);
    if (j > 0) return j;
  }
  return 1;
}

}  // namespace strataforms
