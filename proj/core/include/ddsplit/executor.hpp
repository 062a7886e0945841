#pragma once

#include <cstddef>
#include <functional>

namespace ddsplit {

/// Runs independent tasks on up to `threads` threads. Each task index is
/// processed exactly once; callers write results into per-index slots, so
/// the outcome does not depend on the thread count. If tasks throw, the
/// exception of the lowest failing index is rethrown after all tasks finish.
class Executor {
 public:
  explicit Executor(int threads = 1) : threads_(threads < 1 ? 1 : threads) {}

  [[nodiscard]] int threads() const noexcept { return threads_; }

  void parallel_for(std::size_t count, const std::function<void(std::size_t)>& task) const;

 private:
  int threads_;
};

}  // namespace ddsplit
