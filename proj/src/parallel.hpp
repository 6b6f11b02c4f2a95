#pragma once

// Thread-count-capped parallel loops on TBB's work-stealing scheduler.

#include <algorithm>
#include <cstddef>
#include <memory>
#include <thread>

#include <tbb/blocked_range.h>
#include <tbb/global_control.h>
#include <tbb/parallel_for.h>
#include <tbb/task_arena.h>

namespace snets::detail {

inline int resolve_threads(int requested) {
    if (requested > 0) return requested;
    return std::max(1u, std::thread::hardware_concurrency());
}

class Workers {
public:
    explicit Workers(int threads) : threads_(resolve_threads(threads)), arena_(threads_) {
        // The default worker limit is the hardware concurrency; raise it when asked for more.
        if (threads_ > tbb::this_task_arena::max_concurrency()) {
            control_ = std::make_unique<tbb::global_control>(
                tbb::global_control::max_allowed_parallelism, static_cast<std::size_t>(threads_));
        }
    }

    int threads() const { return threads_; }

    /// Calls body(i) for every i in [0, n). Iterations may run in any order on any worker.
    template <class Body>
    void for_each(std::size_t n, Body&& body, std::size_t grain = 1) {
        if (n == 0) return;
        if (threads_ == 1) {
            for (std::size_t i = 0; i < n; ++i) body(i);
            return;
        }
        arena_.execute([&] {
            tbb::parallel_for(tbb::blocked_range<std::size_t>(0, n, grain),
                              [&](const tbb::blocked_range<std::size_t>& r) {
                                  for (std::size_t i = r.begin(); i != r.end(); ++i) body(i);
                              });
        });
    }

private:
    int threads_;
    std::unique_ptr<tbb::global_control> control_;
    tbb::task_arena arena_;
};

} // namespace snets::detail
