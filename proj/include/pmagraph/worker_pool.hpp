#pragma once

// Bulk-synchronous worker pool. run() hands every index in [0, n) to fn with
// a static contiguous partition per worker and blocks until all workers
// finish, so a sequence of run() calls forms barrier-separated rounds.
// A single-worker pool executes inline on the calling thread.

#include <condition_variable>
#include <cstddef>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace pmagraph {

class WorkerPool {
public:
    explicit WorkerPool(unsigned workers) : workers_(workers == 0 ? 1 : workers) {
        for (unsigned w = 1; w < workers_; ++w) {
            threads_.emplace_back([this, w] { worker_loop(w); });
        }
    }

    WorkerPool(const WorkerPool&) = delete;
    WorkerPool& operator=(const WorkerPool&) = delete;

    ~WorkerPool() {
        {
            std::lock_guard<std::mutex> lk(mu_);
            stop_ = true;
            ++generation_;
        }
        cv_.notify_all();
        for (auto& t : threads_) t.join();
    }

    unsigned workers() const { return workers_; }

    void run(std::size_t task_count, const std::function<void(std::size_t)>& fn) {
        if (task_count == 0) return;
        if (workers_ == 1 || task_count == 1) {
            for (std::size_t i = 0; i < task_count; ++i) fn(i);
            return;
        }
        {
            std::lock_guard<std::mutex> lk(mu_);
            task_count_ = task_count;
            fn_ = &fn;
            pending_ = workers_ - 1;
            ++generation_;
        }
        cv_.notify_all();
        run_slice(0);
        std::unique_lock<std::mutex> lk(mu_);
        done_cv_.wait(lk, [this] { return pending_ == 0; });
        fn_ = nullptr;
    }

private:
    void run_slice(unsigned w) {
        const std::size_t begin = task_count_ * w / workers_;
        const std::size_t end = task_count_ * (w + 1) / workers_;
        for (std::size_t i = begin; i < end; ++i) (*fn_)(i);
    }

    void worker_loop(unsigned w) {
        std::uint64_t seen = 0;
        while (true) {
            {
                std::unique_lock<std::mutex> lk(mu_);
                cv_.wait(lk, [&] { return stop_ || generation_ != seen; });
                if (stop_) return;
                seen = generation_;
            }
            run_slice(w);
            {
                std::lock_guard<std::mutex> lk(mu_);
                if (--pending_ == 0) done_cv_.notify_one();
            }
        }
    }

    unsigned workers_;
    std::vector<std::thread> threads_;
    std::mutex mu_;
    std::condition_variable cv_;
    std::condition_variable done_cv_;
    std::uint64_t generation_ = 0;
    std::size_t task_count_ = 0;
    const std::function<void(std::size_t)>* fn_ = nullptr;
    unsigned pending_ = 0;
    bool stop_ = false;
};

}  // namespace pmagraph
