#pragma once

#include <algorithm>
#include <condition_variable>
#include <cstdint>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace condopt {

/// Persistent worker pool for color-batch sweeps. parallel_for blocks until
/// every index in [0, n) has been processed; indices are handed out in
/// chunks through an atomic cursor, so work distribution is dynamic but the
/// callee must not care which thread runs which index.
class ThreadPool {
public:
    explicit ThreadPool(int threads)
    {
        const int count = std::max(1, threads) - 1; // caller participates
        workers_.reserve(static_cast<std::size_t>(count));
        for (int t = 0; t < count; ++t) {
            workers_.emplace_back([this] { worker_loop(); });
        }
    }

    ThreadPool(const ThreadPool&) = delete;
    ThreadPool& operator=(const ThreadPool&) = delete;

    ~ThreadPool()
    {
        {
            std::scoped_lock lock(mutex_);
            stopping_ = true;
        }
        wake_workers_.notify_all();
        for (auto& w : workers_) {
            w.join();
        }
    }

    int concurrency() const { return static_cast<int>(workers_.size()) + 1; }

    void parallel_for(int n, const std::function<void(int)>& body)
    {
        if (n <= 0) {
            return;
        }
        if (workers_.empty()) {
            for (int i = 0; i < n; ++i) {
                body(i);
            }
            return;
        }
        {
            std::scoped_lock lock(mutex_);
            body_ = &body;
            next_ = 0;
            end_ = n;
            active_ = static_cast<int>(workers_.size());
            ++generation_;
        }
        wake_workers_.notify_all();
        drain(); // caller works too
        std::unique_lock lock(mutex_);
        job_done_.wait(lock, [this] { return active_ == 0; });
        body_ = nullptr;
    }

private:
    void drain()
    {
        while (true) {
            int i;
            {
                std::scoped_lock lock(mutex_);
                if (next_ >= end_) {
                    return;
                }
                i = next_++;
            }
            (*body_)(i);
        }
    }

    void worker_loop()
    {
        std::uint64_t seen = 0;
        while (true) {
            {
                std::unique_lock lock(mutex_);
                wake_workers_.wait(lock, [&] { return stopping_ || generation_ != seen; });
                if (stopping_) {
                    return;
                }
                seen = generation_;
            }
            drain();
            {
                std::scoped_lock lock(mutex_);
                if (--active_ == 0) {
                    job_done_.notify_one();
                }
            }
        }
    }

    std::vector<std::thread> workers_;
    std::mutex mutex_;
    std::condition_variable wake_workers_;
    std::condition_variable job_done_;
    const std::function<void(int)>* body_ = nullptr;
    int next_ = 0;
    int end_ = 0;
    int active_ = 0;
    std::uint64_t generation_ = 0;
    bool stopping_ = false;
};

} // namespace condopt
