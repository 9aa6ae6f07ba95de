#include "semcom/worker_pool.hpp"

#include <stdexcept>

namespace semcom {

WorkerPool::WorkerPool(std::size_t workers) {
    if (workers < 1) throw std::invalid_argument("WorkerPool: at least one worker required");
    threads_.reserve(workers - 1);
    for (std::size_t i = 1; i < workers; ++i) threads_.emplace_back([this] { worker_loop(); });
}

WorkerPool::~WorkerPool() {
    {
        std::lock_guard lock(mutex_);
        stop_ = true;
    }
    wake_.notify_all();
    for (auto& t : threads_) t.join();
}

void WorkerPool::drain() {
    std::unique_lock lock(mutex_);
    while (job_ && next_ < total_) {
        const std::size_t i = next_++;
        const auto* job = job_;
        lock.unlock();
        std::exception_ptr err;
        try {
            (*job)(i);
        } catch (...) {
            err = std::current_exception();
        }
        lock.lock();
        if (err && (!error_ || i < error_index_)) {
            error_ = err;
            error_index_ = i;
        }
        if (++finished_ == total_) done_.notify_all();
    }
}

void WorkerPool::worker_loop() {
    std::size_t seen = 0;
    for (;;) {
        {
            std::unique_lock lock(mutex_);
            wake_.wait(lock, [&] { return stop_ || generation_ != seen; });
            if (stop_) return;
            seen = generation_;
        }
        drain();
    }
}

void WorkerPool::parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn) {
    if (n == 0) return;
    {
        std::lock_guard lock(mutex_);
        job_ = &fn;
        total_ = n;
        next_ = 0;
        finished_ = 0;
        error_ = nullptr;
        ++generation_;
    }
    wake_.notify_all();
    drain();
    std::unique_lock lock(mutex_);
    done_.wait(lock, [&] { return finished_ == total_; });
    job_ = nullptr;
    if (error_) std::rethrow_exception(error_);
}

}  // namespace semcom
