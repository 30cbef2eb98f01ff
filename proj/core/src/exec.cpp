#include "qdta/exec.hpp"

#include <stdexcept>

namespace qdta {

std::vector<LinkPartition> partition_links(std::size_t link_count, int workers) {
    if (workers < 1) throw std::invalid_argument("worker count must be >= 1");
    const auto m = static_cast<std::size_t>(workers);
    std::vector<LinkPartition> parts(m);
    std::size_t offset = 0;
    for (std::size_t k = 0; k < m; ++k) {
        const std::size_t count = link_count / m + (k < link_count % m ? 1 : 0);
        parts[k] = {static_cast<int>(k), offset, offset + count};
        offset += count;
    }
    return parts;
}

std::vector<double> all_reduce_sum(const std::vector<std::vector<double>>& locals) {
    if (locals.empty()) return {};
    std::vector<double> global = locals.front();
    for (std::size_t k = 1; k < locals.size(); ++k) {
        if (locals[k].size() != global.size())
            throw std::invalid_argument("all_reduce_sum: length mismatch");
        for (std::size_t i = 0; i < global.size(); ++i) global[i] += locals[k][i];
    }
    return global;
}

WorkerPool::WorkerPool(int workers) : workers_(workers) {
    if (workers < 1) throw std::invalid_argument("worker count must be >= 1");
    // Worker 0 is the calling thread; only extra workers get threads.
    for (int k = 1; k < workers_; ++k)
        threads_.emplace_back([this, k] { worker_loop(k); });
}

WorkerPool::~WorkerPool() {
    {
        std::lock_guard lock(mutex_);
        shutdown_ = true;
    }
    cv_start_.notify_all();
    for (auto& t : threads_) t.join();
}

void WorkerPool::run(const std::function<void(int)>& task) {
    if (workers_ == 1) {
        task(0);
        return;
    }
    {
        std::lock_guard lock(mutex_);
        task_ = &task;
        remaining_ = workers_ - 1;
        ++phase_;
    }
    cv_start_.notify_all();
    task(0);
    std::unique_lock lock(mutex_);
    cv_done_.wait(lock, [this] { return remaining_ == 0; });
    task_ = nullptr;
}

void WorkerPool::worker_loop(int k) {
    std::uint64_t seen = 0;
    while (true) {
        const std::function<void(int)>* task = nullptr;
        {
            std::unique_lock lock(mutex_);
            cv_start_.wait(lock, [&] { return shutdown_ || phase_ != seen; });
            if (shutdown_) return;
            seen = phase_;
            task = task_;
        }
        (*task)(k);
        {
            std::lock_guard lock(mutex_);
            if (--remaining_ == 0) cv_done_.notify_one();
        }
    }
}

}  // namespace qdta
