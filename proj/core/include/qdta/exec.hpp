#ifndef QDTA_EXEC_HPP
#define QDTA_EXEC_HPP

#include <condition_variable>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace qdta {

/// Contiguous slice [begin, end) of the link id range owned by one worker.
struct LinkPartition {
    int owner = 0;
    std::size_t begin = 0;
    std::size_t end = 0;

    std::size_t size() const { return end - begin; }
};

/// Balanced contiguous partition of [0, link_count); sizes differ by at most
/// one and the assignment is deterministic.
std::vector<LinkPartition> partition_links(std::size_t link_count, int workers);

/// Elementwise sum of one vector per worker, combined in worker-index order
/// so that repeated runs with the same worker count are bit-identical.
/// Batch several scalars by packing them into one vector.
std::vector<double> all_reduce_sum(const std::vector<std::vector<double>>& locals);

/// Long-lived worker threads executing bulk-synchronous phases. run() invokes
/// task(k) for every worker index k and returns once all workers finished,
/// which is the barrier between phases. With one worker everything runs
/// inline on the calling thread.
class WorkerPool {
public:
    explicit WorkerPool(int workers);
    ~WorkerPool();

    WorkerPool(const WorkerPool&) = delete;
    WorkerPool& operator=(const WorkerPool&) = delete;

    int size() const { return workers_; }
    void run(const std::function<void(int)>& task);

private:
    void worker_loop(int k);

    int workers_;
    std::vector<std::thread> threads_;
    std::mutex mutex_;
    std::condition_variable cv_start_;
    std::condition_variable cv_done_;
    const std::function<void(int)>* task_ = nullptr;
    std::uint64_t phase_ = 0;
    int remaining_ = 0;
    bool shutdown_ = false;
};

}  // namespace qdta

#endif  // QDTA_EXEC_HPP
