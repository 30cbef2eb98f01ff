#include <doctest.h>

#include <atomic>
#include <numeric>
#include <stdexcept>

#include "qdta/exec.hpp"

using namespace qdta;

TEST_CASE("partition_links balanced examples") {
    const auto parts = partition_links(10, 3);
    REQUIRE(parts.size() == 3);
    CHECK(parts[0].size() == 4);
    CHECK(parts[1].size() == 3);
    CHECK(parts[2].size() == 3);

    const auto one = partition_links(10, 1);
    REQUIRE(one.size() == 1);
    CHECK(one[0].begin == 0);
    CHECK(one[0].end == 10);

    CHECK_THROWS_AS(partition_links(10, 0), std::invalid_argument);
}

TEST_CASE("partition_links covers the range exactly, exhaustively") {
    for (std::size_t n = 0; n <= 100; ++n)
        for (int m = 1; m <= 16; ++m) {
            const auto parts = partition_links(n, m);
            REQUIRE(parts.size() == static_cast<std::size_t>(m));
            std::size_t expect_begin = 0;
            std::size_t min_size = n, max_size = 0;
            for (const auto& p : parts) {
                CHECK(p.begin == expect_begin);  // contiguous, disjoint
                expect_begin = p.end;
                min_size = std::min(min_size, p.size());
                max_size = std::max(max_size, p.size());
            }
            CHECK(expect_begin == n);
            CHECK(max_size - min_size <= 1);
        }
}

TEST_CASE("all_reduce_sum examples") {
    CHECK(all_reduce_sum({{1.0, 2.0, 0.0}, {0.0, 3.0, 4.0}}) ==
          std::vector<double>{1.0, 5.0, 4.0});
    CHECK(all_reduce_sum({{7.0, 8.0}}) == std::vector<double>{7.0, 8.0});
    CHECK(all_reduce_sum({}).empty());
    CHECK_THROWS_AS(all_reduce_sum({{1.0}, {1.0, 2.0}}), std::invalid_argument);
}

TEST_CASE("all_reduce_sum batching equals separate reductions exactly") {
    const std::vector<std::vector<double>> batched{{0.1, 2.2, -3.0},
                                                   {0.7, 1.1, 9.0},
                                                   {5.5, -0.4, 2.0}};
    const auto combined = all_reduce_sum(batched);
    for (std::size_t i = 0; i < 3; ++i) {
        std::vector<std::vector<double>> single;
        for (const auto& local : batched) single.push_back({local[i]});
        CHECK(all_reduce_sum(single)[0] == combined[i]);
    }
}

TEST_CASE("all_reduce_sum is bit-identical across repeats") {
    std::vector<std::vector<double>> locals;
    for (int k = 0; k < 7; ++k) {
        std::vector<double> v(64);
        for (std::size_t i = 0; i < v.size(); ++i)
            v[i] = 0.1 * static_cast<double>(k + 1) / static_cast<double>(i + 1);
        locals.push_back(std::move(v));
    }
    const auto first = all_reduce_sum(locals);
    for (int rep = 0; rep < 5; ++rep) CHECK(all_reduce_sum(locals) == first);
}

TEST_CASE("partition-sum identity reconstructs the vector") {
    std::vector<double> data(53);
    std::iota(data.begin(), data.end(), 1.0);
    const auto parts = partition_links(data.size(), 6);
    std::vector<std::vector<double>> locals(parts.size(),
                                            std::vector<double>(data.size(), 0.0));
    for (std::size_t k = 0; k < parts.size(); ++k)
        for (std::size_t i = parts[k].begin; i < parts[k].end; ++i)
            locals[k][i] = data[i];
    CHECK(all_reduce_sum(locals) == data);
}

TEST_CASE("worker pool runs every worker exactly once per phase") {
    for (int workers : {1, 2, 4}) {
        WorkerPool pool(workers);
        CHECK(pool.size() == workers);
        std::vector<std::atomic<int>> hits(static_cast<std::size_t>(workers));
        for (int phase = 0; phase < 50; ++phase)
            pool.run([&](int k) { ++hits[static_cast<std::size_t>(k)]; });
        for (const auto& h : hits) CHECK(h.load() == 50);
    }
    CHECK_THROWS_AS(WorkerPool(0), std::invalid_argument);
}

TEST_CASE("worker pool phases act as barriers") {
    WorkerPool pool(4);
    std::vector<double> prev(4, 0.0), next(4, 0.0);
    // Each phase reads every slot written in the previous phase; a stale value
    // would appear if run() returned before all workers finished.
    bool ok = true;
    for (int phase = 1; phase <= 100; ++phase) {
        const double expected = 4.0 * (phase - 1);
        std::atomic<bool> phase_ok{true};
        pool.run([&, expected](int k) {
            double sum = 0.0;
            for (double v : prev) sum += v;
            if (sum != expected) phase_ok = false;
            next[static_cast<std::size_t>(k)] = static_cast<double>(phase);
        });
        ok = ok && phase_ok.load();
        prev = next;
    }
    CHECK(ok);
}
