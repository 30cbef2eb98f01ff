#include <doctest.h>

#include <random>
#include <stdexcept>
#include <vector>

#include "qdta/loading.hpp"

using namespace qdta;

namespace {

Path make_path(std::vector<NodeId> nodes, std::vector<LinkId> links) {
    Path p;
    p.nodes = std::move(nodes);
    p.links = std::move(links);
    return p;
}

/// Minute-by-minute clock simulation with integer costs; counts links entered
/// strictly before the interval ends. Independent of the cumulative-cost
/// arithmetic inside truncate_path.
std::size_t walk_kept_links(const std::vector<int>& link_minutes, int interval) {
    std::size_t entered = 0;
    std::size_t idx = 0;
    int remaining = 0;
    for (int minute = 0; minute < interval; ++minute) {
        if (remaining == 0) {
            if (idx == link_minutes.size()) break;
            remaining = link_minutes[idx++];
            ++entered;
        }
        --remaining;
    }
    return entered;
}

}  // namespace

TEST_CASE("truncate_path stops mid-route when the interval runs out") {
    // 1->2 (10 min) fits, 2->3 (6.39) is entered at minute 10 and kept whole,
    // 3->4 (12.4) would start past the 15-minute mark.
    const Path p = make_path({1, 2, 3, 4}, {0, 1, 2});
    const CostVector costs{10.0, 6.39, 12.4};
    const TruncatedPath t = truncate_path(p, costs, 15.0);
    CHECK(t.kept_links == 2);
    CHECK(t.stop_node == 3);
    CHECK_FALSE(t.finished);
    CHECK_FALSE(t.forced_progress);
}

TEST_CASE("truncate_path keeps the link in progress at the interval end") {
    const Path p = make_path({3, 4, 5}, {0, 1});
    const CostVector costs{12.4, 10.0};
    const TruncatedPath t = truncate_path(p, costs, 15.0);
    CHECK(t.kept_links == 2);
    CHECK(t.stop_node == 5);
    CHECK(t.finished);
}

TEST_CASE("truncate_path with a long-enough interval keeps everything") {
    const Path p = make_path({0, 1, 2, 3}, {0, 1, 2});
    const CostVector costs{10.0, 10.0, 10.0};
    const TruncatedPath t = truncate_path(p, costs, 30.0);
    CHECK(t.kept_links == 3);
    CHECK(t.stop_node == 3);
    CHECK(t.finished);
}

TEST_CASE("truncate_path forces progress past an oversized first link") {
    const Path p = make_path({0, 1, 2}, {0, 1});
    const CostVector costs{40.0, 5.0};
    const TruncatedPath t = truncate_path(p, costs, 15.0);
    CHECK(t.kept_links == 1);
    CHECK(t.stop_node == 1);
    CHECK_FALSE(t.finished);
    CHECK(t.forced_progress);
}

TEST_CASE("truncate_path handles empty paths and rejects bad intervals") {
    Path empty;
    empty.nodes = {7};
    const TruncatedPath t = truncate_path(empty, {}, 15.0);
    CHECK(t.kept_links == 0);
    CHECK(t.stop_node == 7);
    CHECK(t.finished);

    const Path p = make_path({0, 1}, {0});
    CHECK_THROWS_AS(truncate_path(p, {1.0}, 0.0), std::invalid_argument);
}

TEST_CASE("truncation matches a minute-stepping walk on integer costs") {
    std::mt19937 rng(41);
    std::uniform_int_distribution<int> cost(1, 20);
    std::uniform_int_distribution<int> len(1, 5);
    std::uniform_int_distribution<int> dt(1, 60);

    for (int trial = 0; trial < 2000; ++trial) {
        const int n = len(rng);
        std::vector<int> minutes(static_cast<std::size_t>(n));
        std::vector<NodeId> nodes{0};
        std::vector<LinkId> links;
        CostVector costs;
        for (int i = 0; i < n; ++i) {
            minutes[static_cast<std::size_t>(i)] = cost(rng);
            nodes.push_back(i + 1);
            links.push_back(i);
            costs.push_back(minutes[static_cast<std::size_t>(i)]);
        }
        const int interval = dt(rng);
        const TruncatedPath t =
            truncate_path(make_path(nodes, links), costs, interval);
        const std::size_t expected = walk_kept_links(minutes, interval);
        CHECK(t.kept_links == expected);
        CHECK(t.stop_node == nodes[expected]);
        CHECK(t.finished == (expected == links.size()));
    }
}

TEST_CASE("longer intervals never shorten the kept prefix") {
    std::mt19937 rng(9);
    std::uniform_real_distribution<double> cost(0.5, 25.0);
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<NodeId> nodes{0};
        std::vector<LinkId> links;
        CostVector costs;
        for (int i = 0; i < 6; ++i) {
            nodes.push_back(i + 1);
            links.push_back(i);
            costs.push_back(cost(rng));
        }
        const Path p = make_path(nodes, links);
        std::size_t prev = 0;
        for (double dt = 5.0; dt <= 120.0; dt += 5.0) {
            const std::size_t kept = truncate_path(p, costs, dt).kept_links;
            CHECK(kept >= prev);
            prev = kept;
        }
    }
}

TEST_CASE("add_path_flow merges rates on identical truncated paths") {
    const Path p = make_path({1, 2, 3, 4}, {0, 1, 2});
    const TruncatedPath t = truncate_path(p, {10.0, 6.39, 12.4}, 15.0);

    PathFlowMap flows;
    add_path_flow(flows, t, 100.0);
    add_path_flow(flows, t, 75.0);
    add_path_flow(flows, t, 0.0);  // ignored
    REQUIRE(flows.size() == 1);
    CHECK(flows.begin()->second.rate == doctest::Approx(175.0));
    CHECK(flows.begin()->second.kept_links == 2);
}

TEST_CASE("path_flows_to_link_flows loads exactly the kept prefix") {
    const Path p = make_path({1, 2, 3, 4}, {0, 1, 2});
    PathFlowMap flows;
    add_path_flow(flows, truncate_path(p, {10.0, 6.39, 12.4}, 15.0), 175.0);

    const LinkFlowVector f = path_flows_to_link_flows(flows, 4);
    CHECK(f == LinkFlowVector{175.0, 175.0, 0.0, 0.0});
    CHECK(path_flows_to_link_flows({}, 4) == LinkFlowVector(4, 0.0));
}

TEST_CASE("paths sharing a link add their rates") {
    PathFlowMap flows;
    add_path_flow(flows,
                  truncate_path(make_path({0, 1, 2}, {0, 1}), {1.0, 1.0}, 10.0),
                  100.0);
    add_path_flow(flows,
                  truncate_path(make_path({3, 1, 2}, {2, 1}), {1.0, 1.0, 1.0}, 10.0),
                  100.0);
    const LinkFlowVector f = path_flows_to_link_flows(flows, 3);
    CHECK(f[1] == doctest::Approx(200.0));
}

TEST_CASE("link flow totals conserve path flow times kept length") {
    std::mt19937 rng(77);
    std::uniform_real_distribution<double> cost(0.5, 12.0);
    std::uniform_real_distribution<double> rate(1.0, 50.0);

    PathFlowMap flows;
    double expected_total = 0.0;
    LinkId next_link = 0;
    NodeId next_node = 0;
    for (int i = 0; i < 40; ++i) {
        std::vector<NodeId> nodes{next_node++};
        std::vector<LinkId> links;
        CostVector costs(1000, 1.0);
        for (int j = 0; j < 4; ++j) {
            nodes.push_back(next_node++);
            links.push_back(next_link);
            costs[static_cast<std::size_t>(next_link++)] = cost(rng);
        }
        const TruncatedPath t = truncate_path(make_path(nodes, links), costs, 15.0);
        const double r = rate(rng);
        add_path_flow(flows, t, r);
        expected_total += r * static_cast<double>(t.kept_links);
    }

    const LinkFlowVector f = path_flows_to_link_flows(flows, 1000);
    double total = 0.0;
    for (double v : f) total += v;
    CHECK(total == doctest::Approx(expected_total).epsilon(1e-12));
}

TEST_CASE("path_flows_to_link_flows rejects invalid link ids") {
    PathFlowMap flows;
    add_path_flow(flows, truncate_path(make_path({0, 1}, {5}), CostVector(6, 1.0), 10.0),
                  10.0);
    CHECK_THROWS_AS(path_flows_to_link_flows(flows, 3), std::out_of_range);
}
