#include <doctest.h>

#include <random>
#include <stdexcept>

#include "qdta/fixtures.hpp"
#include "qdta/router.hpp"

using namespace qdta;

namespace {

Network serial_network() { return build_network(make_serial_example()); }

CostVector free_flow_costs(const Network& net) {
    return update_costs(net, LinkFlowVector(net.link_count(), 0.0));
}

}  // namespace

TEST_CASE("query on the serial network at free flow") {
    const Network net = serial_network();
    RoutingIndex index(net);
    CHECK_FALSE(index.customized());
    CHECK_THROWS_AS(index.query(1, 4), std::logic_error);

    index.customize(free_flow_costs(net));
    CHECK(index.customized());
    CHECK(index.generation() == 1);

    const auto path = index.query(1, 4);
    REQUIRE(path.has_value());
    CHECK(path->nodes == std::vector<NodeId>{1, 2, 3, 4});
    CHECK(path->links == std::vector<LinkId>{0, 1, 2});
    CHECK(path->total_cost == doctest::Approx(25.0));
}

TEST_CASE("query from a node to itself is an empty path") {
    const Network net = serial_network();
    RoutingIndex index(net);
    index.customize(free_flow_costs(net));
    const auto path = index.query(3, 3);
    REQUIRE(path.has_value());
    CHECK(path->nodes == std::vector<NodeId>{3});
    CHECK(path->links.empty());
    CHECK(path->total_cost == 0.0);
}

TEST_CASE("unreachable destinations come back empty") {
    const Network net = serial_network();
    RoutingIndex index(net);
    index.customize(free_flow_costs(net));
    CHECK_FALSE(index.query(4, 1).has_value());  // links point downstream only
    CHECK_FALSE(index.query(1, 0).has_value());  // node 0 has no incident links
}

TEST_CASE("customize installs congested costs exactly") {
    const Network net = serial_network();
    RoutingIndex index(net);
    // Costs at the second-interval flows (0, 0, 225, 50).
    const CostVector congested = update_costs(net, {0.0, 0.0, 225.0, 50.0});
    index.customize(congested);

    const auto path = index.query(3, 5);
    REQUIRE(path.has_value());
    CHECK(path->total_cost == doctest::Approx(22.4).epsilon(2e-3));
    CHECK(path->total_cost == congested[2] + congested[3]);
}

TEST_CASE("customize is idempotent and rejects bad cost vectors") {
    const Network net = serial_network();
    RoutingIndex index(net);
    const CostVector costs = free_flow_costs(net);
    index.customize(costs);
    const auto first = index.query(1, 5);
    index.customize(costs);
    const auto second = index.query(1, 5);
    CHECK(index.generation() == 2);
    REQUIRE(first.has_value());
    REQUIRE(second.has_value());
    CHECK(first->nodes == second->nodes);
    CHECK(first->total_cost == second->total_cost);

    CHECK_THROWS_AS(index.customize(CostVector{1.0}), std::invalid_argument);
    CHECK_THROWS_AS(index.customize(CostVector{1.0, 1.0, 0.0, 1.0}),
                    std::domain_error);
}

TEST_CASE("building the index twice gives equivalent answers") {
    const Network net = build_network(make_random(30, 0, 13, 60.0));
    const CostVector costs = free_flow_costs(net);
    RoutingIndex a(net), b(net);
    a.customize(costs);
    b.customize(costs);
    for (NodeId p = 0; p < net.node_count(); ++p)
        for (NodeId q = 0; q < net.node_count(); ++q) {
            const auto pa = a.query(p, q);
            const auto pb = b.query(p, q);
            REQUIRE(pa.has_value() == pb.has_value());
            if (pa) {
                CHECK(pa->total_cost == pb->total_cost);
                CHECK(pa->nodes == pb->nodes);
            }
        }
}

TEST_CASE("accelerated backend matches the label-setting reference") {
    std::mt19937 rng(29);
    std::uniform_int_distribution<NodeId> node(0, 49);
    std::uniform_real_distribution<double> weight(0.1, 30.0);

    const Network net = build_network(make_random(50, 0, 57, 60.0));
    CostVector costs(net.link_count());
    for (auto& c : costs) c = weight(rng);

    RoutingIndex fast(net, RouterBackend::Accelerated);
    RoutingIndex reference(net, RouterBackend::Reference);
    fast.customize(costs);
    reference.customize(costs);

    for (int i = 0; i < 1000; ++i) {
        const NodeId p = node(rng), q = node(rng);
        const auto pf = fast.query(p, q);
        const auto pr = reference.query(p, q);
        REQUIRE(pf.has_value() == pr.has_value());
        if (pf) CHECK(pf->total_cost == pr->total_cost);
    }
}

TEST_CASE("paths are internally consistent") {
    const Network net = build_network(make_random(40, 0, 3, 60.0));
    RoutingIndex index(net);
    const CostVector costs = free_flow_costs(net);
    index.customize(costs);

    std::mt19937 rng(61);
    std::uniform_int_distribution<NodeId> node(0, 39);
    for (int i = 0; i < 300; ++i) {
        const auto path = index.query(node(rng), node(rng));
        if (!path) continue;
        REQUIRE(path->nodes.size() == path->links.size() + 1);
        double sum = 0.0;
        for (std::size_t j = 0; j < path->links.size(); ++j) {
            const Link& a = net.link(path->links[j]);
            CHECK(a.tail == path->nodes[j]);
            CHECK(a.head == path->nodes[j + 1]);
            sum += costs[static_cast<std::size_t>(a.id)];
        }
        CHECK(path->total_cost == doctest::Approx(sum).epsilon(1e-12));
    }
}

TEST_CASE("triangle property over sampled midpoints") {
    const Network net = build_network(make_random(25, 0, 97, 60.0));
    RoutingIndex index(net);
    index.customize(free_flow_costs(net));

    std::mt19937 rng(7);
    std::uniform_int_distribution<NodeId> node(0, 24);
    for (int i = 0; i < 500; ++i) {
        const NodeId p = node(rng), m = node(rng), q = node(rng);
        const auto pq = index.query(p, q);
        const auto pm = index.query(p, m);
        const auto mq = index.query(m, q);
        if (pq && pm && mq)
            CHECK(pq->total_cost <= pm->total_cost + mq->total_cost + 1e-9);
    }
}

TEST_CASE("query_from equals per-target queries") {
    const Network net = build_network(make_random(35, 0, 19, 60.0));
    RoutingIndex index(net);
    index.customize(free_flow_costs(net));

    const NodeId origin = 4;
    std::vector<NodeId> targets{0, 12, 4, 30, 12, 7};
    const auto batch = index.query_from(origin, targets);
    REQUIRE(batch.size() == targets.size());
    for (std::size_t i = 0; i < targets.size(); ++i) {
        const auto single = index.query(origin, targets[i]);
        REQUIRE(batch[i].has_value() == single.has_value());
        if (single) {
            CHECK(batch[i]->nodes == single->nodes);
            CHECK(batch[i]->total_cost == single->total_cost);
        }
    }
}

TEST_CASE("repeated queries are deterministic") {
    const Network net = build_network(make_random(40, 0, 23, 60.0));
    RoutingIndex index(net);
    // Uniform weights produce many exact ties; the tie-break must be stable.
    index.customize(CostVector(net.link_count(), 1.0));

    std::mt19937 rng(2);
    std::uniform_int_distribution<NodeId> node(0, 39);
    for (int i = 0; i < 200; ++i) {
        const NodeId p = node(rng), q = node(rng);
        const auto first = index.query(p, q);
        const auto second = index.query(p, q);
        REQUIRE(first.has_value() == second.has_value());
        if (first) {
            CHECK(first->nodes == second->nodes);
            CHECK(first->links == second->links);
        }
    }
}
