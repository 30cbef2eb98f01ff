#include "qdta/fixtures.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <random>
#include <stdexcept>

#include "qdta/io.hpp"

namespace qdta {

Fixture make_serial_example() {
    Fixture f;
    f.node_count = 6;  // node ids 1..5; node 0 unused, kept for 1-based labels
    const double c0[] = {10.0, 5.0, 10.0, 10.0};
    const double cap[] = {200.0, 150.0, 200.0, 200.0};
    for (int i = 0; i < 4; ++i)
        f.links.push_back({i, static_cast<NodeId>(i + 1), static_cast<NodeId>(i + 2),
                           cap[i], c0[i], 1.0, 3});
    f.rate_demand.resize(4);
    f.rate_demand[0].add(1, 4, 175.0);
    f.rate_demand[1].add(3, 5, 50.0);
    return f;
}

Fixture make_grid(int side, int trip_count, unsigned seed,
                  double horizon_minutes, int hub_count) {
    if (side < 2) throw std::invalid_argument("grid side must be >= 2");
    std::mt19937 rng(seed);

    Fixture f;
    f.node_count = static_cast<NodeId>(side * side);
    auto node_at = [side](int row, int col) {
        return static_cast<NodeId>(row * side + col);
    };

    std::uniform_real_distribution<double> cap_dist(500.0, 1200.0);
    std::uniform_real_distribution<double> time_dist(0.8, 1.6);
    LinkId next_id = 0;
    auto add_pair = [&](NodeId u, NodeId v) {
        const double cap = cap_dist(rng);
        const double c0 = time_dist(rng);
        const double length = c0 * 0.5;  // ~30 mph free flow
        f.links.push_back({next_id++, u, v, cap, c0, length, 3});
        f.links.push_back({next_id++, v, u, cap, c0, length, 3});
    };
    for (int row = 0; row < side; ++row)
        for (int col = 0; col < side; ++col) {
            if (col + 1 < side) add_pair(node_at(row, col), node_at(row, col + 1));
            if (row + 1 < side) add_pair(node_at(row, col), node_at(row + 1, col));
        }

    std::vector<NodeId> origins, destinations;
    if (hub_count > 0) {
        std::uniform_int_distribution<NodeId> node_dist(0, f.node_count - 1);
        for (int i = 0; i < hub_count; ++i) origins.push_back(node_dist(rng));
        for (int i = 0; i < hub_count; ++i) destinations.push_back(node_dist(rng));
    } else {
        for (NodeId v = 0; v < f.node_count; ++v) {
            origins.push_back(v);
            destinations.push_back(v);
        }
    }

    // Departure times peak mid-horizon so the middle intervals congest.
    std::normal_distribution<double> dep_dist(horizon_minutes * 0.5,
                                              horizon_minutes * 0.18);
    std::uniform_int_distribution<std::size_t> o_dist(0, origins.size() - 1);
    std::uniform_int_distribution<std::size_t> d_dist(0, destinations.size() - 1);
    for (int i = 0; i < trip_count; ++i) {
        TripRecord t;
        t.origin = origins[o_dist(rng)];
        do {
            t.destination = destinations[d_dist(rng)];
        } while (t.destination == t.origin);
        double dep = dep_dist(rng);
        dep = std::min(std::max(dep, 0.0), std::nexttoward(horizon_minutes, 0.0));
        t.departure = dep;
        t.count = 1.0;
        f.trips.push_back(t);
    }
    return f;
}

Fixture make_random(int nodes, int trip_count, unsigned seed,
                    double horizon_minutes) {
    if (nodes < 2) throw std::invalid_argument("need at least 2 nodes");
    std::mt19937 rng(seed);

    Fixture f;
    f.node_count = static_cast<NodeId>(nodes);

    std::vector<NodeId> ring(static_cast<std::size_t>(nodes));
    for (int v = 0; v < nodes; ++v) ring[static_cast<std::size_t>(v)] = v;
    std::shuffle(ring.begin(), ring.end(), rng);

    std::uniform_real_distribution<double> cap_dist(300.0, 1000.0);
    std::uniform_real_distribution<double> time_dist(1.0, 10.0);
    LinkId next_id = 0;
    auto add_link = [&](NodeId u, NodeId v) {
        const double c0 = time_dist(rng);
        f.links.push_back({next_id++, u, v, cap_dist(rng), c0, c0 * 0.5, 4});
    };
    for (std::size_t i = 0; i < ring.size(); ++i)
        add_link(ring[i], ring[(i + 1) % ring.size()]);

    std::uniform_int_distribution<NodeId> node_dist(0, f.node_count - 1);
    const int extra = nodes * 3;
    for (int i = 0; i < extra; ++i) {
        const NodeId u = node_dist(rng);
        const NodeId v = node_dist(rng);
        if (u != v) add_link(u, v);
    }

    std::uniform_real_distribution<double> dep_dist(0.0, horizon_minutes);
    for (int i = 0; i < trip_count; ++i) {
        TripRecord t;
        t.origin = node_dist(rng);
        do {
            t.destination = node_dist(rng);
        } while (t.destination == t.origin);
        t.departure = std::min(dep_dist(rng), std::nexttoward(horizon_minutes, 0.0));
        t.count = 1.0;
        f.trips.push_back(t);
    }
    return f;
}

Network build_network(const Fixture& fixture, double bpr_alpha, double bpr_beta) {
    return Network(fixture.node_count, fixture.links, bpr_alpha, bpr_beta);
}

void write_fixture(const Fixture& fixture, const std::string& dir) {
    std::filesystem::create_directories(dir);
    const Network network = build_network(fixture);
    write_network_csv(dir + "/network.csv", network);
    if (!fixture.rate_demand.empty())
        write_rate_demand_csv(dir + "/demand.csv", fixture.rate_demand);
    else
        write_trips_csv(dir + "/demand.csv", fixture.trips);
}

}  // namespace qdta
