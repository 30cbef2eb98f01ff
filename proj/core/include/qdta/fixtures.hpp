#ifndef QDTA_FIXTURES_HPP
#define QDTA_FIXTURES_HPP

#include <string>
#include <vector>

#include "qdta/demand.hpp"
#include "qdta/network.hpp"

namespace qdta {

/// Deterministic synthetic scenario: a network plus demand in either trip or
/// per-interval rate form.
struct Fixture {
    NodeId node_count = 0;
    std::vector<Link> links;
    std::vector<TripRecord> trips;            // empty when rate-form demand is used
    std::vector<DemandMatrix> rate_demand;    // empty when trip-form demand is used
};

/// The 5-node serial example: 4 links, free-flow times {10,5,10,10} minutes,
/// capacities {200,150,200,200} v/h; demand 175 v/h (1->4) in interval 0 and
/// 50 v/h (3->5) in interval 1, of 4 fifteen-minute intervals.
Fixture make_serial_example();

/// side x side grid, bidirectional links between 4-neighbors. Demand is
/// `trip_count` trips between `hub_count` randomly chosen origin and
/// destination hubs (0 = draw from all nodes), departures weighted toward the
/// middle of the horizon so some intervals congest.
Fixture make_grid(int side, int trip_count, unsigned seed,
                  double horizon_minutes, int hub_count = 0);

/// Random strongly connected digraph: a Hamiltonian ring plus random extra
/// links up to ~4x node count, random capacities and free-flow times.
Fixture make_random(int nodes, int trip_count, unsigned seed,
                    double horizon_minutes);

Network build_network(const Fixture& fixture, double bpr_alpha = 0.15,
                      double bpr_beta = 4.0);

/// Write <dir>/network.csv and <dir>/demand.csv (trip or rate form).
void write_fixture(const Fixture& fixture, const std::string& dir);

}  // namespace qdta

#endif  // QDTA_FIXTURES_HPP
