#ifndef QDTA_DEMAND_HPP
#define QDTA_DEMAND_HPP

#include <map>
#include <utility>
#include <vector>

#include "qdta/network.hpp"

namespace qdta {

struct TripRecord {
    NodeId origin = -1;
    NodeId destination = -1;
    double departure = 0.0;  // minutes since start of horizon
    double count = 1.0;      // vehicles
};

struct OdEntry {
    NodeId origin;
    NodeId destination;
    double rate;  // vehicles/hour
};

/// Sparse OD flow rates for one interval. Zero entries are absent; iteration
/// order is (origin, destination) ascending, which keeps downstream
/// partitioning and reductions deterministic.
class DemandMatrix {
public:
    using Key = std::pair<NodeId, NodeId>;

    void add(NodeId origin, NodeId destination, double rate);
    double rate(NodeId origin, NodeId destination) const;

    bool empty() const { return entries_.empty(); }
    std::size_t size() const { return entries_.size(); }
    double total_rate() const;

    const std::map<Key, double>& entries() const { return entries_; }
    std::vector<OdEntry> sorted_entries() const;

private:
    std::map<Key, double> entries_;
};

/// A worker's disjoint slice of a DemandMatrix.
struct DemandPartition {
    int owner = 0;
    std::vector<OdEntry> entries;
};

struct RejectedTrip {
    std::size_t record_index;
    TripRecord trip;
};

struct BinnedDemand {
    std::vector<DemandMatrix> intervals;
    std::vector<RejectedTrip> rejected;  // departures outside [0, N*dt)
};

/// Bin time-stamped trips into per-interval demand matrices. A trip departing
/// at minute t lands in interval floor(t / interval_minutes) and contributes
/// count / (interval_minutes / 60) vehicles/hour.
BinnedDemand bin_demand(const std::vector<TripRecord>& trips,
                        double interval_minutes, int intervals);

/// Pointwise sum of two demand matrices.
DemandMatrix merge_residual(const DemandMatrix& original,
                            const DemandMatrix& residual);

/// Split by OD-pair count into `workers` slices whose sizes differ by at most
/// one. Entries are never divided, so per-pair rates are preserved exactly.
std::vector<DemandPartition> partition_demand(const DemandMatrix& demand,
                                              int workers);

}  // namespace qdta

#endif  // QDTA_DEMAND_HPP
