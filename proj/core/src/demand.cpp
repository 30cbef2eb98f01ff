#include "qdta/demand.hpp"

#include <cmath>
#include <stdexcept>

namespace qdta {

void DemandMatrix::add(NodeId origin, NodeId destination, double rate) {
    if (rate <= 0.0) return;
    if (!std::isfinite(rate)) throw std::invalid_argument("nonfinite demand rate");
    entries_[{origin, destination}] += rate;
}

double DemandMatrix::rate(NodeId origin, NodeId destination) const {
    auto it = entries_.find({origin, destination});
    return it == entries_.end() ? 0.0 : it->second;
}

double DemandMatrix::total_rate() const {
    double sum = 0.0;
    for (const auto& [key, rate] : entries_) sum += rate;
    return sum;
}

std::vector<OdEntry> DemandMatrix::sorted_entries() const {
    std::vector<OdEntry> out;
    out.reserve(entries_.size());
    for (const auto& [key, rate] : entries_)
        out.push_back({key.first, key.second, rate});
    return out;
}

BinnedDemand bin_demand(const std::vector<TripRecord>& trips,
                        double interval_minutes, int intervals) {
    if (interval_minutes <= 0.0) throw std::invalid_argument("interval length must be > 0");
    if (intervals < 1) throw std::invalid_argument("interval count must be >= 1");

    BinnedDemand out;
    out.intervals.resize(static_cast<std::size_t>(intervals));
    const double horizon = interval_minutes * intervals;
    const double interval_hours = interval_minutes / 60.0;

    for (std::size_t idx = 0; idx < trips.size(); ++idx) {
        const TripRecord& t = trips[idx];
        if (t.departure < 0.0 || t.departure >= horizon || t.origin == t.destination ||
            t.count <= 0.0) {
            out.rejected.push_back({idx, t});
            continue;
        }
        auto bin = static_cast<std::size_t>(t.departure / interval_minutes);
        out.intervals[bin].add(t.origin, t.destination, t.count / interval_hours);
    }
    return out;
}

DemandMatrix merge_residual(const DemandMatrix& original,
                            const DemandMatrix& residual) {
    DemandMatrix merged = original;
    for (const auto& [key, rate] : residual.entries())
        merged.add(key.first, key.second, rate);
    return merged;
}

std::vector<DemandPartition> partition_demand(const DemandMatrix& demand,
                                              int workers) {
    if (workers < 1) throw std::invalid_argument("worker count must be >= 1");

    std::vector<OdEntry> entries = demand.sorted_entries();
    const std::size_t n = entries.size();
    const std::size_t m = static_cast<std::size_t>(workers);

    std::vector<DemandPartition> parts(m);
    std::size_t offset = 0;
    for (std::size_t k = 0; k < m; ++k) {
        std::size_t count = n / m + (k < n % m ? 1 : 0);
        parts[k].owner = static_cast<int>(k);
        parts[k].entries.assign(entries.begin() + static_cast<std::ptrdiff_t>(offset),
                                entries.begin() + static_cast<std::ptrdiff_t>(offset + count));
        offset += count;
    }
    return parts;
}

}  // namespace qdta
