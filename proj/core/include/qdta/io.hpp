#ifndef QDTA_IO_HPP
#define QDTA_IO_HPP

#include <stdexcept>
#include <string>
#include <vector>

#include "qdta/demand.hpp"
#include "qdta/engine.hpp"
#include "qdta/network.hpp"

namespace qdta {

/// Malformed input file; message carries file and line.
struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Network CSV: link_id,tail,head,capacity_vph,free_flow_min,length_mi,fclass
Network read_network_csv(const std::string& path, double bpr_alpha = 0.15,
                         double bpr_beta = 4.0);
void write_network_csv(const std::string& path, const Network& network);

// Trip CSV: origin,destination,departure_min,count
std::vector<TripRecord> read_trips_csv(const std::string& path);
void write_trips_csv(const std::string& path, const std::vector<TripRecord>& trips);

// Rate CSV: origin,destination,interval,rate_vph
std::vector<DemandMatrix> read_rate_demand_csv(const std::string& path,
                                               int intervals);
void write_rate_demand_csv(const std::string& path,
                           const std::vector<DemandMatrix>& demand);

// Per-interval flows: link_id,flow_vph,cost_min,voc. Values round-trip exactly.
void write_flows_csv(const std::string& path, const Network& network,
                     const LinkFlowVector& flows, const CostVector& costs);
LinkFlowVector read_flows_csv(const std::string& path);

// origin,destination,rate_vph
void write_od_rates_csv(const std::string& path, const DemandMatrix& demand);

void write_metrics_csv(const std::string& path, const MetricsReport& report);

// interval,iteration,alpha,potential,rel_change,ls_iters
void write_trace_csv(const std::string& path,
                     const std::vector<IntervalResult>& results);

/// FNV-1a 64-bit content digest, hex-encoded.
std::string file_digest(const std::string& path);

/// Write through a temp file in the same directory, then rename into place.
void atomic_write(const std::string& path, const std::string& content);

}  // namespace qdta

#endif  // QDTA_IO_HPP
