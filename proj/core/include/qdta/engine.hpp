#ifndef QDTA_ENGINE_HPP
#define QDTA_ENGINE_HPP

#include <optional>
#include <string>
#include <vector>

#include "qdta/assignment.hpp"
#include "qdta/demand.hpp"
#include "qdta/network.hpp"

namespace qdta {

struct ScenarioConfig {
    enum class Mode { Qdta, Sta };

    double interval_minutes = 15.0;
    int intervals = 1;
    Mode mode = Mode::Qdta;
    StepSizeStrategy step;
    double convergence_tol = 1e-4;  // T0
    int max_fw_iterations = 200;
    int workers = 1;
    RouterBackend router_backend = RouterBackend::Accelerated;
};

struct IntervalResult {
    int interval = 0;
    LinkFlowVector link_flows;   // converged Frank-Wolfe link flows
    CostVector link_costs;       // BPR costs at those flows
    PathFlowMap path_flows;      // h(i): re-truncated at converged costs
    DemandMatrix residual_out;   // d^r(i+1); empty in STA mode
    int fw_iterations = 0;
    bool fw_converged = true;
    std::vector<double> potential_trace;
    std::vector<double> alphas;
    std::vector<int> line_search_iters;
    std::vector<UnroutableOd> unroutable;
    double wall_seconds = 0.0;
};

struct QdtaRun {
    std::vector<IntervalResult> intervals;
    DemandMatrix unfinished;  // residual demand left after the last interval
    bool failed = false;
    int failed_interval = -1;
    std::string error;
};

/// Final route truncation at converged costs: accumulates the traversed part
/// of every path into the interval's path flows and books the remainder as
/// next-interval residual demand, origin moved to the stop node.
std::pair<PathFlowMap, DemandMatrix> residual_demand(
    const Network& network, double interval_minutes,
    const PathFlowMap& converged_path_flows, const CostVector& converged_costs,
    WorkerPool& pool);

/// The QDTA time loop: per-interval Frank-Wolfe linked by residual demand.
/// Intervals run strictly in order; parallelism lives inside each interval.
/// On a solver failure the run stops with the failing interval recorded and
/// all completed intervals preserved.
QdtaRun run_qdta(const Network& network,
                 const std::vector<DemandMatrix>& original_demand,
                 const ScenarioConfig& config);
QdtaRun run_qdta(const Network& network, const std::vector<TripRecord>& trips,
                 const ScenarioConfig& config);

/// Single-interval baseline: all demand averaged over the whole horizon, no
/// route truncation (every path is loaded end to end).
IntervalResult run_sta(const Network& network, const std::vector<TripRecord>& trips,
                       const ScenarioConfig& config);
IntervalResult run_sta(const Network& network, const DemandMatrix& averaged_demand,
                       const ScenarioConfig& config);

struct MetricsRow {
    int functional_class = 0;    // 0 = unknown
    double vmt = 0.0;            // vehicle-miles traveled
    double avg_voc = 0.0;        // mean VOC over link-intervals with flow > 0
    double vhd = 0.0;            // vehicle-hours of delay
    double congested_length = 0.0;  // peak per-interval congested miles
};

struct MetricsReport {
    std::vector<MetricsRow> per_class;  // ascending functional class
    MetricsRow total;
    double system_vehicle_hours = 0.0;  // sum f*c*(dt/60)/60 over link-intervals
};

/// Link ids with flow/capacity >= threshold in one flow snapshot.
std::vector<LinkId> congested_links(const Network& network,
                                    const LinkFlowVector& flows,
                                    double threshold = 1.0);

MetricsReport compute_metrics(const std::vector<IntervalResult>& results,
                              const Network& network, double interval_minutes,
                              double congestion_threshold = 1.0);

}  // namespace qdta

#endif  // QDTA_ENGINE_HPP
