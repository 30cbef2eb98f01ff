#ifndef QDTA_ASSIGNMENT_HPP
#define QDTA_ASSIGNMENT_HPP

#include <stdexcept>
#include <vector>

#include "qdta/demand.hpp"
#include "qdta/exec.hpp"
#include "qdta/loading.hpp"
#include "qdta/network.hpp"
#include "qdta/router.hpp"

namespace qdta {

struct SolverError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct StepSizeStrategy {
    enum class Kind { ExactLineSearch, Msa };

    Kind kind = Kind::ExactLineSearch;
    int max_iterations = 20;       // L
    double slope_threshold = 1e-4; // T1
    double step_threshold = 1e-4;  // T2
    double probe_width = 1e-4;     // delta-x for finite differences
};

struct UnroutableOd {
    NodeId origin;
    NodeId destination;
    double rate;
};

struct AonResult {
    PathFlowMap path_flows;       // this worker's loaded (truncated) paths
    LinkFlowVector link_flows;    // local link flows from those paths
    std::vector<UnroutableOd> unroutable;
};

/// All-or-nothing loading of one demand partition: shortest path per OD
/// entry at the index's current costs, truncated to the interval, whole rate
/// on the truncated path. Queries sharing an origin reuse one search.
AonResult all_or_nothing(const Network& network, const RoutingIndex& index,
                         double interval_minutes,
                         const DemandPartition& demand);

struct CostProbe {
    double value = 0.0;      // C(x)
    double slope = 0.0;      // C'(x)
    double curvature = 0.0;  // C''(x)
};

/// Evaluate the potential along the segment f + x*(f_aon - f) together with
/// central-difference derivatives, as one batched link-partitioned reduction.
/// Probes that would leave [0, 1] fall back to one-sided differences.
/// Pass pool = nullptr to evaluate serially.
CostProbe cost_probe(const Network& network, const LinkFlowVector& flows,
                     const LinkFlowVector& aon_flows, double x, double probe_width,
                     WorkerPool* pool = nullptr,
                     const std::vector<LinkPartition>* partitions = nullptr);

struct LineSearchResult {
    double alpha = 0.0;
    int iterations = 0;
    bool used_fallback = false;  // bisection on the slope instead of Newton
};

/// Quasi-Newton search for the step size minimizing the potential along the
/// Frank-Wolfe segment, seeded at 2/(2+j) and clamped to [0, 1].
LineSearchResult line_search(const Network& network, const LinkFlowVector& flows,
                             const LinkFlowVector& aon_flows, int fw_iteration,
                             const StepSizeStrategy& strategy,
                             WorkerPool* pool = nullptr,
                             const std::vector<LinkPartition>* partitions = nullptr);

/// Method of successive averages schedule: 2/(2+j).
double msa_step(int fw_iteration);

/// Relative absolute change in the potential below tolerance.
bool converged(double potential_prev, double potential_new, double tolerance);

struct FwOptions {
    StepSizeStrategy step;
    double convergence_tol = 1e-4;  // T0
    int max_iterations = 200;
};

struct FwResult {
    PathFlowMap path_flows;    // merged over workers; keys are worker-disjoint
    LinkFlowVector link_flows;
    int iterations = 0;
    bool converged = true;
    std::vector<double> potential_trace;   // after the initial AON and each blend
    std::vector<double> alphas;
    std::vector<int> line_search_iters;
    std::vector<UnroutableOd> unroutable;
};

/// Frank-Wolfe user-equilibrium solver for one interval. Bulk-synchronous:
/// parallel cost update, exclusive customize, parallel all-or-nothing over
/// demand partitions with a deterministic reduction, step size, blend.
FwResult frank_wolfe(const Network& network, RoutingIndex& index,
                     double interval_minutes,
                     const std::vector<DemandPartition>& partitions,
                     const FwOptions& options, WorkerPool& pool);

}  // namespace qdta

#endif  // QDTA_ASSIGNMENT_HPP
