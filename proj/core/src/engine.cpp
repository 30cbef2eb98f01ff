#include "qdta/engine.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <map>

#include "qdta/router.hpp"

namespace qdta {

namespace {

FwOptions fw_options(const ScenarioConfig& config) {
    FwOptions opts;
    opts.step = config.step;
    opts.convergence_tol = config.convergence_tol;
    opts.max_iterations = config.max_fw_iterations;
    return opts;
}

double horizon_hours(const ScenarioConfig& config) {
    return config.interval_minutes * config.intervals / 60.0;
}

}  // namespace

std::pair<PathFlowMap, DemandMatrix> residual_demand(
    const Network& network, double interval_minutes,
    const PathFlowMap& converged_path_flows, const CostVector& converged_costs,
    WorkerPool& pool) {
    (void)network;

    // Workers truncate path entries independently into an index-addressed
    // scratch vector; the ledgers are then accumulated serially in key order,
    // so the result does not depend on the worker count.
    std::vector<const PathFlowEntry*> entries;
    entries.reserve(converged_path_flows.size());
    for (const auto& [key, entry] : converged_path_flows) entries.push_back(&entry);

    const auto n = entries.size();
    const auto m = static_cast<std::size_t>(pool.size());
    std::vector<TruncatedPath> truncated(n);

    pool.run([&](int k) {
        const auto kk = static_cast<std::size_t>(k);
        for (std::size_t i = n * kk / m; i < n * (kk + 1) / m; ++i)
            truncated[i] = truncate_path(entries[i]->full_path, converged_costs,
                                         interval_minutes);
    });

    PathFlowMap truncated_flows;
    DemandMatrix residual;
    for (std::size_t i = 0; i < n; ++i) {
        add_path_flow(truncated_flows, truncated[i], entries[i]->rate);
        if (!truncated[i].finished)
            residual.add(truncated[i].stop_node, entries[i]->full_path.nodes.back(),
                         entries[i]->rate);
    }
    return {std::move(truncated_flows), std::move(residual)};
}

QdtaRun run_qdta(const Network& network,
                 const std::vector<DemandMatrix>& original_demand,
                 const ScenarioConfig& config) {
    if (config.intervals < 1 || config.interval_minutes <= 0.0 || config.workers < 1)
        throw std::invalid_argument("invalid scenario configuration");
    if (original_demand.size() != static_cast<std::size_t>(config.intervals))
        throw std::invalid_argument("demand interval count != configured intervals");

    QdtaRun run;
    WorkerPool pool(config.workers);
    RoutingIndex index(network, config.router_backend);
    DemandMatrix residual;  // d^r(0) is empty

    for (int i = 0; i < config.intervals; ++i) {
        const auto start = std::chrono::steady_clock::now();
        const DemandMatrix demand =
            merge_residual(original_demand[static_cast<std::size_t>(i)], residual);
        const auto partitions = partition_demand(demand, config.workers);

        IntervalResult result;
        result.interval = i;
        try {
            FwResult fw = frank_wolfe(network, index, config.interval_minutes,
                                      partitions, fw_options(config), pool);
            result.link_flows = std::move(fw.link_flows);
            result.link_costs = update_costs(network, result.link_flows);
            result.fw_iterations = fw.iterations;
            result.fw_converged = fw.converged;
            result.potential_trace = std::move(fw.potential_trace);
            result.alphas = std::move(fw.alphas);
            result.line_search_iters = std::move(fw.line_search_iters);
            result.unroutable = std::move(fw.unroutable);

            auto [truncated, next_residual] =
                residual_demand(network, config.interval_minutes, fw.path_flows,
                                result.link_costs, pool);
            result.path_flows = std::move(truncated);
            result.residual_out = next_residual;
            residual = std::move(next_residual);
        } catch (const SolverError& e) {
            run.failed = true;
            run.failed_interval = i;
            run.error = e.what();
            return run;
        }

        result.wall_seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
                .count();
        run.intervals.push_back(std::move(result));
    }

    run.unfinished = std::move(residual);
    return run;
}

QdtaRun run_qdta(const Network& network, const std::vector<TripRecord>& trips,
                 const ScenarioConfig& config) {
    const BinnedDemand binned =
        bin_demand(trips, config.interval_minutes, config.intervals);
    return run_qdta(network, binned.intervals, config);
}

IntervalResult run_sta(const Network& network, const DemandMatrix& averaged_demand,
                       const ScenarioConfig& config) {
    if (config.workers < 1) throw std::invalid_argument("invalid scenario configuration");

    const auto start = std::chrono::steady_clock::now();
    WorkerPool pool(config.workers);
    RoutingIndex index(network, config.router_backend);
    const auto partitions = partition_demand(averaged_demand, config.workers);

    constexpr double kNoTruncation = std::numeric_limits<double>::infinity();
    FwResult fw = frank_wolfe(network, index, kNoTruncation, partitions,
                              fw_options(config), pool);

    IntervalResult result;
    result.interval = 0;
    result.link_flows = std::move(fw.link_flows);
    result.link_costs = update_costs(network, result.link_flows);
    result.path_flows = std::move(fw.path_flows);
    result.fw_iterations = fw.iterations;
    result.fw_converged = fw.converged;
    result.potential_trace = std::move(fw.potential_trace);
    result.alphas = std::move(fw.alphas);
    result.line_search_iters = std::move(fw.line_search_iters);
    result.unroutable = std::move(fw.unroutable);
    result.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return result;
}

IntervalResult run_sta(const Network& network, const std::vector<TripRecord>& trips,
                       const ScenarioConfig& config) {
    const BinnedDemand binned =
        bin_demand(trips, config.interval_minutes, config.intervals);
    // Total vehicles per OD pair spread evenly over the whole horizon.
    DemandMatrix averaged;
    const double interval_hours = config.interval_minutes / 60.0;
    const double hours = horizon_hours(config);
    for (const auto& matrix : binned.intervals)
        for (const auto& [od, rate] : matrix.entries())
            averaged.add(od.first, od.second, rate * interval_hours / hours);
    return run_sta(network, averaged, config);
}

std::vector<LinkId> congested_links(const Network& network,
                                    const LinkFlowVector& flows, double threshold) {
    std::vector<LinkId> out;
    for (std::size_t a = 0; a < flows.size(); ++a)
        if (flows[a] / network.links()[a].capacity >= threshold)
            out.push_back(static_cast<LinkId>(a));
    return out;
}

MetricsReport compute_metrics(const std::vector<IntervalResult>& results,
                              const Network& network, double interval_minutes,
                              double congestion_threshold) {
    if (results.empty()) throw std::invalid_argument("no interval results");
    const double interval_hours = interval_minutes / 60.0;

    struct Accum {
        double vmt = 0.0;
        double vhd = 0.0;
        double voc_sum = 0.0;
        std::size_t voc_count = 0;
        double peak_congested = 0.0;
    };
    std::map<int, Accum> per_class;
    Accum total;
    double system_vh = 0.0;

    for (const auto& result : results) {
        std::map<int, double> congested_now;
        double congested_now_total = 0.0;
        for (std::size_t a = 0; a < result.link_flows.size(); ++a) {
            const Link& link = network.links()[a];
            const double f = result.link_flows[a];
            const double c = result.link_costs[a];
            const double voc = f / link.capacity;
            Accum& acc = per_class[link.functional_class];

            const double vmt = f * link.length * interval_hours;
            const double vhd = f * (c - link.free_flow_time) / 60.0 * interval_hours;
            acc.vmt += vmt;
            total.vmt += vmt;
            acc.vhd += vhd;
            total.vhd += vhd;
            system_vh += f * c / 60.0 * interval_hours;
            if (f > 0.0) {
                acc.voc_sum += voc;
                ++acc.voc_count;
                total.voc_sum += voc;
                ++total.voc_count;
            }
            if (voc >= congestion_threshold) {
                congested_now[link.functional_class] += link.length;
                congested_now_total += link.length;
            }
        }
        (void)congested_now_total;
        for (const auto& [fc, length] : congested_now)
            per_class[fc].peak_congested = std::max(per_class[fc].peak_congested, length);
    }

    MetricsReport report;
    for (const auto& [fc, acc] : per_class) {
        MetricsRow row;
        row.functional_class = fc;
        row.vmt = acc.vmt;
        row.vhd = acc.vhd;
        row.avg_voc = acc.voc_count > 0 ? acc.voc_sum / static_cast<double>(acc.voc_count) : 0.0;
        row.congested_length = acc.peak_congested;
        report.per_class.push_back(row);
    }
    report.total.functional_class = -1;
    report.total.vmt = total.vmt;
    report.total.vhd = total.vhd;
    report.total.avg_voc =
        total.voc_count > 0 ? total.voc_sum / static_cast<double>(total.voc_count) : 0.0;
    for (const auto& row : report.per_class)
        report.total.congested_length += row.congested_length;
    report.system_vehicle_hours = system_vh;
    return report;
}

}  // namespace qdta
