#include "qdta/assignment.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

namespace qdta {

namespace {

constexpr double kPruneRate = 1e-12;  // drop blended path flows below this

// Reductions accumulate fixed-size link blocks in block order, so the result
// is bit-identical for every worker count (workers only pick up blocks).
constexpr std::size_t kReduceBlock = 4096;

double clamp01(double x) { return std::clamp(x, 0.0, 1.0); }

/// Three cost evaluations over one link range, batched.
void probe_range(const Network& network, const LinkFlowVector& flows,
                 const LinkFlowVector& aon_flows, double x0, double x1, double x2,
                 std::size_t begin, std::size_t end, double out[3]) {
    const double alpha = network.bpr_alpha();
    const double beta = network.bpr_beta();
    double s0 = 0.0, s1 = 0.0, s2 = 0.0;
    for (std::size_t a = begin; a < end; ++a) {
        const Link& link = network.links()[a];
        const double f = flows[a];
        const double dir = aon_flows[a] - f;
        s0 += link_potential(link, f + x0 * dir, alpha, beta);
        s1 += link_potential(link, f + x1 * dir, alpha, beta);
        s2 += link_potential(link, f + x2 * dir, alpha, beta);
    }
    out[0] = s0;
    out[1] = s1;
    out[2] = s2;
}

/// Batched evaluation of C at three points as a blocked reduction: per-block
/// partial sums (parallelized by striding workers over blocks) combined in
/// block order, so every worker count produces the same bits.
void evaluate_three(const Network& network, const LinkFlowVector& flows,
                    const LinkFlowVector& aon_flows, double x0, double x1,
                    double x2, WorkerPool* pool,
                    const std::vector<LinkPartition>* partitions, double out[3]) {
    (void)partitions;
    const std::size_t n = flows.size();
    const std::size_t blocks = (n + kReduceBlock - 1) / kReduceBlock;
    std::vector<std::array<double, 3>> partials(std::max<std::size_t>(blocks, 1),
                                                {0.0, 0.0, 0.0});
    auto do_block = [&](std::size_t b) {
        double y[3];
        probe_range(network, flows, aon_flows, x0, x1, x2, b * kReduceBlock,
                    std::min(n, (b + 1) * kReduceBlock), y);
        partials[b] = {y[0], y[1], y[2]};
    };
    if (pool == nullptr || pool->size() == 1 || blocks <= 1) {
        for (std::size_t b = 0; b < blocks; ++b) do_block(b);
    } else {
        const auto m = static_cast<std::size_t>(pool->size());
        pool->run([&](int k) {
            for (std::size_t b = static_cast<std::size_t>(k); b < blocks; b += m)
                do_block(b);
        });
    }
    out[0] = out[1] = out[2] = 0.0;
    for (std::size_t b = 0; b < blocks; ++b) {
        out[0] += partials[b][0];
        out[1] += partials[b][1];
        out[2] += partials[b][2];
    }
}

double evaluate_one(const Network& network, const LinkFlowVector& flows,
                    const LinkFlowVector& aon_flows, double x, WorkerPool* pool,
                    const std::vector<LinkPartition>* partitions) {
    double y[3];
    evaluate_three(network, flows, aon_flows, x, x, x, pool, partitions, y);
    return y[1];
}

/// Bisection on the slope over [0, 1]; used when the Newton iteration is not
/// trustworthy (finite-difference curvature <= 0 or a non-descent result).
double bisect_slope(const Network& network, const LinkFlowVector& flows,
                    const LinkFlowVector& aon_flows, double probe_width,
                    WorkerPool* pool, const std::vector<LinkPartition>* partitions) {
    auto slope_at = [&](double x) {
        return cost_probe(network, flows, aon_flows, x, probe_width, pool, partitions)
            .slope;
    };
    double lo = 0.0, hi = 1.0;
    if (slope_at(lo) >= 0.0) return 0.0;
    if (slope_at(hi) <= 0.0) return 1.0;
    for (int iter = 0; iter < 60 && hi - lo > 1e-10; ++iter) {
        const double mid = 0.5 * (lo + hi);
        if (slope_at(mid) < 0.0)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

}  // namespace

AonResult all_or_nothing(const Network& network, const RoutingIndex& index,
                         double interval_minutes, const DemandPartition& demand) {
    AonResult result;
    result.link_flows.assign(network.link_count(), 0.0);

    // Entries arrive sorted by (origin, destination): one search per origin run.
    std::size_t i = 0;
    const auto& entries = demand.entries;
    while (i < entries.size()) {
        const NodeId origin = entries[i].origin;
        std::size_t j = i;
        std::vector<NodeId> targets;
        while (j < entries.size() && entries[j].origin == origin) {
            targets.push_back(entries[j].destination);
            ++j;
        }
        const auto paths = index.query_from(origin, targets);
        for (std::size_t t = 0; t < targets.size(); ++t) {
            const OdEntry& od = entries[i + t];
            if (!paths[t]) {
                result.unroutable.push_back({od.origin, od.destination, od.rate});
                continue;
            }
            const TruncatedPath truncated =
                truncate_path(*paths[t], index.costs(), interval_minutes);
            add_path_flow(result.path_flows, truncated, od.rate);
        }
        i = j;
    }

    result.link_flows = path_flows_to_link_flows(result.path_flows, network.link_count());
    return result;
}

CostProbe cost_probe(const Network& network, const LinkFlowVector& flows,
                     const LinkFlowVector& aon_flows, double x, double probe_width,
                     WorkerPool* pool, const std::vector<LinkPartition>* partitions) {
    const double dx = probe_width;
    if (dx <= 0.0 || dx >= 0.5) throw std::invalid_argument("bad probe width");
    x = clamp01(x);

    double y[3];
    if (x - dx >= 0.0 && x + dx <= 1.0) {
        evaluate_three(network, flows, aon_flows, x - dx, x, x + dx, pool,
                       partitions, y);
        return {y[1], (y[2] - y[0]) / (2.0 * dx), (y[0] - 2.0 * y[1] + y[2]) / (dx * dx)};
    }
    if (x - dx < 0.0) {
        // Forward one-sided probes at {x, x+dx, x+2dx}.
        evaluate_three(network, flows, aon_flows, x, x + dx, x + 2.0 * dx, pool,
                       partitions, y);
        return {y[0], (-3.0 * y[0] + 4.0 * y[1] - y[2]) / (2.0 * dx),
                (y[0] - 2.0 * y[1] + y[2]) / (dx * dx)};
    }
    // Backward one-sided probes at {x-2dx, x-dx, x}.
    evaluate_three(network, flows, aon_flows, x - 2.0 * dx, x - dx, x, pool,
                   partitions, y);
    return {y[2], (3.0 * y[2] - 4.0 * y[1] + y[0]) / (2.0 * dx),
            (y[0] - 2.0 * y[1] + y[2]) / (dx * dx)};
}

LineSearchResult line_search(const Network& network, const LinkFlowVector& flows,
                             const LinkFlowVector& aon_flows, int fw_iteration,
                             const StepSizeStrategy& strategy, WorkerPool* pool,
                             const std::vector<LinkPartition>* partitions) {
    if (flows.size() != aon_flows.size())
        throw std::invalid_argument("flow vectors differ in length");

    LineSearchResult result;
    double alpha = clamp01(msa_step(fw_iteration));

    for (int l = 0; l < strategy.max_iterations; ++l) {
        ++result.iterations;
        const CostProbe probe = cost_probe(network, flows, aon_flows, alpha,
                                           strategy.probe_width, pool, partitions);
        if (std::abs(probe.slope) < strategy.slope_threshold) break;
        if (probe.curvature <= 0.0) {
            // Finite-difference noise on a (mathematically convex) potential.
            result.used_fallback = true;
            alpha = bisect_slope(network, flows, aon_flows, strategy.probe_width,
                                 pool, partitions);
            break;
        }
        const double alpha_new = clamp01(alpha - probe.slope / probe.curvature);
        if (std::abs(alpha_new - alpha) < strategy.step_threshold) {
            alpha = alpha_new;
            break;
        }
        alpha = alpha_new;
    }

    // The step must never be worse than either endpoint of the segment.
    const double at_alpha =
        evaluate_one(network, flows, aon_flows, alpha, pool, partitions);
    const double at_zero = evaluate_one(network, flows, aon_flows, 0.0, pool, partitions);
    const double at_one = evaluate_one(network, flows, aon_flows, 1.0, pool, partitions);
    const double slack = 1e-12 * std::max(1.0, std::abs(at_zero));
    if (at_alpha > std::min(at_zero, at_one) + slack) {
        result.used_fallback = true;
        alpha = bisect_slope(network, flows, aon_flows, strategy.probe_width, pool,
                             partitions);
    }

    result.alpha = alpha;
    return result;
}

double msa_step(int fw_iteration) {
    return 2.0 / (2.0 + static_cast<double>(fw_iteration));
}

bool converged(double potential_prev, double potential_new, double tolerance) {
    if (!std::isfinite(potential_prev) || !std::isfinite(potential_new))
        throw SolverError("nonfinite potential");
    return std::abs((potential_prev - potential_new) / potential_prev) < tolerance;
}

namespace {

/// h <- h + alpha * (h_aon - h): scale existing entries, fold in the new ones.
void blend_path_flows(PathFlowMap& flows, const PathFlowMap& aon_flows,
                      double alpha) {
    if (alpha >= 1.0) {
        flows = aon_flows;
        return;
    }
    for (auto& [key, entry] : flows) entry.rate *= (1.0 - alpha);
    for (const auto& [key, entry] : aon_flows) {
        auto [it, inserted] = flows.try_emplace(key, entry);
        if (inserted)
            it->second.rate = alpha * entry.rate;
        else
            it->second.rate += alpha * entry.rate;
    }
    std::erase_if(flows, [](const auto& kv) { return kv.second.rate < kPruneRate; });
}

/// Merge per-worker maps in worker-index order. OD pairs are partitioned, so
/// keys never collide across workers.
PathFlowMap merge_worker_maps(std::vector<PathFlowMap>& locals) {
    PathFlowMap merged;
    for (auto& local : locals)
        for (auto& [key, entry] : local) {
            auto [it, inserted] = merged.try_emplace(key, entry);
            if (!inserted) it->second.rate += entry.rate;
        }
    return merged;
}

}  // namespace

FwResult frank_wolfe(const Network& network, RoutingIndex& index,
                     double interval_minutes,
                     const std::vector<DemandPartition>& partitions,
                     const FwOptions& options, WorkerPool& pool) {
    FwResult result;
    const std::size_t link_count = network.link_count();
    const auto link_parts = partition_links(link_count, pool.size());

    bool any_demand = false;
    for (const auto& part : partitions)
        if (!part.entries.empty()) any_demand = true;
    if (!any_demand) {
        result.link_flows.assign(link_count, 0.0);
        result.iterations = 1;
        result.potential_trace = {0.0};
        return result;
    }

    CostVector costs(link_count);
    LinkFlowVector zero_flows(link_count, 0.0);

    // Phase helper: parallel cost update over link partitions, then exclusive
    // customization (the routing index has a single writer).
    auto refresh_costs = [&](const LinkFlowVector& flows) {
        pool.run([&](int k) {
            const LinkPartition& part = link_parts[static_cast<std::size_t>(k)];
            update_costs_range(network, flows, part.begin, part.end, costs);
        });
        index.customize(costs);
    };

    // All-or-nothing phase. Link flows are derived from the merged path map
    // (key-ordered std::map), not from per-worker partial sums, so the bits do
    // not depend on the worker count.
    std::vector<AonResult> locals(partitions.size());
    PathFlowMap aon_map;
    auto parallel_aon = [&]() -> LinkFlowVector {
        pool.run([&](int k) {
            locals[static_cast<std::size_t>(k)] = all_or_nothing(
                network, index, interval_minutes, partitions[static_cast<std::size_t>(k)]);
        });
        std::vector<PathFlowMap> maps(locals.size());
        for (std::size_t k = 0; k < locals.size(); ++k)
            maps[k] = std::move(locals[k].path_flows);
        aon_map = merge_worker_maps(maps);
        return path_flows_to_link_flows(aon_map, link_count);
    };

    // Blocked potential reduction: per-block partials combined in block order,
    // bit-identical for every worker count.
    const std::size_t blocks = (link_count + kReduceBlock - 1) / kReduceBlock;
    std::vector<double> block_sums(std::max<std::size_t>(blocks, 1), 0.0);
    auto parallel_potential = [&](const LinkFlowVector& flows) {
        auto do_block = [&](std::size_t b) {
            const std::size_t end = std::min(link_count, (b + 1) * kReduceBlock);
            double sum = 0.0;
            for (std::size_t a = b * kReduceBlock; a < end; ++a)
                sum += link_potential(network.links()[a], flows[a],
                                      network.bpr_alpha(), network.bpr_beta());
            block_sums[b] = sum;
        };
        if (pool.size() == 1 || blocks <= 1) {
            for (std::size_t b = 0; b < blocks; ++b) do_block(b);
        } else {
            const auto m = static_cast<std::size_t>(pool.size());
            pool.run([&](int k) {
                for (std::size_t b = static_cast<std::size_t>(k); b < blocks; b += m)
                    do_block(b);
            });
        }
        double total = 0.0;
        for (std::size_t b = 0; b < blocks; ++b) total += block_sums[b];
        return total;
    };

    // Initial all-or-nothing at free-flow costs.
    refresh_costs(zero_flows);
    LinkFlowVector flows = parallel_aon();
    for (const auto& local : locals)
        result.unroutable.insert(result.unroutable.end(), local.unroutable.begin(),
                                 local.unroutable.end());
    PathFlowMap path_flows = aon_map;

    double potential = parallel_potential(flows);
    result.potential_trace.push_back(potential);
    if (potential <= 0.0) {
        // All routable demand truncated to nothing; nothing to iterate on.
        result.link_flows = std::move(flows);
        result.path_flows = std::move(path_flows);
        result.iterations = 1;
        return result;
    }

    result.converged = false;
    for (int j = 0; j < options.max_iterations; ++j) {
        refresh_costs(flows);
        const LinkFlowVector aon_flows = parallel_aon();

        double alpha;
        int ls_iters = 0;
        if (options.step.kind == StepSizeStrategy::Kind::ExactLineSearch) {
            const LineSearchResult ls = line_search(network, flows, aon_flows, j,
                                                    options.step, &pool, &link_parts);
            alpha = ls.alpha;
            ls_iters = ls.iterations;
        } else {
            alpha = msa_step(j);
        }

        pool.run([&](int k) {
            const LinkPartition& part = link_parts[static_cast<std::size_t>(k)];
            for (std::size_t a = part.begin; a < part.end; ++a)
                flows[a] += alpha * (aon_flows[a] - flows[a]);
        });
        blend_path_flows(path_flows, aon_map, alpha);

        const double new_potential = parallel_potential(flows);
        result.potential_trace.push_back(new_potential);
        result.alphas.push_back(alpha);
        result.line_search_iters.push_back(ls_iters);
        result.iterations = j + 1;

        if (converged(potential, new_potential, options.convergence_tol)) {
            result.converged = true;
            break;
        }
        potential = new_potential;
    }

    result.link_flows = std::move(flows);
    result.path_flows = std::move(path_flows);
    return result;
}

}  // namespace qdta
