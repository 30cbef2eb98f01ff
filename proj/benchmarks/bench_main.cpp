#include <benchmark/benchmark.h>

#include <random>

#include "qdta/assignment.hpp"
#include "qdta/fixtures.hpp"
#include "qdta/router.hpp"

using namespace qdta;

namespace {

Network grid_network(int side) { return build_network(make_grid(side, 0, 7, 60.0)); }

LinkFlowVector random_flows(const Network& net, unsigned seed) {
    std::mt19937 rng(seed);
    LinkFlowVector flows(net.link_count());
    for (std::size_t a = 0; a < flows.size(); ++a) {
        std::uniform_real_distribution<double> dist(
            0.0, 1.5 * net.link(static_cast<LinkId>(a)).capacity);
        flows[a] = dist(rng);
    }
    return flows;
}

void BM_UpdateCosts(benchmark::State& state) {
    const Network net = grid_network(static_cast<int>(state.range(0)));
    const LinkFlowVector flows = random_flows(net, 3);
    for (auto _ : state)
        benchmark::DoNotOptimize(update_costs(net, flows));
    state.SetItemsProcessed(static_cast<int64_t>(state.iterations()) *
                            static_cast<int64_t>(net.link_count()));
}
BENCHMARK(BM_UpdateCosts)->Arg(20)->Arg(60)->Arg(120);

void BM_TotalCost(benchmark::State& state) {
    const Network net = grid_network(static_cast<int>(state.range(0)));
    const LinkFlowVector flows = random_flows(net, 5);
    for (auto _ : state)
        benchmark::DoNotOptimize(total_cost(net, flows));
}
BENCHMARK(BM_TotalCost)->Arg(60)->Arg(120);

void BM_RouterQuery(benchmark::State& state) {
    const Network net = grid_network(static_cast<int>(state.range(0)));
    RoutingIndex index(net);
    index.customize(update_costs(net, LinkFlowVector(net.link_count(), 0.0)));
    std::mt19937 rng(11);
    std::uniform_int_distribution<NodeId> node(0, net.node_count() - 1);
    for (auto _ : state)
        benchmark::DoNotOptimize(index.query(node(rng), node(rng)));
}
BENCHMARK(BM_RouterQuery)->Arg(20)->Arg(60)->Arg(120);

void BM_Customize(benchmark::State& state) {
    const Network net = grid_network(static_cast<int>(state.range(0)));
    RoutingIndex index(net);
    const CostVector costs = update_costs(net, random_flows(net, 9));
    for (auto _ : state) index.customize(costs);
}
BENCHMARK(BM_Customize)->Arg(60)->Arg(120);

void BM_LineSearch(benchmark::State& state) {
    const Network net = grid_network(static_cast<int>(state.range(0)));
    const LinkFlowVector f = random_flows(net, 13);
    const LinkFlowVector aon = random_flows(net, 17);
    for (auto _ : state)
        benchmark::DoNotOptimize(line_search(net, f, aon, 2, StepSizeStrategy{}));
}
BENCHMARK(BM_LineSearch)->Arg(60)->Arg(120);

}  // namespace

BENCHMARK_MAIN();
