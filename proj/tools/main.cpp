// Scenario runner for the quasi-dynamic traffic assignment engine.
//
//   qdta run --network net.csv --demand trips.csv --interval-min 15 \
//            --intervals 96 --step-size line-search --threads 8 --out results/
//   qdta gen-fixture --kind grid --size 50 --seed 7 --out fixtures/grid50/

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "qdta/engine.hpp"
#include "qdta/fixtures.hpp"
#include "qdta/io.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInputError = 1;
constexpr int kExitSolverFailure = 2;
constexpr int kExitIoError = 3;

struct RunArgs {
    std::string network_path;
    std::string demand_path;
    std::string demand_kind = "trips";  // trips | rate
    std::string mode = "qdta";          // qdta | sta
    std::string step_size = "line-search";
    double interval_min = 15.0;
    int intervals = 1;
    int threads = 1;
    double tol = 1e-4;
    int max_iters = 200;
    double bpr_alpha = 0.15;
    double bpr_beta = 4.0;
    std::string out_dir = "results";
};

nlohmann::json config_json(const RunArgs& args) {
    return {{"network", args.network_path},
            {"demand", args.demand_path},
            {"demand_kind", args.demand_kind},
            {"mode", args.mode},
            {"step_size", args.step_size},
            {"interval_min", args.interval_min},
            {"intervals", args.intervals},
            {"threads", args.threads},
            {"tol", args.tol},
            {"max_iters", args.max_iters},
            {"bpr_alpha", args.bpr_alpha},
            {"bpr_beta", args.bpr_beta},
            {"out", args.out_dir}};
}

int do_run(const RunArgs& args) {
    using namespace qdta;

    const auto t_start = std::chrono::steady_clock::now();

    Network network = read_network_csv(args.network_path, args.bpr_alpha, args.bpr_beta);

    ScenarioConfig config;
    config.interval_minutes = args.interval_min;
    config.intervals = args.intervals;
    config.mode = args.mode == "sta" ? ScenarioConfig::Mode::Sta : ScenarioConfig::Mode::Qdta;
    config.step.kind = args.step_size == "msa" ? StepSizeStrategy::Kind::Msa
                                               : StepSizeStrategy::Kind::ExactLineSearch;
    config.convergence_tol = args.tol;
    config.max_fw_iterations = args.max_iters;
    config.workers = args.threads;

    std::vector<DemandMatrix> demand;
    std::size_t rejected = 0;
    if (args.demand_kind == "rate") {
        demand = read_rate_demand_csv(args.demand_path, args.intervals);
    } else {
        const auto trips = read_trips_csv(args.demand_path);
        BinnedDemand binned = bin_demand(trips, args.interval_min, args.intervals);
        rejected = binned.rejected.size();
        for (const auto& r : binned.rejected)
            std::cerr << "warning: rejected trip record " << r.record_index << "\n";
        demand = std::move(binned.intervals);
    }

    nlohmann::json manifest;
    manifest["config"] = config_json(args);
    manifest["inputs"] = {{"network_digest", file_digest(args.network_path)},
                          {"demand_digest", file_digest(args.demand_path)},
                          {"rejected_trips", rejected}};

    std::filesystem::create_directories(args.out_dir);
    auto out_path = [&](const std::string& name) { return args.out_dir + "/" + name; };

    std::vector<IntervalResult> results;
    DemandMatrix unfinished;
    if (config.mode == ScenarioConfig::Mode::Sta) {
        // Average the binned rates over the whole horizon, no truncation.
        DemandMatrix averaged;
        const double share = 1.0 / config.intervals;
        for (const auto& matrix : demand)
            for (const auto& [od, rate] : matrix.entries())
                averaged.add(od.first, od.second, rate * share);
        results.push_back(run_sta(network, averaged, config));
    } else {
        QdtaRun run = run_qdta(network, demand, config);
        if (run.failed) {
            // Keep whatever intervals completed for post-mortem inspection.
            for (std::size_t i = 0; i < run.intervals.size(); ++i)
                write_flows_csv(out_path("flows_" + std::to_string(i) + ".csv"),
                                network, run.intervals[i].link_flows,
                                run.intervals[i].link_costs);
            std::cerr << "error: solver failed in interval " << run.failed_interval
                      << ": " << run.error << "\n";
            return kExitSolverFailure;
        }
        results = std::move(run.intervals);
        unfinished = std::move(run.unfinished);
    }

    nlohmann::json interval_summaries = nlohmann::json::array();
    std::size_t unroutable_count = 0;
    int total_fw_iters = 0;
    for (const auto& r : results) {
        write_flows_csv(out_path("flows_" + std::to_string(r.interval) + ".csv"),
                        network, r.link_flows, r.link_costs);
        write_od_rates_csv(out_path("residual_" + std::to_string(r.interval) + ".csv"),
                           r.residual_out);
        unroutable_count += r.unroutable.size();
        total_fw_iters += r.fw_iterations;
        int ls_total = 0;
        for (int n : r.line_search_iters) ls_total += n;
        interval_summaries.push_back({{"interval", r.interval},
                                      {"fw_iterations", r.fw_iterations},
                                      {"fw_converged", r.fw_converged},
                                      {"line_search_iterations", ls_total},
                                      {"unroutable", r.unroutable.size()},
                                      {"wall_seconds", r.wall_seconds}});
    }

    const MetricsReport metrics =
        compute_metrics(results, network, args.interval_min);
    write_metrics_csv(out_path("metrics.csv"), metrics);
    write_od_rates_csv(out_path("unfinished.csv"), unfinished);
    write_trace_csv(out_path("trace.csv"), results);

    manifest["intervals"] = interval_summaries;
    manifest["total_fw_iterations"] = total_fw_iters;
    manifest["unroutable_od_pairs"] = unroutable_count;
    manifest["unfinished_od_pairs"] = unfinished.size();
    manifest["system_vehicle_hours"] = metrics.system_vehicle_hours;
    manifest["total_wall_seconds"] =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start)
            .count();
    atomic_write(out_path("summary.json"), manifest.dump(2) + "\n");

    return kExitOk;
}

int do_gen_fixture(const std::string& kind, int size, int trips, unsigned seed,
                   double horizon_min, int hubs, const std::string& out_dir) {
    using namespace qdta;
    Fixture fixture;
    if (kind == "serial") {
        fixture = make_serial_example();
    } else if (kind == "grid") {
        fixture = make_grid(size, trips, seed, horizon_min, hubs);
    } else if (kind == "random") {
        fixture = make_random(size, trips, seed, horizon_min);
    } else {
        std::cerr << "error: unknown fixture kind '" << kind << "'\n";
        return kExitInputError;
    }
    write_fixture(fixture, out_dir);
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Quasi-dynamic traffic assignment engine"};
    app.require_subcommand(1);

    RunArgs run_args;
    CLI::App* run = app.add_subcommand("run", "Run a traffic assignment scenario");
    run->set_config("--config");
    run->add_option("--network", run_args.network_path, "Network CSV")->required();
    run->add_option("--demand", run_args.demand_path, "Demand CSV")->required();
    run->add_option("--demand-kind", run_args.demand_kind, "trips|rate")
        ->check(CLI::IsMember({"trips", "rate"}));
    run->add_option("--mode", run_args.mode, "qdta|sta")
        ->check(CLI::IsMember({"qdta", "sta"}));
    run->add_option("--interval-min", run_args.interval_min, "Interval length, minutes");
    run->add_option("--intervals", run_args.intervals, "Number of intervals");
    run->add_option("--step-size", run_args.step_size, "line-search|msa")
        ->check(CLI::IsMember({"line-search", "msa"}));
    run->add_option("--threads", run_args.threads, "Worker count")
        ->envname("QDTA_THREADS");
    run->add_option("--tol", run_args.tol, "Convergence tolerance T0");
    run->add_option("--max-iters", run_args.max_iters, "Frank-Wolfe iteration cap");
    run->add_option("--bpr-alpha", run_args.bpr_alpha, "BPR alpha");
    run->add_option("--bpr-beta", run_args.bpr_beta, "BPR beta");
    run->add_option("--out", run_args.out_dir, "Output directory");

    std::string fx_kind = "grid";
    int fx_size = 10;
    int fx_trips = 1000;
    unsigned fx_seed = 1;
    double fx_horizon = 60.0;
    int fx_hubs = 0;
    std::string fx_out = "fixture";
    CLI::App* gen = app.add_subcommand("gen-fixture", "Generate a synthetic scenario");
    gen->add_option("--kind", fx_kind, "serial|grid|random")->required();
    gen->add_option("--size", fx_size, "Grid side or node count");
    gen->add_option("--trips", fx_trips, "Trip count");
    gen->add_option("--seed", fx_seed, "RNG seed");
    gen->add_option("--horizon-min", fx_horizon, "Demand horizon, minutes");
    gen->add_option("--hubs", fx_hubs, "Origin/destination hub count (0 = all nodes)");
    gen->add_option("--out", fx_out, "Output directory")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) return do_run(run_args);
        return do_gen_fixture(fx_kind, fx_size, fx_trips, fx_seed, fx_horizon,
                              fx_hubs, fx_out);
    } catch (const qdta::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInputError;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInputError;
    } catch (const qdta::SolverError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitSolverFailure;
    } catch (const qdta::IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIoError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIoError;
    }
}
