#include "qdta/io.hpp"

#include <algorithm>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace qdta {

namespace {

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    std::stringstream ss(line);
    while (std::getline(ss, field, ',')) fields.push_back(field);
    if (!line.empty() && line.back() == ',') fields.emplace_back();
    return fields;
}

[[noreturn]] void fail(const std::string& path, std::size_t line_no,
                       const std::string& what) {
    throw ParseError(path + ":" + std::to_string(line_no) + ": " + what);
}

double parse_double(const std::string& s, const std::string& path,
                    std::size_t line_no) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(s, &pos);
        if (pos != s.size()) fail(path, line_no, "trailing characters in '" + s + "'");
        return v;
    } catch (const ParseError&) {
        throw;
    } catch (const std::exception&) {
        fail(path, line_no, "not a number: '" + s + "'");
    }
}

long parse_long(const std::string& s, const std::string& path, std::size_t line_no) {
    try {
        std::size_t pos = 0;
        const long v = std::stol(s, &pos);
        if (pos != s.size()) fail(path, line_no, "trailing characters in '" + s + "'");
        return v;
    } catch (const ParseError&) {
        throw;
    } catch (const std::exception&) {
        fail(path, line_no, "not an integer: '" + s + "'");
    }
}

std::ifstream open_input(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path);
    return in;
}

std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace

Network read_network_csv(const std::string& path, double bpr_alpha,
                         double bpr_beta) {
    std::ifstream in = open_input(path);
    std::string line;
    std::size_t line_no = 0;
    std::getline(in, line);  // header
    ++line_no;

    std::vector<Link> links;
    NodeId max_node = -1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        const auto fields = split_csv(line);
        if (fields.size() != 7) fail(path, line_no, "expected 7 fields");
        Link a;
        a.id = static_cast<LinkId>(parse_long(fields[0], path, line_no));
        a.tail = static_cast<NodeId>(parse_long(fields[1], path, line_no));
        a.head = static_cast<NodeId>(parse_long(fields[2], path, line_no));
        a.capacity = parse_double(fields[3], path, line_no);
        a.free_flow_time = parse_double(fields[4], path, line_no);
        a.length = parse_double(fields[5], path, line_no);
        a.functional_class = static_cast<int>(parse_long(fields[6], path, line_no));
        if (a.tail < 0 || a.head < 0) fail(path, line_no, "negative node id");
        max_node = std::max({max_node, a.tail, a.head});
        links.push_back(a);
    }
    try {
        return Network(max_node + 1, std::move(links), bpr_alpha, bpr_beta);
    } catch (const std::invalid_argument& e) {
        throw ParseError(path + ": " + e.what());
    }
}

void write_network_csv(const std::string& path, const Network& network) {
    std::string out = "link_id,tail,head,capacity_vph,free_flow_min,length_mi,fclass\n";
    for (const Link& a : network.links()) {
        out += std::to_string(a.id) + ',' + std::to_string(a.tail) + ',' +
               std::to_string(a.head) + ',' + format_double(a.capacity) + ',' +
               format_double(a.free_flow_time) + ',' + format_double(a.length) +
               ',' + std::to_string(a.functional_class) + '\n';
    }
    atomic_write(path, out);
}

std::vector<TripRecord> read_trips_csv(const std::string& path) {
    std::ifstream in = open_input(path);
    std::string line;
    std::size_t line_no = 0;
    std::getline(in, line);
    ++line_no;

    std::vector<TripRecord> trips;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        const auto fields = split_csv(line);
        if (fields.size() != 4) fail(path, line_no, "expected 4 fields");
        TripRecord t;
        t.origin = static_cast<NodeId>(parse_long(fields[0], path, line_no));
        t.destination = static_cast<NodeId>(parse_long(fields[1], path, line_no));
        t.departure = parse_double(fields[2], path, line_no);
        t.count = parse_double(fields[3], path, line_no);
        trips.push_back(t);
    }
    return trips;
}

void write_trips_csv(const std::string& path, const std::vector<TripRecord>& trips) {
    std::string out = "origin,destination,departure_min,count\n";
    for (const TripRecord& t : trips)
        out += std::to_string(t.origin) + ',' + std::to_string(t.destination) + ',' +
               format_double(t.departure) + ',' + format_double(t.count) + '\n';
    atomic_write(path, out);
}

std::vector<DemandMatrix> read_rate_demand_csv(const std::string& path,
                                               int intervals) {
    std::ifstream in = open_input(path);
    std::string line;
    std::size_t line_no = 0;
    std::getline(in, line);
    ++line_no;

    std::vector<DemandMatrix> demand(static_cast<std::size_t>(intervals));
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        const auto fields = split_csv(line);
        if (fields.size() != 4) fail(path, line_no, "expected 4 fields");
        const auto origin = static_cast<NodeId>(parse_long(fields[0], path, line_no));
        const auto destination = static_cast<NodeId>(parse_long(fields[1], path, line_no));
        const long interval = parse_long(fields[2], path, line_no);
        const double rate = parse_double(fields[3], path, line_no);
        if (interval < 0 || interval >= intervals)
            fail(path, line_no, "interval out of range");
        demand[static_cast<std::size_t>(interval)].add(origin, destination, rate);
    }
    return demand;
}

void write_rate_demand_csv(const std::string& path,
                           const std::vector<DemandMatrix>& demand) {
    std::string out = "origin,destination,interval,rate_vph\n";
    for (std::size_t i = 0; i < demand.size(); ++i)
        for (const auto& [od, rate] : demand[i].entries())
            out += std::to_string(od.first) + ',' + std::to_string(od.second) + ',' +
                   std::to_string(i) + ',' + format_double(rate) + '\n';
    atomic_write(path, out);
}

void write_flows_csv(const std::string& path, const Network& network,
                     const LinkFlowVector& flows, const CostVector& costs) {
    std::string out = "link_id,flow_vph,cost_min,voc\n";
    for (std::size_t a = 0; a < flows.size(); ++a)
        out += std::to_string(a) + ',' + format_double(flows[a]) + ',' +
               format_double(costs[a]) + ',' +
               format_double(flows[a] / network.links()[a].capacity) + '\n';
    atomic_write(path, out);
}

LinkFlowVector read_flows_csv(const std::string& path) {
    std::ifstream in = open_input(path);
    std::string line;
    std::size_t line_no = 0;
    std::getline(in, line);
    ++line_no;
    LinkFlowVector flows;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        const auto fields = split_csv(line);
        if (fields.size() != 4) fail(path, line_no, "expected 4 fields");
        flows.push_back(parse_double(fields[1], path, line_no));
    }
    return flows;
}

void write_od_rates_csv(const std::string& path, const DemandMatrix& demand) {
    std::string out = "origin,destination,rate_vph\n";
    for (const auto& [od, rate] : demand.entries())
        out += std::to_string(od.first) + ',' + std::to_string(od.second) + ',' +
               format_double(rate) + '\n';
    atomic_write(path, out);
}

void write_metrics_csv(const std::string& path, const MetricsReport& report) {
    std::string out = "fclass,vmt,avg_voc,vhd,congested_mi\n";
    auto row = [&](const MetricsRow& r, const std::string& label) {
        out += label + ',' + format_double(r.vmt) + ',' + format_double(r.avg_voc) +
               ',' + format_double(r.vhd) + ',' + format_double(r.congested_length) +
               '\n';
    };
    for (const MetricsRow& r : report.per_class)
        row(r, std::to_string(r.functional_class));
    row(report.total, "total");
    atomic_write(path, out);
}

void write_trace_csv(const std::string& path,
                     const std::vector<IntervalResult>& results) {
    std::string out = "interval,iteration,alpha,potential,rel_change,ls_iters\n";
    for (const IntervalResult& r : results) {
        for (std::size_t j = 0; j + 1 < r.potential_trace.size(); ++j) {
            const double prev = r.potential_trace[j];
            const double next = r.potential_trace[j + 1];
            const double rel = prev != 0.0 ? std::abs((prev - next) / prev) : 0.0;
            out += std::to_string(r.interval) + ',' + std::to_string(j) + ',' +
                   format_double(j < r.alphas.size() ? r.alphas[j] : 0.0) + ',' +
                   format_double(next) + ',' + format_double(rel) + ',' +
                   std::to_string(j < r.line_search_iters.size()
                                      ? r.line_search_iters[j] : 0) + '\n';
        }
    }
    atomic_write(path, out);
}

std::string file_digest(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path);
    std::uint64_t hash = 1469598103934665603ULL;
    char buf[4096];
    while (in.read(buf, sizeof(buf)) || in.gcount() > 0) {
        for (std::streamsize i = 0; i < in.gcount(); ++i) {
            hash ^= static_cast<unsigned char>(buf[i]);
            hash *= 1099511628211ULL;
        }
        if (!in) break;
    }
    char hex[17];
    std::snprintf(hex, sizeof(hex), "%016" PRIx64, hash);
    return hex;
}

void atomic_write(const std::string& path, const std::string& content) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw IoError("cannot write " + tmp);
        out << content;
        if (!out) throw IoError("write failed for " + tmp);
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) throw IoError("rename failed for " + path + ": " + ec.message());
}

}  // namespace qdta
