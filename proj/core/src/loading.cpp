#include "qdta/loading.hpp"

#include <stdexcept>

namespace qdta {

TruncatedPath truncate_path(const Path& path, const CostVector& costs,
                            double interval_minutes) {
    if (interval_minutes <= 0.0)
        throw std::invalid_argument("interval length must be > 0");

    TruncatedPath out;
    out.full_path = path;

    if (path.links.empty()) {
        out.stop_node = path.nodes.empty() ? -1 : path.nodes.front();
        out.finished = true;
        return out;
    }

    double elapsed = 0.0;
    std::size_t kept = 0;
    for (LinkId a : path.links) {
        if (elapsed >= interval_minutes) break;  // link not entered this interval
        elapsed += costs[static_cast<std::size_t>(a)];
        ++kept;
    }

    out.kept_links = kept;
    out.stop_node = path.nodes[kept];
    out.finished = kept == path.links.size();
    out.forced_progress =
        kept == 1 && !out.finished &&
        costs[static_cast<std::size_t>(path.links.front())] > interval_minutes;
    return out;
}

void add_path_flow(PathFlowMap& flows, const TruncatedPath& path, double rate) {
    if (rate <= 0.0) return;
    PathKey key{path.full_path.nodes, path.stop_node};
    auto [it, inserted] = flows.try_emplace(
        std::move(key), PathFlowEntry{path.full_path, path.kept_links, 0.0});
    it->second.rate += rate;
}

LinkFlowVector path_flows_to_link_flows(const PathFlowMap& flows,
                                        std::size_t link_count) {
    LinkFlowVector out(link_count, 0.0);
    for (const auto& [key, entry] : flows) {
        for (std::size_t j = 0; j < entry.kept_links; ++j) {
            const LinkId a = entry.full_path.links[j];
            if (a < 0 || static_cast<std::size_t>(a) >= link_count)
                throw std::out_of_range("path references invalid link id");
            out[static_cast<std::size_t>(a)] += entry.rate;
        }
    }
    return out;
}

}  // namespace qdta
