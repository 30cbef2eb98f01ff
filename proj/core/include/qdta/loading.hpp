#ifndef QDTA_LOADING_HPP
#define QDTA_LOADING_HPP

#include <compare>
#include <map>
#include <vector>

#include "qdta/network.hpp"
#include "qdta/router.hpp"

namespace qdta {

/// A route cut at the farthest node reachable within one interval. The link
/// in progress when the clock runs out is kept whole: incidence is binary, a
/// link is either loaded in this interval or not.
struct TruncatedPath {
    Path full_path;
    std::size_t kept_links = 0;  // prefix length of full_path.links
    NodeId stop_node = -1;
    bool finished = false;
    // Set when the first link alone exceeds the interval: the trip is loaded
    // and advanced anyway so it cannot stall at its origin forever.
    bool forced_progress = false;
};

/// Canonical PathFlowMap key: the full node sequence plus the stop node.
struct PathKey {
    std::vector<NodeId> nodes;
    NodeId stop_node;

    auto operator<=>(const PathKey&) const = default;
};

struct PathFlowEntry {
    Path full_path;
    std::size_t kept_links = 0;
    double rate = 0.0;  // vehicles/hour
};

/// Sparse map from truncated path to assigned flow rate within one interval.
using PathFlowMap = std::map<PathKey, PathFlowEntry>;

void add_path_flow(PathFlowMap& flows, const TruncatedPath& path, double rate);

/// Walk the path accumulating link costs; keep every link entered before the
/// interval ends. If the whole path fits, the stop node is the destination.
TruncatedPath truncate_path(const Path& path, const CostVector& costs,
                            double interval_minutes);

/// Dense link flows: each path contributes its rate to exactly its kept links.
LinkFlowVector path_flows_to_link_flows(const PathFlowMap& flows,
                                        std::size_t link_count);

}  // namespace qdta

#endif  // QDTA_LOADING_HPP
