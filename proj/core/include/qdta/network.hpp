#ifndef QDTA_NETWORK_HPP
#define QDTA_NETWORK_HPP

#include <cstdint>
#include <string>
#include <vector>

namespace qdta {

using NodeId = std::int32_t;
using LinkId = std::int32_t;

/// Per-link travel times in minutes, indexed by link id.
using CostVector = std::vector<double>;

/// Per-link flow rates in vehicles/hour, indexed by link id.
using LinkFlowVector = std::vector<double>;

struct Link {
    LinkId id = -1;
    NodeId tail = -1;
    NodeId head = -1;
    double capacity = 0.0;        // vehicles/hour
    double free_flow_time = 0.0;  // minutes
    double length = 0.0;          // miles
    int functional_class = 0;     // 1-5, 0 = unknown
};

/// Immutable directed road network with BPR volume-delay parameters.
/// Topology and static attributes never change after construction, so a
/// Network is safe to share read-only across workers.
class Network {
public:
    Network(NodeId node_count, std::vector<Link> links,
            double bpr_alpha = 0.15, double bpr_beta = 4.0);

    NodeId node_count() const { return node_count_; }
    std::size_t link_count() const { return links_.size(); }
    const std::vector<Link>& links() const { return links_; }
    const Link& link(LinkId a) const { return links_[static_cast<std::size_t>(a)]; }

    /// Outgoing link ids of a node.
    const std::vector<LinkId>& out_links(NodeId v) const {
        return adjacency_[static_cast<std::size_t>(v)];
    }

    double bpr_alpha() const { return bpr_alpha_; }
    double bpr_beta() const { return bpr_beta_; }

    /// Nodes with no incident link at all (weak-connectivity warning list).
    const std::vector<NodeId>& isolated_nodes() const { return isolated_nodes_; }

private:
    NodeId node_count_;
    std::vector<Link> links_;
    std::vector<std::vector<LinkId>> adjacency_;
    std::vector<NodeId> isolated_nodes_;
    double bpr_alpha_;
    double bpr_beta_;
};

/// BPR volume-delay curve: c0 * (1 + alpha * (f/C)^beta), minutes.
double bpr_travel_time(const Link& link, double flow,
                       double alpha, double beta);

/// Closed-form integral of the BPR curve from 0 to `flow`:
/// c0 * f * (1 + alpha/(beta+1) * (f/C)^beta).
double link_potential(const Link& link, double flow,
                      double alpha, double beta);

/// Sum of link_potential over all links (the objective the equilibrium
/// solver minimizes). Deterministic summation in link-id order.
double total_cost(const Network& network, const LinkFlowVector& flows);

/// Elementwise BPR travel times for the whole network.
CostVector update_costs(const Network& network, const LinkFlowVector& flows);

/// update_costs restricted to links [begin, end), writing into `out`.
/// Lets workers fill disjoint slices of a shared vector in parallel.
void update_costs_range(const Network& network, const LinkFlowVector& flows,
                        std::size_t begin, std::size_t end, CostVector& out);

}  // namespace qdta

#endif  // QDTA_NETWORK_HPP
