#include "qdta/network.hpp"

#include <cmath>
#include <stdexcept>

namespace qdta {

Network::Network(NodeId node_count, std::vector<Link> links,
                 double bpr_alpha, double bpr_beta)
    : node_count_(node_count),
      links_(std::move(links)),
      bpr_alpha_(bpr_alpha),
      bpr_beta_(bpr_beta) {
    if (node_count_ < 0) throw std::invalid_argument("negative node count");
    if (bpr_alpha_ <= 0.0) throw std::invalid_argument("bpr alpha must be > 0");
    if (bpr_beta_ < 1.0) throw std::invalid_argument("bpr beta must be >= 1");

    adjacency_.assign(static_cast<std::size_t>(node_count_), {});
    std::vector<char> touched(static_cast<std::size_t>(node_count_), 0);
    for (std::size_t i = 0; i < links_.size(); ++i) {
        const Link& a = links_[i];
        if (a.id != static_cast<LinkId>(i))
            throw std::invalid_argument("link ids must be dense and in order");
        if (a.tail < 0 || a.tail >= node_count_ || a.head < 0 || a.head >= node_count_)
            throw std::invalid_argument("dangling link endpoint on link " + std::to_string(a.id));
        if (a.tail == a.head)
            throw std::invalid_argument("self-loop link " + std::to_string(a.id));
        if (a.capacity <= 0.0)
            throw std::invalid_argument("nonpositive capacity on link " + std::to_string(a.id));
        if (a.free_flow_time <= 0.0)
            throw std::invalid_argument("nonpositive free-flow time on link " + std::to_string(a.id));
        if (a.length < 0.0)
            throw std::invalid_argument("negative length on link " + std::to_string(a.id));
        adjacency_[static_cast<std::size_t>(a.tail)].push_back(a.id);
        touched[static_cast<std::size_t>(a.tail)] = 1;
        touched[static_cast<std::size_t>(a.head)] = 1;
    }
    for (NodeId v = 0; v < node_count_; ++v)
        if (!touched[static_cast<std::size_t>(v)]) isolated_nodes_.push_back(v);
}

namespace {

// (f/C)^beta dominates the solver's hot loops; the default beta = 4 takes the
// two-multiply path instead of std::pow.
inline double voc_pow(double ratio, double beta) {
    if (beta == 4.0) {
        const double r2 = ratio * ratio;
        return r2 * r2;
    }
    return std::pow(ratio, beta);
}

}  // namespace

double bpr_travel_time(const Link& link, double flow, double alpha, double beta) {
    if (flow < 0.0) throw std::domain_error("negative flow");
    return link.free_flow_time *
           (1.0 + alpha * voc_pow(flow / link.capacity, beta));
}

double link_potential(const Link& link, double flow, double alpha, double beta) {
    if (flow < 0.0) throw std::domain_error("negative flow");
    return link.free_flow_time * flow *
           (1.0 + alpha / (beta + 1.0) * voc_pow(flow / link.capacity, beta));
}

double total_cost(const Network& network, const LinkFlowVector& flows) {
    if (flows.size() != network.link_count())
        throw std::invalid_argument("flow vector length != link count");
    double sum = 0.0;
    for (std::size_t a = 0; a < flows.size(); ++a)
        sum += link_potential(network.links()[a], flows[a],
                              network.bpr_alpha(), network.bpr_beta());
    return sum;
}

CostVector update_costs(const Network& network, const LinkFlowVector& flows) {
    if (flows.size() != network.link_count())
        throw std::invalid_argument("flow vector length != link count");
    CostVector costs(flows.size());
    update_costs_range(network, flows, 0, flows.size(), costs);
    return costs;
}

void update_costs_range(const Network& network, const LinkFlowVector& flows,
                        std::size_t begin, std::size_t end, CostVector& out) {
    for (std::size_t a = begin; a < end; ++a)
        out[a] = bpr_travel_time(network.links()[a], flows[a],
                                 network.bpr_alpha(), network.bpr_beta());
}

}  // namespace qdta
