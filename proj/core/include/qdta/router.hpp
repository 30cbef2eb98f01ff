#ifndef QDTA_ROUTER_HPP
#define QDTA_ROUTER_HPP

#include <cstdint>
#include <optional>
#include <vector>

#include "qdta/network.hpp"

namespace qdta {

struct Path {
    std::vector<NodeId> nodes;   // r_0 .. r_{len-1}
    std::vector<LinkId> links;   // one fewer than nodes
    double total_cost = 0.0;     // minutes, at the query's generation
};

/// Selects the query engine. Accelerated uses a CSR adjacency with
/// single-source batching and target-count early exit; Reference is a plain
/// textbook label-setting search over the Network adjacency, kept as an
/// always-available correctness baseline.
enum class RouterBackend { Accelerated, Reference };

/// Two-phase shortest-path engine: preprocess topology once, customize with a
/// cost vector per solver iteration, then run any number of concurrent
/// read-only queries. Customization must not overlap with in-flight queries;
/// the solver enforces that barrier.
class RoutingIndex {
public:
    explicit RoutingIndex(const Network& network,
                          RouterBackend backend = RouterBackend::Accelerated);

    /// Install a new cost snapshot. Costs must be strictly positive.
    void customize(const CostVector& costs);

    std::uint64_t generation() const { return generation_; }
    bool customized() const { return generation_ > 0; }
    RouterBackend backend() const { return backend_; }
    const Network& network() const { return *network_; }
    const CostVector& costs() const { return costs_; }

    /// Minimum-cost path from p to q, or nullopt when unreachable.
    /// Exact cost ties are resolved deterministically (toward the smaller
    /// incoming link id), so repeated runs give identical paths.
    std::optional<Path> query(NodeId p, NodeId q) const;

    /// One single-source search serving many destinations; result[i]
    /// corresponds to targets[i]. Equivalent to calling query per target.
    std::vector<std::optional<Path>> query_from(
        NodeId p, const std::vector<NodeId>& targets) const;

private:
    struct SearchResult;
    SearchResult search(NodeId source, const std::vector<NodeId>& targets) const;
    SearchResult search_reference(NodeId source, const std::vector<NodeId>& targets) const;
    std::optional<Path> unpack(const SearchResult& res, NodeId p, NodeId q) const;

    const Network* network_;
    RouterBackend backend_;
    std::uint64_t generation_ = 0;
    CostVector costs_;

    // CSR adjacency, built once in the constructor (topology preprocessing).
    std::vector<std::int32_t> csr_offsets_;
    std::vector<NodeId> csr_heads_;
    std::vector<LinkId> csr_links_;
};

}  // namespace qdta

#endif  // QDTA_ROUTER_HPP
