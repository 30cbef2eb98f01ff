#include "qdta/router.hpp"

#include <algorithm>
#include <limits>
#include <queue>
#include <stdexcept>

namespace qdta {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

struct RoutingIndex::SearchResult {
    std::vector<double> dist;
    std::vector<LinkId> parent_link;  // -1 at source / unreached nodes
};

RoutingIndex::RoutingIndex(const Network& network, RouterBackend backend)
    : network_(&network), backend_(backend) {
    const auto n = static_cast<std::size_t>(network.node_count());
    csr_offsets_.assign(n + 1, 0);
    for (NodeId v = 0; v < network.node_count(); ++v)
        csr_offsets_[static_cast<std::size_t>(v) + 1] =
            csr_offsets_[static_cast<std::size_t>(v)] +
            static_cast<std::int32_t>(network.out_links(v).size());
    csr_heads_.resize(network.link_count());
    csr_links_.resize(network.link_count());
    std::size_t pos = 0;
    for (NodeId v = 0; v < network.node_count(); ++v) {
        // Sorted out-link order makes relaxation order, and thus tie
        // resolution, independent of input link ordering quirks.
        std::vector<LinkId> out = network.out_links(v);
        std::sort(out.begin(), out.end());
        for (LinkId a : out) {
            csr_heads_[pos] = network.link(a).head;
            csr_links_[pos] = a;
            ++pos;
        }
    }
}

void RoutingIndex::customize(const CostVector& costs) {
    if (costs.size() != network_->link_count())
        throw std::invalid_argument("cost vector length != link count");
    for (double c : costs)
        if (!(c > 0.0))
            throw std::domain_error("nonpositive link weight breaks shortest-path search");
    costs_ = costs;
    ++generation_;
}

RoutingIndex::SearchResult RoutingIndex::search(
    NodeId source, const std::vector<NodeId>& targets) const {
    const auto n = static_cast<std::size_t>(network_->node_count());
    SearchResult res;
    res.dist.assign(n, kInf);
    res.parent_link.assign(n, -1);

    std::vector<char> pending(n, 0);  // unsettled targets
    std::size_t remaining = 0;
    for (NodeId q : targets) {
        if (!pending[static_cast<std::size_t>(q)] && q != source) {
            pending[static_cast<std::size_t>(q)] = 1;
            ++remaining;
        }
    }

    using Item = std::pair<double, NodeId>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
    std::vector<char> settled(n, 0);

    res.dist[static_cast<std::size_t>(source)] = 0.0;
    heap.push({0.0, source});

    while (!heap.empty() && remaining > 0) {
        auto [d, u] = heap.top();
        heap.pop();
        const auto ui = static_cast<std::size_t>(u);
        if (settled[ui] || d > res.dist[ui]) continue;
        settled[ui] = 1;
        if (pending[ui]) {
            pending[ui] = 0;
            --remaining;
        }
        for (std::int32_t e = csr_offsets_[ui]; e < csr_offsets_[ui + 1]; ++e) {
            const auto vi = static_cast<std::size_t>(csr_heads_[static_cast<std::size_t>(e)]);
            if (settled[vi]) continue;
            const LinkId a = csr_links_[static_cast<std::size_t>(e)];
            const double nd = d + costs_[static_cast<std::size_t>(a)];
            if (nd < res.dist[vi]) {
                res.dist[vi] = nd;
                res.parent_link[vi] = a;
                heap.push({nd, csr_heads_[static_cast<std::size_t>(e)]});
            } else if (nd == res.dist[vi] && a < res.parent_link[vi]) {
                res.parent_link[vi] = a;  // deterministic tie resolution
            }
        }
    }
    return res;
}

RoutingIndex::SearchResult RoutingIndex::search_reference(
    NodeId source, const std::vector<NodeId>& targets) const {
    (void)targets;  // the baseline always labels the full reachable set
    const auto n = static_cast<std::size_t>(network_->node_count());
    SearchResult res;
    res.dist.assign(n, kInf);
    res.parent_link.assign(n, -1);

    using Item = std::pair<double, NodeId>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;

    res.dist[static_cast<std::size_t>(source)] = 0.0;
    heap.push({0.0, source});
    while (!heap.empty()) {
        auto [d, u] = heap.top();
        heap.pop();
        const auto ui = static_cast<std::size_t>(u);
        if (d > res.dist[ui]) continue;
        for (LinkId a : network_->out_links(u)) {
            const Link& link = network_->link(a);
            const auto vi = static_cast<std::size_t>(link.head);
            const double nd = d + costs_[static_cast<std::size_t>(a)];
            if (nd < res.dist[vi] ||
                (nd == res.dist[vi] && a < res.parent_link[vi])) {
                if (nd < res.dist[vi]) heap.push({nd, link.head});
                res.dist[vi] = nd;
                res.parent_link[vi] = a;
            }
        }
    }
    return res;
}

std::optional<Path> RoutingIndex::unpack(const SearchResult& res, NodeId p,
                                         NodeId q) const {
    if (p == q) return Path{{p}, {}, 0.0};
    if (res.dist[static_cast<std::size_t>(q)] == kInf) return std::nullopt;

    Path path;
    path.total_cost = res.dist[static_cast<std::size_t>(q)];
    NodeId v = q;
    while (v != p) {
        const LinkId a = res.parent_link[static_cast<std::size_t>(v)];
        path.links.push_back(a);
        path.nodes.push_back(v);
        v = network_->link(a).tail;
    }
    path.nodes.push_back(p);
    std::reverse(path.nodes.begin(), path.nodes.end());
    std::reverse(path.links.begin(), path.links.end());
    return path;
}

std::optional<Path> RoutingIndex::query(NodeId p, NodeId q) const {
    if (!customized()) throw std::logic_error("query before customize");
    if (p == q) return Path{{p}, {}, 0.0};
    const std::vector<NodeId> targets{q};
    const SearchResult res = backend_ == RouterBackend::Accelerated
                                 ? search(p, targets)
                                 : search_reference(p, targets);
    return unpack(res, p, q);
}

std::vector<std::optional<Path>> RoutingIndex::query_from(
    NodeId p, const std::vector<NodeId>& targets) const {
    if (!customized()) throw std::logic_error("query before customize");
    const SearchResult res = backend_ == RouterBackend::Accelerated
                                 ? search(p, targets)
                                 : search_reference(p, targets);
    std::vector<std::optional<Path>> out;
    out.reserve(targets.size());
    for (NodeId q : targets) out.push_back(unpack(res, p, q));
    return out;
}

}  // namespace qdta
