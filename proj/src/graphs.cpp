#include "eicp/graphs.hpp"

#include "eicp/error.hpp"

#include <algorithm>
#include <numeric>
#include <string>

namespace eicp::graphs {

SideInfoBipartiteGraph::SideInfoBipartiteGraph(std::size_t num_messages, std::vector<IndexSet> user_adjacency)
    : user_adj_(std::move(user_adjacency)), msg_adj_(num_messages) {
    for (Index u = 0; u < user_adj_.size(); ++u) {
        auto& adj = user_adj_[u];
        std::ranges::sort(adj);
        adj.erase(std::unique(adj.begin(), adj.end()), adj.end());
        for (Index m : adj) {
            if (m >= num_messages) {
                throw StructuralError("user " + std::to_string(u + 1) + " adjacent to message " +
                                      std::to_string(m + 1) + " outside [1, " + std::to_string(num_messages) +
                                      "]");
            }
            msg_adj_[m].push_back(u);
        }
    }
}

bool SideInfoBipartiteGraph::adjacent(Index u, Index m) const {
    return std::ranges::binary_search(user_adj_.at(u), m);
}

bool SideInfoBipartiteGraph::adjacent_to_all(Index u, std::span<const Index> messages) const {
    return std::ranges::all_of(messages, [&](Index m) { return adjacent(u, m); });
}

std::size_t SideInfoBipartiteGraph::num_edges() const noexcept {
    std::size_t e = 0;
    for (const auto& a : user_adj_) {
        e += a.size();
    }
    return e;
}

BipartiteProblemGraph::BipartiteProblemGraph(const model::EicpInstance& inst)
    : side_(inst.side_info()), demand_(inst.demands()), demanders_(inst.num_messages()) {
    for (Index u = 0; u < demand_.size(); ++u) {
        demanders_[demand_[u]].push_back(u);
    }
}

SideInfoBipartiteGraph build_side_info_graph(const model::EicpInstance& inst) {
    return SideInfoBipartiteGraph(inst.num_messages(), inst.side_info());
}

BipartiteProblemGraph build_problem_graph(const model::EicpInstance& inst) {
    return BipartiteProblemGraph(inst);
}

namespace {

// Union-find over users [0, n) and messages [n, n + m).
class Components {
public:
    explicit Components(std::size_t size) : parent_(size) { std::iota(parent_.begin(), parent_.end(), 0); }

    std::size_t find(std::size_t x) {
        while (parent_[x] != x) {
            parent_[x] = parent_[parent_[x]];
            x = parent_[x];
        }
        return x;
    }
    void unite(std::size_t a, std::size_t b) { parent_[find(a)] = find(b); }

    bool single() {
        if (parent_.empty()) {
            return true;
        }
        const std::size_t r = find(0);
        for (std::size_t x = 1; x < parent_.size(); ++x) {
            if (find(x) != r) {
                return false;
            }
        }
        return true;
    }

private:
    std::vector<std::size_t> parent_;
};

bool connected(std::size_t num_users, std::size_t num_messages, const std::vector<IndexSet>& adj) {
    Components c(num_users + num_messages);
    for (Index u = 0; u < num_users; ++u) {
        for (Index m : adj[u]) {
            c.unite(u, num_users + m);
        }
    }
    return c.single();
}

} // namespace

bool is_connected(const SideInfoBipartiteGraph& g) {
    return connected(g.num_users(), g.num_messages(), g.user_adjacency());
}

PrunedGraph prune_degree_one(const SideInfoBipartiteGraph& g) {
    PrunedGraph p;
    for (Index m = 0; m < g.num_messages(); ++m) {
        (g.message_degree(m) >= 2 ? p.x_prime : p.removed).push_back(m);
    }
    p.user_adjacency.resize(g.num_users());
    for (Index u = 0; u < g.num_users(); ++u) {
        for (Index m : g.user_neighbors(u)) {
            if (std::ranges::binary_search(p.x_prime, m)) {
                p.user_adjacency[u].push_back(m);
            }
        }
    }
    return p;
}

bool is_connected(const PrunedGraph& g) {
    // Relabel X' densely.
    std::vector<IndexSet> adj(g.user_adjacency.size());
    for (Index u = 0; u < adj.size(); ++u) {
        for (Index m : g.user_adjacency[u]) {
            adj[u].push_back(static_cast<Index>(std::ranges::lower_bound(g.x_prime, m) - g.x_prime.begin()));
        }
    }
    return connected(adj.size(), g.x_prime.size(), adj);
}

std::size_t uniq_demanded(std::span<const Index> demands, std::span<const Index> subset) {
    IndexSet s(subset.begin(), subset.end());
    std::ranges::sort(s);
    IndexSet hit;
    for (Index d : demands) {
        if (std::ranges::binary_search(s, d)) {
            hit.push_back(d);
        }
    }
    return model::uniq(hit);
}

// ----------------------------------------------------------- canonical form

std::string canonical_form(const SideInfoBipartiteGraph& g, std::size_t guard) {
    const std::size_t n = g.num_users();
    const std::size_t m = g.num_messages();
    if (n > guard || m > guard) {
        throw GuardExceeded("canonical form needs N, M <= " + std::to_string(guard) + ", got N = " +
                            std::to_string(n) + ", M = " + std::to_string(m));
    }
    std::vector<Index> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    std::vector<std::string> cols(m, std::string(n, '0'));
    std::string best;
    do {
        for (Index c = 0; c < m; ++c) {
            for (Index r = 0; r < n; ++r) {
                cols[c][r] = g.adjacent(perm[r], c) ? '1' : '0';
            }
        }
        std::ranges::sort(cols, std::greater<>());
        // Row-major after column sort.
        std::string s(n * m, '0');
        for (Index r = 0; r < n; ++r) {
            for (Index c = 0; c < m; ++c) {
                s[r * m + c] = cols[c][r];
            }
        }
        if (s > best) {
            best = std::move(s);
        }
    } while (std::next_permutation(perm.begin(), perm.end()));
    return std::to_string(n) + "," + std::to_string(m) + ":" + best;
}

} // namespace eicp::graphs
