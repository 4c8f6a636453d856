#include "eicp/error.hpp"
#include "eicp/graphs.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <string>

namespace eicp::graphs {

const char* to_string(StructureKind k) noexcept {
    switch (k) {
    case StructureKind::SingleEdge:
        return "single_edge";
    case StructureKind::CoveredPair:
        return "covered_pair";
    case StructureKind::RegularTree:
        return "regular_tree";
    case StructureKind::BiClique:
        return "biclique";
    }
    return "unknown";
}

namespace {

bool distinct(std::vector<Index> v) {
    std::ranges::sort(v);
    return std::ranges::adjacent_find(v) == v.end();
}

bool in_range(const SideInfoBipartiteGraph& g, const StructureWitness& w) {
    const bool users_ok = std::ranges::all_of(w.users, [&](Index u) { return u < g.num_users(); });
    const bool msgs_ok = std::ranges::all_of(w.messages, [&](Index m) { return m < g.num_messages(); });
    const bool cover_ok = !w.covering_user || *w.covering_user < g.num_users();
    return users_ok && msgs_ok && cover_ok;
}

bool outside(const std::optional<Index>& c, const std::vector<Index>& users) {
    return c && std::ranges::find(users, *c) == users.end();
}

bool tree_edges(const SideInfoBipartiteGraph& g, std::span<const Index> a, std::span<const Index> b) {
    const std::size_t n = b.size();
    for (std::size_t i = 0; i < n; ++i) {
        if (!g.adjacent(a[i], b[(i + 1) % n])) {
            return false;
        }
        if (i + 1 < n && !g.adjacent(a[i], b[(i + 2) % n])) {
            return false;
        }
    }
    return true;
}

} // namespace

bool verify_structure(const SideInfoBipartiteGraph& g, const StructureWitness& w) {
    const std::size_t n = w.messages.size();
    if (n == 0 || w.users.size() != n || !in_range(g, w) || !distinct(w.users) || !distinct(w.messages)) {
        return false;
    }
    switch (w.kind) {
    case StructureKind::SingleEdge:
        return n == 1 && w.covered && outside(w.covering_user, w.users) &&
               g.adjacent(*w.covering_user, w.messages[0]);
    case StructureKind::CoveredPair:
        return n == 2 && w.covered && outside(w.covering_user, w.users) &&
               g.adjacent(w.users[0], w.messages[1]) && g.adjacent(w.users[1], w.messages[0]) &&
               g.adjacent_to_all(*w.covering_user, w.messages);
    case StructureKind::RegularTree:
        return n >= 3 && !w.covered && tree_edges(g, w.users, w.messages);
    case StructureKind::BiClique:
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) {
                if (i != j && !g.adjacent(w.users[i], w.messages[j])) {
                    return false;
                }
            }
        }
        if (w.covered) {
            std::vector<Index> sorted = w.messages;
            std::ranges::sort(sorted);
            return outside(w.covering_user, w.users) && g.adjacent_to_all(*w.covering_user, sorted);
        }
        return !w.covering_user.has_value();
    }
    return false;
}

StructureFinder::StructureFinder(const SideInfoBipartiteGraph& g, std::span<const Index> demands)
    : g_(g), demander_(g.num_messages()) {
    if (demands.size() != g.num_users()) {
        throw DimensionMismatch("graph has " + std::to_string(g.num_users()) + " users but " +
                                std::to_string(demands.size()) + " demands");
    }
    for (Index u = 0; u < demands.size(); ++u) {
        const Index m = demands[u];
        if (m >= g.num_messages()) {
            throw StructuralError("demand of user " + std::to_string(u + 1) + " out of range");
        }
        if (demander_[m]) {
            throw NotSingleUnicast("message " + std::to_string(m + 1) + " is demanded by users " +
                                   std::to_string(*demander_[m] + 1) + " and " + std::to_string(u + 1));
        }
        demander_[m] = u;
    }
}

bool StructureFinder::mutual(Index m1, Index m2) const {
    return g_.adjacent(*demander_[m1], m2) && g_.adjacent(*demander_[m2], m1);
}

std::optional<Index> StructureFinder::covering_user(std::span<const Index> messages) const {
    std::vector<Index> sorted(messages.begin(), messages.end());
    std::ranges::sort(sorted);
    for (Index u = 0; u < g_.num_users(); ++u) {
        const bool demands_one = std::ranges::any_of(sorted, [&](Index m) { return demander_[m] == u; });
        if (!demands_one && g_.adjacent_to_all(u, sorted)) {
            return u;
        }
    }
    return std::nullopt;
}

std::optional<StructureWitness> StructureFinder::single_edge_on(Index m) const {
    if (m >= demander_.size() || !demander_[m]) {
        return std::nullopt;
    }
    for (Index u : g_.message_neighbors(m)) {
        if (u != *demander_[m]) {
            return StructureWitness{StructureKind::SingleEdge, {*demander_[m]}, {m}, u, true};
        }
    }
    return std::nullopt;
}

std::optional<StructureWitness> StructureFinder::covered_pair_on(Index m1, Index m2) const {
    if (m1 == m2 || !demander_.at(m1) || !demander_.at(m2) || !mutual(m1, m2)) {
        return std::nullopt;
    }
    const Index pair[] = {m1, m2};
    const auto c = covering_user(pair);
    if (!c) {
        return std::nullopt;
    }
    return StructureWitness{StructureKind::CoveredPair, {*demander_[m1], *demander_[m2]}, {m1, m2}, c, true};
}

std::optional<StructureWitness> StructureFinder::biclique_on(std::span<const Index> messages) const {
    std::vector<Index> s(messages.begin(), messages.end());
    std::ranges::sort(s);
    if (s.empty() || std::ranges::adjacent_find(s) != s.end() ||
        std::ranges::any_of(s, [&](Index m) { return m >= demander_.size() || !demander_[m]; })) {
        return std::nullopt;
    }
    if (s.size() == 1) {
        return single_edge_on(s[0]);
    }
    for (std::size_t i = 0; i < s.size(); ++i) {
        for (std::size_t j = i + 1; j < s.size(); ++j) {
            if (!mutual(s[i], s[j])) {
                return std::nullopt;
            }
        }
    }
    StructureWitness w{StructureKind::BiClique, {}, s, covering_user(s), false};
    w.covered = w.covering_user.has_value();
    for (Index m : s) {
        w.users.push_back(*demander_[m]);
    }
    return w;
}

namespace {

// Depth-first enumeration of regular-tree orderings b_1..b_k drawn from
// `pool`, in lexicographic order of the sequence. `visit` is called for every
// closed sequence of length >= 3; returning true stops the search.
template <class Visit>
bool tree_dfs(const SideInfoBipartiteGraph& g, const std::vector<std::optional<Index>>& demander,
              std::span<const Index> pool, std::size_t n_max, std::vector<Index>& seq, std::vector<char>& used,
              Visit&& visit) {
    const std::size_t k = seq.size();
    if (k >= 3) {
        const Index b1 = seq[0];
        if (g.adjacent(*demander[seq[k - 1]], b1) && g.adjacent(*demander[seq[k - 2]], b1) && visit(seq)) {
            return true;
        }
    }
    if (k == n_max) {
        return false;
    }
    for (std::size_t i = 0; i < pool.size(); ++i) {
        const Index b = pool[i];
        if (used[i]) {
            continue;
        }
        if (k >= 1 && !g.adjacent(*demander[seq[k - 1]], b)) {
            continue;
        }
        if (k >= 2 && !g.adjacent(*demander[seq[k - 2]], b)) {
            continue;
        }
        used[i] = 1;
        seq.push_back(b);
        const bool stop = tree_dfs(g, demander, pool, n_max, seq, used, visit);
        seq.pop_back();
        used[i] = 0;
        if (stop) {
            return true;
        }
    }
    return false;
}

std::vector<Index> demanded_pool(const std::vector<std::optional<Index>>& demander, std::span<const Index> pool) {
    std::vector<Index> p;
    for (Index m : pool) {
        if (m < demander.size() && demander[m]) {
            p.push_back(m);
        }
    }
    std::ranges::sort(p);
    p.erase(std::unique(p.begin(), p.end()), p.end());
    return p;
}

StructureWitness tree_witness(const std::vector<std::optional<Index>>& demander, const std::vector<Index>& seq) {
    StructureWitness w{StructureKind::RegularTree, {}, seq, std::nullopt, false};
    for (Index m : seq) {
        w.users.push_back(*demander[m]);
    }
    return w;
}

bool witness_order(const StructureWitness& a, const StructureWitness& b) {
    if (a.size() != b.size()) {
        return a.size() > b.size();
    }
    if (a.covered != b.covered) {
        return a.covered;
    }
    std::vector<Index> sa = a.messages;
    std::vector<Index> sb = b.messages;
    std::ranges::sort(sa);
    std::ranges::sort(sb);
    return sa < sb;
}

} // namespace

std::optional<StructureWitness> StructureFinder::regular_tree_on(std::span<const Index> messages) const {
    std::vector<Index> s = demanded_pool(demander_, messages);
    if (s.size() != messages.size() || s.size() < 3) {
        return std::nullopt;
    }
    std::optional<StructureWitness> found;
    std::vector<Index> seq;
    std::vector<char> used(s.size(), 0);
    tree_dfs(g_, demander_, s, s.size(), seq, used, [&](const std::vector<Index>& q) {
        if (q.size() == s.size()) {
            found = tree_witness(demander_, q);
            return true;
        }
        return false;
    });
    return found;
}

std::vector<StructureWitness> StructureFinder::regular_trees(std::span<const Index> pool, std::size_t n_max) const {
    const std::vector<Index> p = demanded_pool(demander_, pool);
    std::map<std::vector<Index>, StructureWitness> by_set;
    std::vector<Index> seq;
    std::vector<char> used(p.size(), 0);
    tree_dfs(g_, demander_, p, n_max, seq, used, [&](const std::vector<Index>& q) {
        std::vector<Index> key = q;
        std::ranges::sort(key);
        by_set.try_emplace(std::move(key), tree_witness(demander_, q));
        return false;
    });
    std::vector<StructureWitness> out;
    for (auto& [_, w] : by_set) {
        out.push_back(std::move(w));
    }
    std::ranges::stable_sort(out, witness_order);
    return out;
}

std::vector<StructureWitness> StructureFinder::bicliques(std::span<const Index> pool, std::size_t n_max) const {
    const std::vector<Index> p = demanded_pool(demander_, pool);
    const std::size_t n = p.size();
    std::vector<std::vector<char>> adj(n, std::vector<char>(n, 0));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            adj[i][j] = adj[j][i] = mutual(p[i], p[j]) ? 1 : 0;
        }
    }

    // Bron-Kerbosch with pivoting over vertex positions in p.
    std::set<std::vector<Index>> cliques;
    auto bk = [&](auto&& self, std::vector<std::size_t>& r, std::vector<std::size_t> cand,
                  std::vector<std::size_t> excl) -> void {
        if (cand.empty() && excl.empty()) {
            std::vector<Index> c;
            for (std::size_t v : r) {
                c.push_back(p[v]);
            }
            std::ranges::sort(c);
            if (c.size() > n_max) {
                c.resize(n_max);
            }
            cliques.insert(std::move(c));
            return;
        }
        std::size_t pivot = cand.empty() ? excl.front() : cand.front();
        std::size_t best = 0;
        for (const auto* set : {&cand, &excl}) {
            for (std::size_t u : *set) {
                const auto deg = static_cast<std::size_t>(
                    std::ranges::count_if(cand, [&](std::size_t v) { return adj[u][v] != 0; }));
                if (deg > best) {
                    best = deg;
                    pivot = u;
                }
            }
        }
        const std::vector<std::size_t> todo = [&] {
            std::vector<std::size_t> t;
            for (std::size_t v : cand) {
                if (!adj[pivot][v]) {
                    t.push_back(v);
                }
            }
            return t;
        }();
        for (std::size_t v : todo) {
            std::vector<std::size_t> nc;
            std::vector<std::size_t> nx;
            for (std::size_t u : cand) {
                if (adj[v][u]) {
                    nc.push_back(u);
                }
            }
            for (std::size_t u : excl) {
                if (adj[v][u]) {
                    nx.push_back(u);
                }
            }
            r.push_back(v);
            self(self, r, std::move(nc), std::move(nx));
            r.pop_back();
            std::erase(cand, v);
            excl.push_back(v);
        }
    };
    std::vector<std::size_t> r;
    std::vector<std::size_t> all(n);
    for (std::size_t i = 0; i < n; ++i) {
        all[i] = i;
    }
    if (n > 0) {
        bk(bk, r, all, {});
    }

    std::vector<StructureWitness> out;
    for (const auto& c : cliques) {
        if (auto w = biclique_on(c)) {
            out.push_back(std::move(*w));
        }
    }
    std::ranges::stable_sort(out, witness_order);
    return out;
}

std::vector<StructureWitness> search_regular_trees(const SideInfoBipartiteGraph& g, std::span<const Index> demands,
                                                   std::span<const Index> pool, std::size_t n_max) {
    return StructureFinder(g, demands).regular_trees(pool, n_max);
}

std::vector<StructureWitness> search_bicliques(const SideInfoBipartiteGraph& g, std::span<const Index> demands,
                                               std::span<const Index> pool, std::size_t n_max) {
    return StructureFinder(g, demands).bicliques(pool, n_max);
}

} // namespace eicp::graphs
