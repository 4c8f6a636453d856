#pragma once

// Bipartite views of an instance: the undirected side-information graph, the
// directed problem graph, degree-1 pruning, structure detection for single
// unicast instances, and canonical labeling up to user/message permutation.

#include "eicp/model.hpp"

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace eicp::graphs {

using model::Index;
using model::IndexSet;

/// Undirected graph on users U and messages X with an edge (u_i, x_j) iff
/// j is in K_i. The message-side adjacency is kept as the exact transpose.
class SideInfoBipartiteGraph {
public:
    /// Throws StructuralError for an out-of-range message index.
    SideInfoBipartiteGraph(std::size_t num_messages, std::vector<IndexSet> user_adjacency);

    [[nodiscard]] std::size_t num_users() const noexcept { return user_adj_.size(); }
    [[nodiscard]] std::size_t num_messages() const noexcept { return msg_adj_.size(); }
    [[nodiscard]] const IndexSet& user_neighbors(Index u) const { return user_adj_.at(u); }
    [[nodiscard]] const IndexSet& message_neighbors(Index m) const { return msg_adj_.at(m); }
    [[nodiscard]] const std::vector<IndexSet>& user_adjacency() const noexcept { return user_adj_; }
    [[nodiscard]] bool adjacent(Index u, Index m) const;
    [[nodiscard]] bool adjacent_to_all(Index u, std::span<const Index> messages) const;
    [[nodiscard]] std::size_t message_degree(Index m) const { return msg_adj_.at(m).size(); }
    [[nodiscard]] std::size_t num_edges() const noexcept;

    friend bool operator==(const SideInfoBipartiteGraph& a, const SideInfoBipartiteGraph& b) {
        return a.user_adj_ == b.user_adj_ && a.msg_adj_.size() == b.msg_adj_.size();
    }

private:
    std::vector<IndexSet> user_adj_;
    std::vector<IndexSet> msg_adj_;
};

/// Directed graph with side edges u_i -> x_j (j in K_i) and demand edges
/// x_m -> u_j (d_j = m).
class BipartiteProblemGraph {
public:
    explicit BipartiteProblemGraph(const model::EicpInstance& inst);

    [[nodiscard]] std::size_t num_users() const noexcept { return side_.size(); }
    [[nodiscard]] std::size_t num_messages() const noexcept { return demanders_.size(); }
    /// N^+(u_i) = K_i
    [[nodiscard]] const IndexSet& out_neighbors(Index u) const { return side_.at(u); }
    /// N^-(u_i) = {d_i}
    [[nodiscard]] IndexSet in_neighbors(Index u) const { return {demand_.at(u)}; }
    /// Users whose demand edge leaves x_m.
    [[nodiscard]] const IndexSet& message_out_neighbors(Index m) const { return demanders_.at(m); }
    [[nodiscard]] std::size_t message_out_degree(Index m) const { return demanders_.at(m).size(); }

private:
    std::vector<IndexSet> side_;
    std::vector<Index> demand_;
    std::vector<IndexSet> demanders_;
};

[[nodiscard]] SideInfoBipartiteGraph build_side_info_graph(const model::EicpInstance& inst);
[[nodiscard]] BipartiteProblemGraph build_problem_graph(const model::EicpInstance& inst);

/// True iff all N + M vertices lie in one component. Isolated vertices
/// (including users with empty side information) disconnect the graph.
[[nodiscard]] bool is_connected(const SideInfoBipartiteGraph& g);

/// Induced subgraph on (U, X') where X' drops every message of degree < 2.
struct PrunedGraph {
    IndexSet x_prime;
    IndexSet removed;
    std::vector<IndexSet> user_adjacency;  // restricted to X'
};

[[nodiscard]] PrunedGraph prune_degree_one(const SideInfoBipartiteGraph& g);
/// Connectedness of the pruned graph on the vertex set U plus X'.
[[nodiscard]] bool is_connected(const PrunedGraph& g);

/// |{d_i} ∩ subset|
[[nodiscard]] std::size_t uniq_demanded(std::span<const Index> demands, std::span<const Index> subset);

// ------------------------------------------------------------- structures

enum class StructureKind { SingleEdge, CoveredPair, RegularTree, BiClique };

[[nodiscard]] const char* to_string(StructureKind k) noexcept;

/// A structure in the side-information graph of a single unicast instance.
///
///  - RegularTree: users a_1..a_n, messages b_1..b_n (n >= 3) with a_i
///    adjacent to b_{i+1} for all i and to b_{i+2} for i < n, b_{n+1} = b_1.
///  - BiClique: a_i adjacent to every b_j, j != i. covered iff covering_user
///    (outside the user list) is adjacent to every b_j.
///  - CoveredPair: a_1 - b_2, a_2 - b_1 and a covering user adjacent to both.
///  - SingleEdge: one message b_1, its demanding user a_1, and the
///    transmitting user (stored in covering_user) adjacent to b_1.
struct StructureWitness {
    StructureKind kind = StructureKind::SingleEdge;
    std::vector<Index> users;
    std::vector<Index> messages;
    std::optional<Index> covering_user;
    bool covered = false;

    [[nodiscard]] std::size_t size() const noexcept { return messages.size(); }
    friend bool operator==(const StructureWitness&, const StructureWitness&) = default;
};

/// True iff every edge the witness's kind requires is present in g. Edges of
/// g outside the pattern are allowed.
[[nodiscard]] bool verify_structure(const SideInfoBipartiteGraph& g, const StructureWitness& w);

inline constexpr std::size_t kDefaultStructureMax = 8;

/// demands[u] is the message user u demands; in a single unicast instance
/// that pairs every message with at most one user. Structures only use
/// messages demanded by somebody.
class StructureFinder {
public:
    /// Throws NotSingleUnicast if two users demand the same message.
    StructureFinder(const SideInfoBipartiteGraph& g, std::span<const Index> demands);

    /// Regular tree on exactly the message set S (sorted), smallest message
    /// ordering first.
    [[nodiscard]] std::optional<StructureWitness> regular_tree_on(std::span<const Index> messages) const;
    [[nodiscard]] std::optional<StructureWitness> covered_pair_on(Index m1, Index m2) const;
    /// Bi-clique on S with the smallest covering user, if S is a bi-clique.
    [[nodiscard]] std::optional<StructureWitness> biclique_on(std::span<const Index> messages) const;
    [[nodiscard]] std::optional<StructureWitness> single_edge_on(Index m) const;

    /// Smallest user outside the demanders of S adjacent to all of S.
    [[nodiscard]] std::optional<Index> covering_user(std::span<const Index> messages) const;

    /// One witness per message set in the pool admitting a regular tree with
    /// 3 <= n <= n_max; largest first, then lexicographic.
    [[nodiscard]] std::vector<StructureWitness> regular_trees(std::span<const Index> pool,
                                                              std::size_t n_max = kDefaultStructureMax) const;
    /// Maximal bi-cliques within the pool (capped at n_max messages), largest
    /// first, covered before uncovered, then lexicographic. Singletons are
    /// reported as SingleEdge witnesses.
    [[nodiscard]] std::vector<StructureWitness> bicliques(std::span<const Index> pool,
                                                          std::size_t n_max = kDefaultStructureMax) const;

    [[nodiscard]] std::optional<Index> demander(Index m) const { return demander_.at(m); }

private:
    [[nodiscard]] bool mutual(Index m1, Index m2) const;

    const SideInfoBipartiteGraph& g_;
    std::vector<std::optional<Index>> demander_;
};

[[nodiscard]] std::vector<StructureWitness> search_regular_trees(const SideInfoBipartiteGraph& g,
                                                                 std::span<const Index> demands,
                                                                 std::span<const Index> pool,
                                                                 std::size_t n_max = kDefaultStructureMax);
[[nodiscard]] std::vector<StructureWitness> search_bicliques(const SideInfoBipartiteGraph& g,
                                                             std::span<const Index> demands,
                                                             std::span<const Index> pool,
                                                             std::size_t n_max = kDefaultStructureMax);

// ----------------------------------------------------------- canonical form

inline constexpr std::size_t kDefaultCanonicalGuard = 8;

/// Byte string equal for two graphs iff they differ by a user permutation
/// composed with a message permutation. For each user ordering the columns
/// are sorted, which is the lexicographically largest column arrangement for
/// that ordering; the maximum over user orderings is returned. Throws
/// GuardExceeded if N or M exceeds the guard.
[[nodiscard]] std::string canonical_form(const SideInfoBipartiteGraph& g,
                                         std::size_t guard = kDefaultCanonicalGuard);

} // namespace eicp::graphs
