#include "eicp/error.hpp"
#include "eicp/experiments.hpp"
#include "eicp/graphs.hpp"
#include "eicp/minrank.hpp"
#include "support.hpp"

#include <doctest.h>

#include <numeric>

using namespace eicp;
using graphs::SideInfoBipartiteGraph;
using graphs::StructureKind;
using model::Index;
using model::IndexSet;

namespace {

const gf::FieldOrder F2(2);

bool brute_isomorphic(const SideInfoBipartiteGraph& a, const SideInfoBipartiteGraph& b) {
    if (a.num_users() != b.num_users() || a.num_messages() != b.num_messages()) {
        return false;
    }
    std::vector<Index> pu(a.num_users());
    std::iota(pu.begin(), pu.end(), 0);
    do {
        std::vector<Index> pm(a.num_messages());
        std::iota(pm.begin(), pm.end(), 0);
        do {
            bool same = true;
            for (Index u = 0; u < a.num_users() && same; ++u) {
                for (Index m = 0; m < a.num_messages() && same; ++m) {
                    same = a.adjacent(u, m) == b.adjacent(pu[u], pm[m]);
                }
            }
            if (same) {
                return true;
            }
        } while (std::next_permutation(pm.begin(), pm.end()));
    } while (std::next_permutation(pu.begin(), pu.end()));
    return false;
}

SideInfoBipartiteGraph random_graph(std::mt19937_64& rng, std::size_t n, std::size_t m) {
    std::vector<IndexSet> adj(n);
    for (std::size_t u = 0; u < n; ++u) {
        for (Index x = 0; x < m; ++x) {
            if (rng() % 2) {
                adj[u].push_back(x);
            }
        }
    }
    return SideInfoBipartiteGraph(m, adj);
}

} // namespace

TEST_CASE("side information graph of Example 1") {
    const auto inst = model::load_instance(testsupport::data_path("example1.json"));
    const auto g = graphs::build_side_info_graph(inst);
    CHECK(g.num_edges() == 7);
    CHECK(g.message_neighbors(0) == IndexSet{0, 1});
    CHECK(g.message_degree(3) == 2);
    CHECK(g.adjacent_to_all(1, std::vector<Index>{0, 1, 2}));
    CHECK(graphs::is_connected(g));

    const auto pg = graphs::build_problem_graph(inst);
    CHECK(pg.out_neighbors(2) == IndexSet{1, 3});
    CHECK(pg.in_neighbors(0) == IndexSet{1});
    CHECK(pg.message_out_neighbors(0) == IndexSet{2});
    CHECK(pg.message_out_degree(1) == 1);
}

TEST_CASE("problem graph candidate supports match build_candidates") {
    std::mt19937_64 rng(4);
    for (int t = 0; t < 60; ++t) {
        const auto inst = testsupport::random_valid(rng, 3 + t % 3, 3 + t % 3, 2);
        if (!inst) {
            continue;
        }
        const auto supports = minrank::graph_candidate_supports(graphs::build_problem_graph(*inst));
        const auto cands = minrank::build_candidates(*inst);
        for (std::size_t u = 0; u < cands.size(); ++u) {
            std::vector<IndexSet> from_vectors;
            for (const auto& v : cands[u].vectors) {
                from_vectors.push_back(v.support());
            }
            CHECK(supports[u] == from_vectors);
        }
    }
}

TEST_CASE("connectivity and pruning") {
    // u1 - x1 - u2 - x2, u3 - x3: two components
    const SideInfoBipartiteGraph g(3, {{0}, {0, 1}, {2}});
    CHECK_FALSE(graphs::is_connected(g));
    const auto p = graphs::prune_degree_one(g);
    CHECK(p.x_prime == IndexSet{0});
    CHECK(p.removed == IndexSet{1, 2});
    CHECK(p.user_adjacency[1] == IndexSet{0});
    CHECK_FALSE(graphs::is_connected(p));

    const SideInfoBipartiteGraph h(2, {{0, 1}, {0}, {1}});
    CHECK(graphs::is_connected(h));
    CHECK(graphs::is_connected(graphs::prune_degree_one(h)));
    // A user with empty side information is isolated.
    CHECK_FALSE(graphs::is_connected(SideInfoBipartiteGraph(1, {{0}, {}})));
    CHECK(graphs::uniq_demanded(std::vector<Index>{0, 2, 2}, std::vector<Index>{2, 3}) == 1);
}

TEST_CASE("canonical form separates exactly the isomorphism classes") {
    std::mt19937_64 rng(9);
    for (int t = 0; t < 300; ++t) {
        const std::size_t n = 2 + rng() % 2;
        const std::size_t m = 2 + rng() % 2;
        const auto a = random_graph(rng, n, m);
        const auto b = random_graph(rng, n, m);
        CHECK((graphs::canonical_form(a) == graphs::canonical_form(b)) == brute_isomorphic(a, b));
    }
    // Relabeling never changes the form.
    for (int t = 0; t < 100; ++t) {
        const auto a = random_graph(rng, 4, 4);
        std::vector<Index> pu{0, 1, 2, 3};
        std::vector<Index> pm{0, 1, 2, 3};
        std::ranges::shuffle(pu, rng);
        std::ranges::shuffle(pm, rng);
        std::vector<IndexSet> adj(4);
        for (Index u = 0; u < 4; ++u) {
            for (Index x : a.user_neighbors(u)) {
                adj[pu[u]].push_back(pm[x]);
            }
            std::ranges::sort(adj[pu[u]]);
        }
        CHECK(graphs::canonical_form(a) == graphs::canonical_form(SideInfoBipartiteGraph(4, adj)));
    }
    CHECK_THROWS_AS((void)graphs::canonical_form(random_graph(rng, 9, 2)), GuardExceeded);
}

TEST_CASE("regular tree instances are trees with 2n - 1 edges") {
    for (std::size_t n = 3; n <= 8; ++n) {
        const auto inst = experiments::regular_tree_instance(n, F2);
        CHECK(model::validate(inst).ok());
        const auto g = graphs::build_side_info_graph(inst);
        CHECK(g.num_edges() == 2 * n - 1);
        CHECK(graphs::is_connected(g));
        std::vector<Index> all(n);
        std::iota(all.begin(), all.end(), 0);
        const graphs::StructureFinder f(g, inst.demands());
        const auto w = f.regular_tree_on(all);
        REQUIRE(w.has_value());
        CHECK(w->kind == StructureKind::RegularTree);
        CHECK(w->size() == n);
        CHECK(graphs::verify_structure(g, *w));
        // Definition pattern: a_i ~ b_{i+1}, a_i ~ b_{i+2} for i < n.
        for (std::size_t i = 0; i < n; ++i) {
            CHECK(g.adjacent(w->users[i], w->messages[(i + 1) % n]));
            if (i + 1 < n) {
                CHECK(g.adjacent(w->users[i], w->messages[(i + 2) % n]));
            }
        }
        const auto trees = graphs::search_regular_trees(g, inst.demands(), all, n);
        REQUIRE_FALSE(trees.empty());
        CHECK(trees.front().size() == n);
    }
}

TEST_CASE("bi-cliques and covering users") {
    for (std::size_t n = 2; n <= 5; ++n) {
        for (bool covered : {false, true}) {
            const auto inst = experiments::biclique_instance(n, covered, F2);
            CHECK(model::validate(inst).ok());
            const auto g = graphs::build_side_info_graph(inst);
            std::vector<Index> members(n);
            std::iota(members.begin(), members.end(), 0);
            const graphs::StructureFinder f(g, inst.demands());
            const auto w = f.biclique_on(members);
            REQUIRE(w.has_value());
            CHECK(w->covered == covered);
            CHECK(graphs::verify_structure(g, *w));
            if (covered) {
                CHECK(w->covering_user == n);
            }
        }
    }
}

TEST_CASE("structures of Example 3") {
    const auto inst = model::load_instance(testsupport::data_path("example3.json"));
    const auto g = graphs::build_side_info_graph(inst);
    std::vector<Index> all(7);
    std::iota(all.begin(), all.end(), 0);
    const auto b = graphs::search_bicliques(g, inst.demands(), all);
    REQUIRE(b.size() >= 2);
    CHECK(b[0].messages == std::vector<Index>{0, 1, 2, 3});
    CHECK(b[0].covered);
    CHECK(b[0].covering_user == 6);
    const graphs::StructureFinder f(g, inst.demands());
    const auto small = f.biclique_on(std::vector<Index>{4, 5, 6});
    REQUIRE(small.has_value());
    CHECK_FALSE(small->covered);
    const auto pair = f.covered_pair_on(4, 5);
    REQUIRE(pair.has_value());
    CHECK(pair->covering_user == 6);
    const auto single = f.single_edge_on(6);
    REQUIRE(single.has_value());
    CHECK(single->covering_user == 4);
    // B_{4,4} contains T_{4,4}.
    CHECK(f.regular_tree_on(std::vector<Index>{0, 1, 2, 3}).has_value());
    for (const auto& w : b) {
        CHECK(graphs::verify_structure(g, w));
    }
}

TEST_CASE("verify_structure rejects missing edges") {
    const auto inst = experiments::regular_tree_instance(4, F2);
    const auto g = graphs::build_side_info_graph(inst);
    graphs::StructureWitness w{StructureKind::BiClique, {0, 1, 2, 3}, {0, 1, 2, 3}, std::nullopt, false};
    CHECK_FALSE(graphs::verify_structure(g, w));
}

TEST_CASE("structure finder needs distinct demands") {
    const SideInfoBipartiteGraph g(2, {{1}, {0}, {0}});
    CHECK_THROWS_AS(graphs::StructureFinder(g, std::vector<Index>{0, 1, 1}), NotSingleUnicast);
}
