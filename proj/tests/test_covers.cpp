#include "eicp/covers.hpp"
#include "eicp/error.hpp"
#include "eicp/experiments.hpp"
#include "support.hpp"

#include <doctest.h>

using namespace eicp;
using covers::CoverPlan;
using graphs::StructureKind;
using model::EicpInstance;

namespace {

const gf::FieldOrder F2(2);

EicpInstance fixture(const std::string& name) {
    return model::load_instance(testsupport::data_path(name));
}

// Length identities of both schemes plus disjointness and verification.
void check_plan(const CoverPlan& p, const EicpInstance& inst) {
    CHECK(codes::verify_code(p.code, inst).overall);
    CHECK(p.counts.structures == p.structures.size());
    CHECK(p.counts.length == p.code.length());
    std::vector<int> hit(inst.num_messages(), 0);
    std::size_t single = 0;
    std::size_t cost = 0;
    for (const auto& w : p.structures) {
        CHECK(graphs::verify_structure(graphs::build_side_info_graph(inst), w));
        for (auto x : w.messages) {
            ++hit[x];
        }
        single += w.kind == StructureKind::SingleEdge ? 1 : 0;
        // A one-message bi-clique is reported as its single edge, always covered.
        if (p.scheme == covers::Scheme::BiClique) {
            CHECK((w.kind == StructureKind::BiClique || w.kind == StructureKind::SingleEdge));
            CHECK((w.kind == StructureKind::BiClique || w.covered));
        }
        cost += w.covered ? 1 : 2;
    }
    CHECK(std::ranges::all_of(hit, [](int h) { return h == 1; }));
    const std::size_t n = inst.num_users();
    const std::size_t k = p.counts.structures;
    if (p.scheme == covers::Scheme::Tree) {
        CHECK(p.counts.single_edges == single);
        CHECK(p.counts.length == n - k + p.counts.single_edges);
    } else {
        CHECK(p.counts.length == cost);
        CHECK(p.counts.length >= k);
        CHECK(p.counts.length <= 2 * k);
    }
}

} // namespace

TEST_CASE("Example 3 cover lengths") {
    const auto inst = fixture("example3.json");
    const auto tree = covers::tree_cover(inst);
    const auto tree_exact = covers::tree_cover(inst, true);
    const auto bic = covers::biclique_cover(inst);
    const auto bic_exact = covers::biclique_cover(inst, true);
    CHECK(tree.counts.length == 4);
    CHECK(tree_exact.counts.length == 4);
    CHECK(bic.counts.length == 3);
    CHECK(bic_exact.counts.length == 3);
    for (const auto* p : {&tree, &tree_exact, &bic, &bic_exact}) {
        check_plan(*p, inst);
    }
    REQUIRE(bic.structures.size() == 2);
    CHECK(bic.structures[0].covered);
    CHECK(bic.structures[0].covering_user == 6);
    CHECK_FALSE(bic.structures[1].covered);
    CHECK_FALSE(bic.all_bicliques_covered);
    const auto cmp = covers::compare_schemes(inst);
    CHECK(cmp.kappa == 3);
    CHECK(cmp.tree_length == 4);
    CHECK(cmp.biclique_length == 3);
}

TEST_CASE("regular trees and bi-cliques are covered by one structure") {
    for (std::size_t n = 3; n <= 6; ++n) {
        const auto t = experiments::regular_tree_instance(n, F2);
        const auto p = covers::tree_cover(t);
        check_plan(p, t);
        CHECK(p.counts.length == n - 1);
        // From n = 4 on, user 1 combines two transmissions. T_{3,3} splits
        // into a covered pair and a single edge.
        CHECK(p.task_based == (n == 3));
    }
    for (std::size_t n = 3; n <= 5; ++n) {
        for (bool covered : {false, true}) {
            const auto b = experiments::biclique_instance(n, covered, F2);
            const auto p = covers::biclique_cover(b);
            check_plan(p, b);
            CHECK(p.structures.front().size() == n);
            CHECK(p.structures.front().covered == covered);
            CHECK(p.all_bicliques_covered == covered);
        }
    }
}

TEST_CASE("exact covers are never longer than greedy ones") {
    for (std::uint64_t seed = 1; seed <= 40; ++seed) {
        const auto inst = model::gen_single_unicast(4 + seed % 4, F2, 0.5, seed);
        const auto tg = covers::tree_cover(inst);
        const auto te = covers::tree_cover(inst, true);
        const auto bg = covers::biclique_cover(inst);
        const auto be = covers::biclique_cover(inst, true);
        for (const auto* p : {&tg, &te, &bg, &be}) {
            check_plan(*p, inst);
        }
        CHECK(te.counts.length <= tg.counts.length);
        CHECK(be.counts.length <= bg.counts.length);
        const auto kappa = minrank::minrank_bnb(inst).kappa;
        CHECK(kappa <= te.counts.length);
        CHECK(kappa <= be.counts.length);
    }
}

TEST_CASE("single uniprior instance falls back to single edges") {
    const auto inst = fixture("single_uniprior.json");
    const auto p = covers::tree_cover(inst);
    check_plan(p, inst);
    CHECK(p.counts.length == 4);
    CHECK(p.counts.single_edges == 4);
    CHECK(p.task_based);
}

TEST_CASE("covers reject instances that are not single unicast") {
    const auto inst = fixture("multi_demand.json");
    CHECK_THROWS_AS((void)covers::tree_cover(inst), NotSingleUnicast);
    CHECK_THROWS_AS((void)covers::biclique_cover(inst), NotSingleUnicast);
    CHECK_THROWS_AS((void)covers::tree_cover(model::gen_single_unicast(9, F2, 0.5, 1), true), GuardExceeded);
}
