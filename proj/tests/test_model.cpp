#include "eicp/error.hpp"
#include "eicp/graphs.hpp"
#include "eicp/model.hpp"
#include "support.hpp"

#include <doctest.h>

#include <set>

using namespace eicp;
using model::EicpInstance;
using model::ViolationKind;

namespace {

const gf::FieldOrder F2(2);

std::set<ViolationKind> kinds(const EicpInstance& inst) {
    std::set<ViolationKind> out;
    for (const auto& v : model::validate(inst).violations) {
        out.insert(v.kind);
    }
    return out;
}

} // namespace

TEST_CASE("fixtures parse with 0-based indices") {
    const auto e1 = model::load_instance(testsupport::data_path("example1.json"));
    CHECK(e1.num_users() == 4);
    CHECK(e1.num_messages() == 4);
    CHECK(e1.side_info(1) == model::IndexSet{0, 1, 2});
    CHECK(e1.demands() == std::vector<model::Index>{1, 3, 0, 2});
    CHECK(model::validate(e1).ok());
    CHECK(e1.knows(2, 3));
    CHECK_FALSE(e1.knows(0, 3));
}

TEST_CASE("each validity rule is reported") {
    // d_1 in K_1
    CHECK(kinds(EicpInstance(F2, 3, {{0, 1}, {2}, {0}}, {0, 0, 1})).contains(ViolationKind::DemandInSideInfo));
    // x_3 held by nobody
    CHECK(kinds(EicpInstance(F2, 3, {{1}, {0}, {0}}, {0, 1, 2})).contains(ViolationKind::MessageAtNoUser));
    // K_1 = [M]
    CHECK(kinds(EicpInstance(F2, 2, {{0, 1}, {0}, {1}}, {0, 1, 0})).contains(ViolationKind::UserHasAllMessages));
    // x_1 at every user
    CHECK(kinds(EicpInstance(F2, 3, {{0, 1}, {0, 2}, {0}}, {2, 1, 1})).contains(ViolationKind::MessageAtAllUsers));
    // nobody else holds d_1
    CHECK(kinds(EicpInstance(F2, 3, {{1}, {0}, {1}}, {2, 1, 0})).contains(ViolationKind::NoOtherHolder));
}

TEST_CASE("M > N is a warning, empty side information is allowed") {
    const EicpInstance inst(F2, 3, {{1, 2}, {0}}, {0, 1});
    const auto r = model::validate(inst);
    CHECK(r.ok());
    CHECK(r.warnings.size() == 1);
    const EicpInstance empty(F2, 2, {{0}, {1}, {}}, {1, 0, 0});
    CHECK(model::validate(empty).ok());
}

TEST_CASE("constructor rejects structurally broken input") {
    CHECK_THROWS_AS(EicpInstance(F2, 2, {{0, 2}}, {1}), StructuralError);
    CHECK_THROWS_AS(EicpInstance(F2, 2, {{0, 0}}, {1}), StructuralError);
    CHECK_THROWS_AS(EicpInstance(F2, 2, {{0}, {1}}, {1}), StructuralError);
    CHECK_THROWS_AS(EicpInstance(F2, 2, {{0}}, {5}), StructuralError);
}

TEST_CASE("parse errors carry their kind") {
    auto kind_of = [](const std::string& text) {
        try {
            (void)model::parse_instance(text);
        } catch (const ParseError& e) {
            return e.kind();
        }
        FAIL("no ParseError");
        return ParseError::Kind::Schema;
    };
    CHECK(kind_of("{") == ParseError::Kind::MalformedJson);
    CHECK(kind_of("[]") == ParseError::Kind::Schema);
    CHECK(kind_of(R"({"q":2,"num_users":1,"num_messages":2,"side_info":[[1]]})") == ParseError::Kind::Schema);
    CHECK(kind_of(R"({"q":2,"num_users":1,"num_messages":2,"side_info":[[3]],"demands":[1]})") ==
          ParseError::Kind::OutOfRange);
    CHECK(kind_of(R"({"q":4,"num_users":1,"num_messages":2,"side_info":[[2]],"demands":[1]})") ==
          ParseError::Kind::NonPrimeField);
    CHECK(kind_of(R"({"q":2,"num_users":1,"num_messages":2,"side_info":[[2]],"demands":[1],"x":0})") ==
          ParseError::Kind::Schema);
    CHECK_THROWS_AS((void)model::load_instance(testsupport::data_path("malformed.json")), ParseError);
    CHECK_THROWS_AS((void)model::load_instance(testsupport::data_path("does_not_exist.json")), ParseError);
}

TEST_CASE("serialize then parse is the identity") {
    std::mt19937_64 rng(2);
    for (int t = 0; t < 50; ++t) {
        const auto inst = testsupport::random_valid(rng, 2 + t % 4, 1 + t % 5, t % 3 ? 3 : 2);
        if (!inst) {
            continue;
        }
        CHECK(model::parse_instance(model::serialize_instance(*inst)) == *inst);
    }
}

TEST_CASE("multi-demand users are split in order") {
    const auto inst = model::load_instance(testsupport::data_path("multi_demand.json"));
    CHECK(inst.num_users() == 5);
    CHECK(inst.demands() == std::vector<model::Index>{2, 3, 0, 1, 2});
    CHECK(inst.side_info(0) == inst.side_info(1));
    CHECK(inst.side_info(3) == model::IndexSet{0, 3});
    CHECK(inst.field().value() == 3);
}

TEST_CASE("classify and uniq") {
    const auto su = model::load_instance(testsupport::data_path("single_uniprior.json"));
    CHECK(model::classify(su).single_unicast);
    CHECK(model::classify(su).single_uniprior);
    const auto e1 = model::load_instance(testsupport::data_path("example1.json"));
    CHECK(model::classify(e1).single_unicast);
    CHECK_FALSE(model::classify(e1).single_uniprior);
    CHECK(model::uniq(std::vector<model::Index>{2, 0, 2, 1}) == 3);
    CHECK(model::uniq(std::vector<model::Index>{}) == 0);
}

TEST_CASE("demand enumeration matches a brute-force product") {
    const std::vector<model::IndexSet> side{{0}, {1, 2}, {}};
    const auto all = model::enumerate_demands(side, 3);
    std::vector<std::vector<model::Index>> expected;
    for (model::Index a = 0; a < 3; ++a) {
        for (model::Index b = 0; b < 3; ++b) {
            for (model::Index c = 0; c < 3; ++c) {
                if (a != 0 && b == 0) {
                    expected.push_back({a, b, c});
                }
            }
        }
    }
    CHECK(all == expected);
    model::DemandEnumerator e(side, 3);
    CHECK(e.count() == 6);
    CHECK_THROWS_AS(model::DemandEnumerator(side, 3, 5), GuardExceeded);
}

TEST_CASE("generators are deterministic and emit valid instances") {
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        const auto a = model::gen_random(4, 5, F2, 0.4, seed);
        CHECK(a == model::gen_random(4, 5, F2, 0.4, seed));
        CHECK(model::validate(a).ok());

        const auto v = model::gen_vanet(6, 8, F2, 0.8, seed);
        CHECK(v == model::gen_vanet(6, 8, F2, 0.8, seed));
        CHECK(model::validate(v).ok());
        CHECK(graphs::is_connected(graphs::build_side_info_graph(v)));

        const auto u = model::gen_single_unicast(5, F2, 0.5, seed);
        CHECK(model::classify(u).single_unicast);
        CHECK(model::validate(u).ok());

        const auto p = model::gen_single_uniprior(5, F2, seed);
        CHECK(model::classify(p).single_uniprior);
        CHECK(model::validate(p).ok());
    }
    CHECK_THROWS_AS((void)model::gen_vanet(6, 8, F2, 0.2, 1), GenerationFailure);
    CHECK_THROWS_AS((void)model::gen_random(1, 3, F2, 0.5, 1), GenerationFailure);
}

TEST_CASE("with_field and with_demands keep the rest") {
    const auto e1 = model::load_instance(testsupport::data_path("example1.json"));
    const auto e3 = e1.with_field(gf::FieldOrder(3));
    CHECK(e3.field().value() == 3);
    CHECK(e3.side_info() == e1.side_info());
    const auto d = e1.with_demands({1, 3, 0, 1});
    CHECK(d.demand(3) == 1);
    CHECK(d.side_info() == e1.side_info());
}
