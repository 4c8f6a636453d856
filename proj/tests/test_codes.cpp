#include "eicp/codes.hpp"
#include "eicp/error.hpp"
#include "eicp/minrank.hpp"
#include "support.hpp"

#include <doctest.h>

using namespace eicp;
using codes::EmbeddedIndexCode;
using model::Index;

namespace {

const gf::FieldOrder F2(2);

model::EicpInstance example1() {
    return model::load_instance(testsupport::data_path("example1.json"));
}

EmbeddedIndexCode code_file(const std::string& name, gf::FieldOrder q = F2) {
    return codes::load_code(testsupport::data_path(name), q);
}

// x_d = sum combo_t T_t - sum correction_k x_k, checked coordinatewise.
bool reconstructs(const codes::DecodeCoefficients& c, const EmbeddedIndexCode& code, const model::EicpInstance& inst,
                  Index u) {
    const auto q = inst.field();
    gf::GfVector v(q, inst.num_messages());
    for (std::size_t t = 0; t < code.length(); ++t) {
        v.add_scaled(code.transmissions[t].coeffs, c.combo[t]);
    }
    for (std::size_t k = 0; k < inst.side_info(u).size(); ++k) {
        v.add_scaled(gf::GfVector::unit(q, inst.num_messages(), inst.side_info(u)[k]), q.neg(c.correction[k]));
    }
    return v == gf::GfVector::unit(q, inst.num_messages(), inst.demand(u));
}

} // namespace

TEST_CASE("Example 1 code verifies") {
    const auto inst = example1();
    const auto code = code_file("example1_code.json");
    CHECK(code.length() == 3);
    CHECK(code.transmitters() == std::vector<Index>{1, 2});
    const auto r = codes::verify_code(code, inst);
    CHECK(r.overall);
    CHECK(r.support_violations.empty());
    for (Index u = 0; u < inst.num_users(); ++u) {
        CHECK(testsupport::brute_decodes(code, inst, u));
        const auto c = codes::decode_coeffs(code, inst, u);
        CHECK(reconstructs(c, code, inst, u));
        for (std::size_t t = 0; t < code.length(); ++t) {
            if (code.transmissions[t].transmitter == u) {
                CHECK(c.combo[t] == 0);
            }
        }
    }
}

TEST_CASE("dropping the x_4 transmission flags user 2") {
    const auto inst = example1();
    const auto r = codes::verify_code(code_file("example1_code_truncated.json"), inst);
    CHECK_FALSE(r.overall);
    CHECK_FALSE(r.decodable[1]);
    CHECK(r.decodable[0]);
    CHECK(r.decodable[2]);
    CHECK(r.decodable[3]);
    CHECK_THROWS_AS((void)codes::decode_coeffs(code_file("example1_code_truncated.json"), inst, 1), NotDecodable);
}

TEST_CASE("support violations are listed") {
    const auto inst = example1();
    const auto code = code_file("example1_code_support_violation.json");
    const auto r = codes::verify_code(code, inst);
    CHECK_FALSE(r.overall);
    REQUIRE(r.support_violations.size() == 1);
    CHECK(r.support_violations[0].transmission == 0);
    CHECK(r.support_violations[0].transmitter == 0);
    CHECK(r.support_violations[0].outside == std::vector<Index>{1});
    CHECK_THROWS_AS((void)codes::assemble_matrix(code, inst), InvalidCode);
}

TEST_CASE("zero transmissions and shape errors") {
    const auto inst = example1();
    EmbeddedIndexCode z{{{1, gf::GfVector(F2, 4)}}};
    const auto r = codes::verify_code(z, inst);
    REQUIRE(r.support_violations.size() == 1);
    CHECK(r.support_violations[0].zero);
    EmbeddedIndexCode bad_user{{{9, gf::GfVector(F2, 4)}}};
    CHECK_THROWS_AS(codes::check_shape(bad_user, inst), DimensionMismatch);
    EmbeddedIndexCode bad_len{{{1, gf::GfVector(F2, 3)}}};
    CHECK_THROWS_AS(codes::check_shape(bad_len, inst), DimensionMismatch);
}

TEST_CASE("code parsing") {
    CHECK_THROWS_AS((void)codes::parse_code("{", F2), ParseError);
    CHECK_THROWS_AS((void)codes::parse_code(R"({"transmissions":[{"user":0,"coeffs":[1]}]})", F2), ParseError);
    CHECK_THROWS_AS((void)codes::parse_code(R"({"transmissions":[{"user":1,"coeffs":[2]}]})", F2), ParseError);
    const auto code = code_file("example1_code.json");
    CHECK(codes::parse_code(codes::serialize_code(code), F2) == code);
}

TEST_CASE("uncoded scheme decodes everywhere") {
    std::mt19937_64 rng(8);
    for (int t = 0; t < 80; ++t) {
        const auto inst = testsupport::random_valid(rng, 2 + t % 5, 2 + t % 4, t % 2 ? 3 : 2);
        if (!inst) {
            continue;
        }
        const auto code = codes::uncoded_scheme(*inst);
        CHECK(code.length() == model::uniq(inst->demands()));
        CHECK(codes::verify_code(code, *inst).overall);
    }
}

TEST_CASE("decodability is invariant under scaling, permutation and redundant columns") {
    std::mt19937_64 rng(21);
    int checked = 0;
    for (int t = 0; t < 200; ++t) {
        const unsigned qv = t % 2 ? 3 : 5;
        const auto inst = testsupport::random_valid(rng, 3 + t % 3, 3 + t % 3, qv);
        if (!inst) {
            continue;
        }
        const auto q = inst->field();
        // A random code made of transmittable vectors.
        const auto pool = minrank::transmission_pool(*inst);
        EmbeddedIndexCode code;
        for (int k = 0; k < 3; ++k) {
            auto v = pool[rng() % pool.size()];
            Index sender = 0;
            while (!inst->knows_all(sender, v.support())) {
                ++sender;
            }
            code.transmissions.push_back({sender, v});
        }
        std::vector<bool> base;
        for (Index u = 0; u < inst->num_users(); ++u) {
            base.push_back(codes::can_decode(code, *inst, u));
        }

        auto scaled = code;
        for (auto& tr : scaled.transmissions) {
            tr.coeffs.scale(static_cast<gf::Elem>(1 + rng() % (qv - 1)));
        }
        auto permuted = code;
        std::ranges::shuffle(permuted.transmissions, rng);
        auto redundant = code;
        auto combo = code.transmissions[0].coeffs;
        combo.add_scaled(code.transmissions[1].coeffs, 1);
        // Sent by a user holding the union of both supports, if any.
        for (Index j = 0; j < inst->num_users(); ++j) {
            if (inst->knows_all(j, combo.support()) && !combo.is_zero()) {
                redundant.transmissions.push_back({j, combo});
                break;
            }
        }
        redundant.transmissions.push_back(code.transmissions[2]);

        for (Index u = 0; u < inst->num_users(); ++u) {
            CHECK(codes::can_decode(scaled, *inst, u) == base[u]);
            CHECK(codes::can_decode(permuted, *inst, u) == base[u]);
            // A repeated column adds nothing unless it is the user's own copy
            // of another user's transmission.
            CHECK(codes::can_decode(redundant, *inst, u, false) == codes::can_decode(code, *inst, u, false));
            ++checked;
        }
        (void)q;
    }
    CHECK(checked > 300);
}

TEST_CASE("own transmissions never help their sender") {
    std::mt19937_64 rng(33);
    for (int t = 0; t < 200; ++t) {
        const auto inst = testsupport::random_valid(rng, 3 + t % 3, 3 + t % 4, t % 3 ? 2 : 3);
        if (!inst) {
            continue;
        }
        const auto pool = minrank::transmission_pool(*inst);
        EmbeddedIndexCode code;
        for (int k = 0; k < 1 + t % 4; ++k) {
            const auto& v = pool[rng() % pool.size()];
            std::vector<Index> holders;
            for (Index j = 0; j < inst->num_users(); ++j) {
                if (inst->knows_all(j, v.support())) {
                    holders.push_back(j);
                }
            }
            code.transmissions.push_back({holders[rng() % holders.size()], v});
        }
        const auto r = codes::verify_code(code, *inst);
        CHECK(r.own_columns_agree);
        for (Index u = 0; u < inst->num_users(); ++u) {
            CHECK(r.decodable[u] == r.decodable_all_columns[u]);
            if (inst->field().value() == 2) {
                CHECK(r.decodable_all_columns[u] == testsupport::brute_decodes(code, *inst, u));
            }
        }
    }
}

TEST_CASE("the regular tree code from the figure decodes") {
    const auto inst = model::load_instance(testsupport::data_path("t44.json"));
    const auto code = code_file("t44_code.json");
    CHECK(codes::verify_code(code, inst).overall);
    // User 1 needs two transmissions from different users.
    const auto c = codes::decode_coeffs(code, inst, 0);
    CHECK(c.combo[1] == 1);
    CHECK(c.combo[2] == 1);
}
