#include "eicp/codes.hpp"

#include "eicp/error.hpp"

#include <json.hpp>

#include <algorithm>
#include <fstream>
#include <sstream>
#include <string>

namespace eicp::codes {

std::vector<Index> EmbeddedIndexCode::transmitters() const {
    std::vector<Index> t;
    for (const auto& tr : transmissions) {
        t.push_back(tr.transmitter);
    }
    std::ranges::sort(t);
    t.erase(std::unique(t.begin(), t.end()), t.end());
    return t;
}

void check_shape(const EmbeddedIndexCode& code, const model::EicpInstance& inst) {
    for (std::size_t t = 0; t < code.length(); ++t) {
        const auto& tr = code.transmissions[t];
        if (tr.transmitter >= inst.num_users()) {
            throw DimensionMismatch("transmission " + std::to_string(t + 1) + " names user " +
                                    std::to_string(tr.transmitter + 1) + " but the instance has " +
                                    std::to_string(inst.num_users()) + " users");
        }
        if (tr.coeffs.size() != inst.num_messages()) {
            throw DimensionMismatch("transmission " + std::to_string(t + 1) + " has " +
                                    std::to_string(tr.coeffs.size()) + " coefficients, instance has " +
                                    std::to_string(inst.num_messages()) + " messages");
        }
        if (tr.coeffs.field() != inst.field()) {
            throw DimensionMismatch("transmission " + std::to_string(t + 1) + " is over a different field");
        }
    }
}

namespace {

std::vector<SupportViolation> support_violations(const EmbeddedIndexCode& code, const model::EicpInstance& inst) {
    std::vector<SupportViolation> out;
    for (std::size_t t = 0; t < code.length(); ++t) {
        const auto& tr = code.transmissions[t];
        SupportViolation v{t, tr.transmitter, {}, tr.coeffs.is_zero()};
        for (Index m : tr.coeffs.support()) {
            if (!inst.knows(tr.transmitter, m)) {
                v.outside.push_back(m);
            }
        }
        if (v.zero || !v.outside.empty()) {
            out.push_back(std::move(v));
        }
    }
    return out;
}

// Span of the code columns (optionally without one user's) and the user's
// side-information unit vectors.
gf::EchelonBasis decoder_space(const EmbeddedIndexCode& code, const model::EicpInstance& inst, Index user,
                               bool exclude_own) {
    gf::EchelonBasis basis(inst.field(), inst.num_messages());
    for (const auto& tr : code.transmissions) {
        if (!(exclude_own && tr.transmitter == user)) {
            basis.insert(tr.coeffs);
        }
    }
    for (Index k : inst.side_info(user)) {
        basis.insert(gf::GfVector::unit(inst.field(), inst.num_messages(), k));
    }
    return basis;
}

} // namespace

gf::GfMatrix assemble_matrix(const EmbeddedIndexCode& code, const model::EicpInstance& inst) {
    check_shape(code, inst);
    const auto bad = support_violations(code, inst);
    if (!bad.empty()) {
        throw InvalidCode("transmission " + std::to_string(bad.front().transmission + 1) + " by user " +
                          std::to_string(bad.front().transmitter + 1) +
                          (bad.front().zero ? " is zero" : " uses messages outside its side information"));
    }
    std::vector<gf::GfVector> cols;
    for (const auto& tr : code.transmissions) {
        cols.push_back(tr.coeffs);
    }
    return gf::GfMatrix::from_columns(inst.field(), inst.num_messages(), cols);
}

bool can_decode(const EmbeddedIndexCode& code, const model::EicpInstance& inst, Index user, bool exclude_own) {
    check_shape(code, inst);
    const auto basis = decoder_space(code, inst, user, exclude_own);
    return basis.in_span(gf::GfVector::unit(inst.field(), inst.num_messages(), inst.demand(user)));
}

DecodeReport verify_code(const EmbeddedIndexCode& code, const model::EicpInstance& inst) {
    check_shape(code, inst);
    DecodeReport r;
    r.support_violations = support_violations(code, inst);
    bool all = true;
    for (Index i = 0; i < inst.num_users(); ++i) {
        r.decodable.push_back(can_decode(code, inst, i, true));
        r.decodable_all_columns.push_back(can_decode(code, inst, i, false));
        r.own_columns_agree = r.own_columns_agree && r.decodable.back() == r.decodable_all_columns.back();
        all = all && r.decodable.back();
    }
    r.overall = all && r.support_violations.empty();
    return r;
}

EmbeddedIndexCode uncoded_scheme(const model::EicpInstance& inst) {
    std::vector<Index> demanded(inst.demands());
    std::ranges::sort(demanded);
    demanded.erase(std::unique(demanded.begin(), demanded.end()), demanded.end());
    EmbeddedIndexCode code;
    for (Index m : demanded) {
        for (Index j = 0; j < inst.num_users(); ++j) {
            if (inst.knows(j, m)) {
                code.transmissions.push_back({j, gf::GfVector::unit(inst.field(), inst.num_messages(), m)});
                break;
            }
        }
    }
    return code;
}

DecodeCoefficients decode_coeffs(const EmbeddedIndexCode& code, const model::EicpInstance& inst, Index user) {
    check_shape(code, inst);
    const auto q = inst.field();
    const std::size_t m = inst.num_messages();
    const auto& k = inst.side_info(user);

    std::vector<std::size_t> used;
    std::vector<gf::GfVector> cols;
    for (std::size_t t = 0; t < code.length(); ++t) {
        if (code.transmissions[t].transmitter != user) {
            used.push_back(t);
            cols.push_back(code.transmissions[t].coeffs);
        }
    }
    for (Index x : k) {
        cols.push_back(gf::GfVector::unit(q, m, x));
    }
    const auto a = gf::GfMatrix::from_columns(q, m, cols);
    const auto y = gf::solve(a, gf::GfVector::unit(q, m, inst.demand(user)));
    if (!y) {
        throw NotDecodable("user " + std::to_string(user + 1) + " cannot decode message " +
                           std::to_string(inst.demand(user) + 1));
    }
    DecodeCoefficients out{gf::GfVector(q, code.length()), gf::GfVector(q, k.size())};
    for (std::size_t c = 0; c < used.size(); ++c) {
        out.combo.set(used[c], (*y)[c]);
    }
    for (std::size_t c = 0; c < k.size(); ++c) {
        out.correction.set(c, q.neg((*y)[used.size() + c]));
    }
    return out;
}

// ---------------------------------------------------------------------- I/O

EmbeddedIndexCode parse_code(const std::string& text, gf::FieldOrder q) {
    using nlohmann::json;
    using Kind = ParseError::Kind;
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(Kind::MalformedJson, std::string("malformed JSON: ") + e.what());
    }
    if (!j.is_object() || !j.contains("transmissions") || !j["transmissions"].is_array()) {
        throw ParseError(Kind::Schema, "code must be an object with a \"transmissions\" array");
    }
    for (const auto& [key, _] : j.items()) {
        if (key != "transmissions") {
            throw ParseError(Kind::Schema, "unknown key \"" + key + "\"");
        }
    }
    EmbeddedIndexCode code;
    std::size_t t = 0;
    for (const auto& tr : j["transmissions"]) {
        ++t;
        const std::string where = "transmission " + std::to_string(t);
        if (!tr.is_object() || !tr.contains("user") || !tr.contains("coeffs") || tr.size() != 2) {
            throw ParseError(Kind::Schema, where + " must have exactly \"user\" and \"coeffs\"");
        }
        if (!tr["user"].is_number_integer() || tr["user"].get<long long>() < 1) {
            throw ParseError(Kind::OutOfRange, where + ": user must be a positive integer");
        }
        if (!tr["coeffs"].is_array()) {
            throw ParseError(Kind::Schema, where + ": coeffs must be an array");
        }
        std::vector<long long> coeffs;
        for (const auto& c : tr["coeffs"]) {
            if (!c.is_number_integer()) {
                throw ParseError(Kind::Schema, where + ": coefficients must be integers");
            }
            const long long v = c.get<long long>();
            if (v < 0 || v >= static_cast<long long>(q.value())) {
                throw ParseError(Kind::OutOfRange, where + ": coefficient " + std::to_string(v) +
                                                       " outside [0, " + std::to_string(q.value()) + ")");
            }
            coeffs.push_back(v);
        }
        code.transmissions.push_back(
            {static_cast<Index>(tr["user"].get<long long>() - 1), gf::GfVector(q, std::span<const long long>(coeffs))});
    }
    return code;
}

std::string serialize_code(const EmbeddedIndexCode& code) {
    std::ostringstream out;
    out << "{\n  \"transmissions\": [";
    for (std::size_t t = 0; t < code.length(); ++t) {
        const auto& tr = code.transmissions[t];
        out << (t == 0 ? "\n" : ",\n") << "    { \"user\": " << tr.transmitter + 1 << ", \"coeffs\": [";
        for (std::size_t m = 0; m < tr.coeffs.size(); ++m) {
            out << (m == 0 ? "" : ",") << unsigned{tr.coeffs[m]};
        }
        out << "] }";
    }
    out << (code.length() == 0 ? "]\n}\n" : "\n  ]\n}\n");
    return out.str();
}

EmbeddedIndexCode load_code(const std::string& path, gf::FieldOrder q) {
    std::ifstream in(path);
    if (!in) {
        throw ParseError(ParseError::Kind::MalformedJson, "cannot read " + path);
    }
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_code(buf.str(), q);
}

} // namespace eicp::codes
