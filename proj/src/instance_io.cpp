#include "eicp/error.hpp"
#include "eicp/model.hpp"

#include <json.hpp>

#include <fstream>
#include <sstream>

namespace eicp::model {

namespace {

using nlohmann::json;
using Kind = ParseError::Kind;

std::size_t get_count(const json& j, const char* key) {
    if (!j.contains(key)) {
        throw ParseError(Kind::Schema, std::string("missing key \"") + key + "\"");
    }
    const auto& v = j.at(key);
    if (!v.is_number_integer() || v.get<long long>() < 0) {
        throw ParseError(Kind::Schema, std::string("\"") + key + "\" must be a non-negative integer");
    }
    return v.get<std::size_t>();
}

Index get_index(const json& v, std::size_t num_messages, const std::string& where) {
    if (!v.is_number_integer()) {
        throw ParseError(Kind::Schema, where + ": message index must be an integer");
    }
    const long long x = v.get<long long>();
    if (x < 1 || static_cast<unsigned long long>(x) > num_messages) {
        throw ParseError(Kind::OutOfRange, where + ": message index " + std::to_string(x) + " outside [1, " +
                                               std::to_string(num_messages) + "]");
    }
    return static_cast<Index>(x - 1);
}

IndexSet get_set(const json& v, std::size_t num_messages, const std::string& where) {
    if (!v.is_array()) {
        throw ParseError(Kind::Schema, where + " must be an array");
    }
    IndexSet s;
    for (const auto& e : v) {
        s.push_back(get_index(e, num_messages, where));
    }
    std::ranges::sort(s);
    if (std::ranges::adjacent_find(s) != s.end()) {
        throw ParseError(Kind::Schema, where + " repeats a message");
    }
    return s;
}

} // namespace

EicpInstance parse_instance(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(Kind::MalformedJson, std::string("malformed JSON: ") + e.what());
    }
    if (!j.is_object()) {
        throw ParseError(Kind::Schema, "instance must be a JSON object");
    }
    for (const auto& [key, _] : j.items()) {
        if (key != "q" && key != "num_users" && key != "num_messages" && key != "side_info" && key != "demands" &&
            key != "wants") {
            throw ParseError(Kind::Schema, "unknown key \"" + key + "\"");
        }
    }
    if (j.contains("demands") == j.contains("wants")) {
        throw ParseError(Kind::Schema, "exactly one of \"demands\" and \"wants\" is required");
    }

    const std::size_t q_raw = get_count(j, "q");
    std::optional<gf::FieldOrder> q;
    try {
        q.emplace(static_cast<unsigned>(std::min<std::size_t>(q_raw, 1u << 16)));
    } catch (const FieldError&) {
        throw ParseError(Kind::NonPrimeField, "field order must be prime (2 <= q <= 251), got " +
                                                  std::to_string(q_raw));
    }
    const std::size_t n = get_count(j, "num_users");
    const std::size_t m = get_count(j, "num_messages");
    if (!j.contains("side_info") || !j["side_info"].is_array() || j["side_info"].size() != n) {
        throw ParseError(Kind::Schema, "\"side_info\" must be an array of num_users sets");
    }
    std::vector<IndexSet> side_info;
    for (std::size_t i = 0; i < n; ++i) {
        side_info.push_back(get_set(j["side_info"][i], m, "side_info[" + std::to_string(i + 1) + "]"));
    }

    if (j.contains("demands")) {
        const auto& d = j["demands"];
        if (!d.is_array() || d.size() != n) {
            throw ParseError(Kind::Schema, "\"demands\" must be an array of num_users indices");
        }
        std::vector<Index> demands;
        for (std::size_t i = 0; i < n; ++i) {
            demands.push_back(get_index(d[i], m, "demands[" + std::to_string(i + 1) + "]"));
        }
        return EicpInstance(*q, m, std::move(side_info), std::move(demands));
    }

    const auto& w = j["wants"];
    if (!w.is_array() || w.size() != n) {
        throw ParseError(Kind::Schema, "\"wants\" must be an array of num_users sets");
    }
    RawEicp raw{*q, m, {}};
    for (std::size_t i = 0; i < n; ++i) {
        raw.users.push_back({get_set(w[i], m, "wants[" + std::to_string(i + 1) + "]"), side_info[i]});
    }
    try {
        return split_multi_demand(raw);
    } catch (const NoDemandError& e) {
        throw ParseError(Kind::Schema, e.what());
    } catch (const StructuralError& e) {
        throw ParseError(Kind::Schema, e.what());
    }
}

std::string serialize_instance(const EicpInstance& inst) {
    json side = json::array();
    for (const auto& k : inst.side_info()) {
        json s = json::array();
        for (Index m : k) {
            s.push_back(m + 1);
        }
        side.push_back(std::move(s));
    }
    json demands = json::array();
    for (Index d : inst.demands()) {
        demands.push_back(d + 1);
    }
    std::ostringstream out;
    out << "{\n"
        << "  \"q\": " << inst.field().value() << ",\n"
        << "  \"num_users\": " << inst.num_users() << ",\n"
        << "  \"num_messages\": " << inst.num_messages() << ",\n"
        << "  \"side_info\": " << side.dump() << ",\n"
        << "  \"demands\": " << demands.dump() << "\n"
        << "}\n";
    return out.str();
}

EicpInstance load_instance(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw ParseError(Kind::MalformedJson, "cannot read " + path);
    }
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_instance(buf.str());
}

} // namespace eicp::model
