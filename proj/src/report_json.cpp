#include "eicp/experiments.hpp"
#include "eicp/json_io.hpp"

#include <algorithm>
#include <sstream>

namespace eicp::json_io {

namespace {

json one_based(const std::vector<model::Index>& v) {
    json a = json::array();
    for (auto x : v) {
        a.push_back(x + 1);
    }
    return a;
}

const char* violation_name(model::ViolationKind k) {
    switch (k) {
    case model::ViolationKind::DemandInSideInfo:
        return "demand_in_side_info";
    case model::ViolationKind::MessageAtNoUser:
        return "message_at_no_user";
    case model::ViolationKind::UserHasAllMessages:
        return "user_has_all_messages";
    case model::ViolationKind::MessageAtAllUsers:
        return "message_at_all_users";
    case model::ViolationKind::NoOtherHolder:
        return "no_other_holder";
    }
    return "unknown";
}

} // namespace

json to_json(const gf::GfVector& v) {
    json a = json::array();
    for (auto c : v.coords()) {
        a.push_back(unsigned{c});
    }
    return a;
}

json to_json(const model::ValidationReport& r) {
    json j{{"valid", r.ok()}, {"violations", json::array()}, {"warnings", r.warnings}};
    for (const auto& v : r.violations) {
        j["violations"].push_back({{"kind", violation_name(v.kind)}, {"index", v.index + 1}, {"message", v.message}});
    }
    return j;
}

json to_json(const codes::EmbeddedIndexCode& code) {
    json t = json::array();
    for (const auto& tr : code.transmissions) {
        t.push_back({{"user", tr.transmitter + 1}, {"coeffs", to_json(tr.coeffs)}});
    }
    return {{"transmissions", t}};
}

json to_json(const codes::DecodeReport& r) {
    json users = json::array();
    for (std::size_t i = 0; i < r.decodable.size(); ++i) {
        users.push_back({{"user", i + 1}, {"decodable", static_cast<bool>(r.decodable[i])},
                         {"decodable_all_columns", static_cast<bool>(r.decodable_all_columns[i])}});
    }
    json viol = json::array();
    for (const auto& v : r.support_violations) {
        viol.push_back({{"transmission", v.transmission + 1}, {"user", v.transmitter + 1},
                        {"outside_side_info", one_based(v.outside)}, {"zero", v.zero}});
    }
    return {{"overall", r.overall}, {"own_columns_agree", r.own_columns_agree}, {"users", users},
            {"support_violations", viol}};
}

json to_json(const graphs::StructureWitness& w) {
    json j{{"kind", graphs::to_string(w.kind)}, {"users", one_based(w.users)}, {"messages", one_based(w.messages)},
           {"covered", w.covered}};
    j["covering_user"] = w.covering_user ? json(*w.covering_user + 1) : json(nullptr);
    return j;
}

json to_json(const minrank::MinrankResult& r) {
    json w = json::array();
    for (const auto& v : r.witness) {
        w.push_back(to_json(v));
    }
    return {{"kappa", r.kappa},
            {"candidate_kappa", r.candidate_kappa},
            {"users", one_based(r.users)},
            {"witness", w},
            {"code", to_json(r.code)},
            {"stats",
             {{"nodes_explored", r.stats.nodes_explored},
              {"code_nodes_explored", r.stats.code_nodes_explored},
              {"pool_size", r.stats.pool_size},
              {"candidates_total", r.stats.candidates_total},
              {"candidates_distinct", r.stats.candidates_distinct},
              {"product_size", r.stats.product_size.str()},
              {"bound_new_def", r.stats.bound_new_def.str()},
              {"bound_old_def_pair", r.stats.bound_old_def_pair.str()}}}};
}

json to_json(const minrank::OracleResult& r) {
    return {{"length", r.length}, {"found", r.found}, {"subsets_tested", r.subsets_tested},
            {"pool_size", r.pool_size}};
}

json to_json(const minrank::ComplexityReport& r) {
    return {{"actual", r.actual.str()},
            {"bound_new", r.bound_new.str()},
            {"old_side_info_matrices", r.old_a_count.str()},
            {"old_side_info_shape", {r.old_a_rows, r.old_a_cols}},
            {"old_concatenated_matrices", r.old_concat_count.str()},
            {"old_concatenated_shape", {r.old_a_rows, r.old_concat_cols}},
            {"old_total_rank_computations", r.old_total.str()}};
}

json to_json(const covers::CoverPlan& p) {
    json s = json::array();
    for (const auto& w : p.structures) {
        s.push_back(to_json(w));
    }
    return {{"scheme", covers::to_string(p.scheme)},
            {"exact", p.exact},
            {"structures", s},
            {"code", to_json(p.code)},
            {"counts",
             {{"K", p.counts.structures}, {"K_e", p.counts.single_edges}, {"length", p.counts.length}}},
            {"flags", {{"all_bicliques_covered", p.all_bicliques_covered}, {"task_based", p.task_based}}}};
}

} // namespace eicp::json_io

namespace eicp::experiments {

std::string to_tsv(const ExperimentReport& r) {
    std::ostringstream out;
    out << "# " << r.name;
    for (const auto& [k, v] : r.parameters) {
        out << ' ' << k << '=' << v;
    }
    out << '\n';
    for (std::size_t c = 0; c < r.columns.size(); ++c) {
        out << (c ? "\t" : "") << r.columns[c];
    }
    out << '\n';
    for (const auto& row : r.rows) {
        for (std::size_t c = 0; c < row.size(); ++c) {
            out << (c ? "\t" : "") << row[c];
        }
        out << '\n';
    }
    for (const auto& n : r.notes) {
        std::string flat = n;
        std::ranges::replace(flat, '\n', ' ');
        out << "# " << flat << '\n';
    }
    out << "# verdict: " << (r.pass ? "PASS" : "FAIL") << " (" << r.verdict << ")\n";
    return out.str();
}

std::string to_json(const ExperimentReport& r) {
    nlohmann::json params = nlohmann::json::object();
    for (const auto& [k, v] : r.parameters) {
        params[k] = v;
    }
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& row : r.rows) {
        nlohmann::json o = nlohmann::json::object();
        for (std::size_t c = 0; c < row.size() && c < r.columns.size(); ++c) {
            o[r.columns[c]] = row[c];
        }
        rows.push_back(std::move(o));
    }
    nlohmann::json j{{"name", r.name},
                     {"parameters", params},
                     {"rows", rows},
                     {"verdict", {{"pass", r.pass}, {"detail", r.verdict}}},
                     {"notes", r.notes}};
    j["counterexample"] = r.counterexample ? nlohmann::json::parse(*r.counterexample) : nlohmann::json(nullptr);
    return j.dump(2) + "\n";
}

} // namespace eicp::experiments
