// eicp: command-line driver.
//
// Exit codes: 0 success, 1 invalid input or failed assertion, 2 resource
// guard or generation failure, 3 solver/oracle disagreement.

#include "eicp/codes.hpp"
#include "eicp/covers.hpp"
#include "eicp/error.hpp"
#include "eicp/experiments.hpp"
#include "eicp/graphs.hpp"
#include "eicp/json_io.hpp"
#include "eicp/minrank.hpp"
#include "eicp/model.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

namespace {

using namespace eicp;
using nlohmann::json;

enum Exit : int { kOk = 0, kInvalid = 1, kGuard = 2, kMismatch = 3 };

struct Output {
    std::string path;
    bool json = false;

    void write(const std::string& text) const {
        if (path.empty()) {
            std::cout << text;
            return;
        }
        std::ofstream f(path);
        if (!f) {
            throw Error("cannot write " + path);
        }
        f << text;
    }
    void write(const nlohmann::json& j) const { write(j.dump(2) + "\n"); }
};

model::EicpInstance load(const std::string& path, std::optional<unsigned> q_override = std::nullopt) {
    auto inst = model::load_instance(path);
    if (q_override) {
        inst = inst.with_field(gf::FieldOrder(*q_override));
    }
    return inst;
}

// Rejects instances that violate the validity constraints.
model::EicpInstance load_valid(const std::string& path, std::optional<unsigned> q_override = std::nullopt) {
    auto inst = load(path, q_override);
    const auto report = model::validate(inst);
    for (const auto& w : report.warnings) {
        std::cerr << "warning: " << w << '\n';
    }
    if (!report.ok()) {
        for (const auto& v : report.violations) {
            std::cerr << "invalid instance: " << v.message << '\n';
        }
        throw StructuralError("instance violates " + std::to_string(report.violations.size()) + " constraint(s)");
    }
    return inst;
}

int cmd_validate(const std::string& path, const Output& out) {
    const auto inst = load(path);
    const auto report = model::validate(inst);
    auto j = json_io::to_json(report);
    const auto cls = model::classify(inst);
    j["single_unicast"] = cls.single_unicast;
    j["single_uniprior"] = cls.single_uniprior;
    j["uniq"] = model::uniq(inst.demands());
    out.write(j);
    return report.ok() ? kOk : kInvalid;
}

int cmd_minrank(const std::string& path, bool oracle, bool stats, std::optional<unsigned> q, bool serial,
                const Output& out) {
    const auto inst = load_valid(path, q);
    minrank::MinrankOptions opts;
    opts.parallel = !serial;
    opts.node_guard = minrank::node_guard_from_env();
    const auto result = minrank::minrank_bnb(inst, opts);
    auto j = json_io::to_json(result);
    if (!stats) {
        j.erase("stats");
    } else {
        j["complexity"] = json_io::to_json(minrank::complexity_report(inst));
    }

    int rc = kOk;
    if (oracle) {
        const auto o = minrank::minrank_oracle(inst, result.kappa);
        j["oracle"] = json_io::to_json(o);
        if (!o.found || o.length != result.kappa) {
            std::cerr << "oracle length " << o.length << " disagrees with minrank " << result.kappa << '\n';
            rc = kMismatch;
        }
    }
    out.write(j);
    return rc;
}

int cmd_cover(const std::string& path, const std::string& scheme, bool exact, const Output& out) {
    const auto inst = load_valid(path);
    const auto plan = scheme == "tree" ? covers::tree_cover(inst, exact) : covers::biclique_cover(inst, exact);
    const auto report = codes::verify_code(plan.code, inst);
    auto j = json_io::to_json(plan);
    j["verification"] = json_io::to_json(report);
    out.write(j);
    if (!report.overall) {
        std::cerr << "emitted code does not verify\n";
        return kInvalid;
    }
    return kOk;
}

int cmd_verify(const std::string& inst_path, const std::string& code_path, const Output& out) {
    const auto inst = load(inst_path);
    const auto code = codes::load_code(code_path, inst.field());
    const auto report = codes::verify_code(code, inst);
    out.write(json_io::to_json(report));
    if (report.overall) {
        return kOk;
    }
    for (std::size_t u = 0; u < report.decodable.size(); ++u) {
        if (!report.decodable[u]) {
            std::cerr << "user " << u + 1 << " cannot decode x_" << inst.demand(u) + 1 << '\n';
        }
    }
    for (const auto& v : report.support_violations) {
        std::cerr << "transmission " << v.transmission + 1 << " by user " << v.transmitter + 1
                  << (v.zero ? " is zero" : " uses messages outside its side information") << '\n';
    }
    return kInvalid;
}

struct GenParams {
    std::string model = "uniform";
    std::size_t users = 4;
    std::size_t messages = 4;
    unsigned q = 2;
    double density = 0.5;
    double overlap = 0.8;
    std::uint64_t seed = 1;
};

int cmd_gen(const GenParams& p, const Output& out) {
    if (p.model == "vanet" && !(p.overlap >= 0.5 && p.overlap < 1.0)) {
        std::cerr << "overlap must lie in [0.5, 1), got " << p.overlap << '\n';
        return kInvalid;
    }
    if (p.users < 2 || p.messages < 1 || !(p.density >= 0.0 && p.density <= 1.0)) {
        std::cerr << "need N >= 2, M >= 1 and density in [0, 1]\n";
        return kInvalid;
    }
    const gf::FieldOrder q(p.q);
    const auto inst = p.model == "vanet" ? model::gen_vanet(p.users, p.messages, q, p.overlap, p.seed)
                                         : model::gen_random(p.users, p.messages, q, p.density, p.seed);
    out.write(model::serialize_instance(inst));
    return kOk;
}

int cmd_structures(const std::string& path, std::size_t n_max, const Output& out) {
    const auto inst = load_valid(path);
    if (!model::classify(inst).single_unicast) {
        throw NotSingleUnicast("structure search needs a single unicast instance");
    }
    const auto g = graphs::build_side_info_graph(inst);
    std::vector<model::Index> pool = inst.demands();
    std::ranges::sort(pool);
    json j{{"connected", graphs::is_connected(g)}, {"regular_trees", json::array()}, {"bicliques", json::array()}};
    for (const auto& w : graphs::search_regular_trees(g, inst.demands(), pool, n_max)) {
        j["regular_trees"].push_back(json_io::to_json(w));
    }
    for (const auto& w : graphs::search_bicliques(g, inst.demands(), pool, n_max)) {
        j["bicliques"].push_back(json_io::to_json(w));
    }
    out.write(j);
    return kOk;
}

int emit_report(const experiments::ExperimentReport& r, const Output& out) {
    out.write(out.json ? experiments::to_json(r) : experiments::to_tsv(r));
    return r.pass ? kOk : kInvalid;
}

template <class F>
int guarded(F&& f) {
    try {
        return f();
    } catch (const GuardExceeded& e) {
        std::cerr << "guard exceeded: " << e.what() << '\n';
        return kGuard;
    } catch (const GenerationFailure& e) {
        std::cerr << "generation failed: " << e.what() << '\n';
        return kGuard;
    } catch (const ParseError& e) {
        std::cerr << "parse error: " << e.what() << '\n';
        return kInvalid;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kInvalid;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kInvalid;
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Embedded index coding workbench"};
    app.require_subcommand(1);
    Output out;
    app.add_option("--out", out.path, "Write output to FILE instead of stdout");
    app.add_flag("--json", out.json, "JSON instead of TSV for tabular output");
    int rc = kOk;

    std::string inst_path;
    std::string code_path;

    auto* validate = app.add_subcommand("validate", "Check an instance against the validity constraints");
    validate->add_option("instance", inst_path)->required();
    validate->callback([&] { rc = guarded([&] { return cmd_validate(inst_path, out); }); });

    bool oracle = false;
    bool stats = false;
    bool serial = false;
    std::optional<unsigned> q_override;
    auto* minrank = app.add_subcommand("minrank", "Exact minrank with witness and extracted code");
    minrank->add_option("instance", inst_path)->required();
    minrank->add_flag("--oracle", oracle, "Cross-check against the minimum decodable code length");
    minrank->add_flag("--stats", stats, "Include search and complexity counters");
    minrank->add_option("--q-override", q_override, "Solve over a different prime field");
    minrank->add_flag("--serial", serial, "Disable the OpenMP search");
    minrank->callback(
        [&] { rc = guarded([&] { return cmd_minrank(inst_path, oracle, stats, q_override, serial, out); }); });

    std::string scheme = "tree";
    bool exact = false;
    auto* cover = app.add_subcommand("cover", "Tree or bi-clique cover of a single unicast instance");
    cover->add_option("instance", inst_path)->required();
    cover->add_option("--scheme", scheme)->check(CLI::IsMember({"tree", "biclique"}));
    cover->add_flag("--exact", exact, "Minimum-length cover by subset DP (N <= 8)");
    cover->callback([&] { rc = guarded([&] { return cmd_cover(inst_path, scheme, exact, out); }); });

    auto* verify = app.add_subcommand("verify", "Check that a code lets every user decode");
    verify->add_option("instance", inst_path)->required();
    verify->add_option("code", code_path)->required();
    verify->callback([&] { rc = guarded([&] { return cmd_verify(inst_path, code_path, out); }); });

    GenParams gp;
    auto* gen = app.add_subcommand("gen", "Generate a random valid instance");
    gen->add_option("--model", gp.model)->check(CLI::IsMember({"uniform", "vanet"}));
    gen->add_option("-N,--users", gp.users);
    gen->add_option("-M,--messages", gp.messages);
    gen->add_option("-q,--field", gp.q);
    gen->add_option("--density", gp.density);
    gen->add_option("--overlap", gp.overlap);
    gen->add_option("--seed", gp.seed);
    gen->callback([&] { rc = guarded([&] { return cmd_gen(gp, out); }); });

    std::size_t n_max = graphs::kDefaultStructureMax;
    auto* structures = app.add_subcommand("structures", "List regular trees and bi-cliques");
    structures->add_option("instance", inst_path)->required();
    structures->add_option("--max", n_max, "Largest structure size searched");
    structures->callback([&] { rc = guarded([&] { return cmd_structures(inst_path, n_max, out); }); });

    auto* experiment = app.add_subcommand("experiment", "Empirical studies");
    experiment->require_subcommand(1);

    experiments::Fig5Options f5;
    auto* fig5 = experiment->add_subcommand("fig5", "N = M = 3 side-information classes");
    fig5->add_option("-q,--field", f5.q);
    fig5->add_option("--threads", f5.threads);
    fig5->callback([&] { rc = guarded([&] { return emit_report(experiments::experiment_fig5(f5), out); }); });

    experiments::Theorem2Options t2;
    auto* thm2 = experiment->add_subcommand("theorem2", "Connectedness scan");
    thm2->add_option("--n-max", t2.n_max);
    thm2->add_option("--m-max", t2.m_max);
    thm2->add_option("-q,--field", t2.q);
    thm2->add_option("--samples", t2.samples);
    thm2->add_option("--seed", t2.seed);
    thm2->add_option("--threads", t2.threads);
    thm2->callback([&] { rc = guarded([&] { return emit_report(experiments::experiment_theorem2(t2), out); }); });

    experiments::SweepOptions sw;
    std::string kind = "tree";
    auto* sweep = experiment->add_subcommand("lemma-sweep", "Regular tree and bi-clique sweeps");
    sweep->add_option("--kind", kind)->check(CLI::IsMember({"tree", "biclique", "random-tree"}));
    sweep->add_option("--n-lo", sw.n_lo);
    sweep->add_option("--n-hi", sw.n_hi);
    sweep->add_option("-q,--field", sw.q);
    sweep->add_option("--random-trees", sw.random_trees);
    sweep->add_option("--seed", sw.seed);
    sweep->callback([&] {
        sw.kind = kind == "tree"       ? experiments::SweepKind::Tree
                  : kind == "biclique" ? experiments::SweepKind::BiClique
                                       : experiments::SweepKind::RandomTree;
        rc = guarded([&] { return emit_report(experiments::experiment_lemma_sweep(sw), out); });
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kInvalid;
    }
    return rc;
}
