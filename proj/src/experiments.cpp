#include "eicp/experiments.hpp"

#include "eicp/codes.hpp"
#include "eicp/covers.hpp"
#include "eicp/error.hpp"
#include "eicp/graphs.hpp"
#include "eicp/minrank.hpp"

#include <omp.h>

#include <algorithm>
#include <map>
#include <numeric>
#include <random>
#include <sstream>

namespace eicp::experiments {

namespace {

std::string str(std::size_t v) {
    return std::to_string(v);
}

std::string yes_no(bool b) {
    return b ? "yes" : "no";
}

minrank::MinrankOptions serial() {
    minrank::MinrankOptions o;
    o.parallel = false;
    o.node_guard = minrank::node_guard_from_env();
    return o;
}

int thread_count(int requested) {
    return requested > 0 ? requested : omp_get_max_threads();
}

} // namespace

// ------------------------------------------------------------- instances

model::EicpInstance regular_tree_instance(std::size_t n, gf::FieldOrder q) {
    if (n < 3) {
        throw StructuralError("regular trees need n >= 3");
    }
    std::vector<model::IndexSet> side(n);
    std::vector<Index> d(n);
    for (Index i = 0; i < n; ++i) {
        d[i] = i;
        if (i + 1 < n) {
            side[i] = {(i + 1) % n, (i + 2) % n};
            std::ranges::sort(side[i]);
        } else {
            side[i] = {0};
        }
    }
    return model::EicpInstance(q, n, std::move(side), std::move(d));
}

model::EicpInstance biclique_instance(std::size_t n, bool covered, gf::FieldOrder q) {
    if (n < 2) {
        throw StructuralError("bi-clique instances need n >= 2");
    }
    const std::size_t m = covered ? n + 1 : n;
    std::vector<model::IndexSet> side(m);
    std::vector<Index> d(m);
    for (Index i = 0; i < n; ++i) {
        d[i] = i;
        for (Index j = 0; j < n; ++j) {
            if (j != i) {
                side[i].push_back(j);
            }
        }
    }
    if (covered) {
        d[n] = n;
        for (Index j = 0; j < n; ++j) {
            side[n].push_back(j);
        }
        side[0].push_back(n);
    }
    return model::EicpInstance(q, m, std::move(side), std::move(d));
}

model::EicpInstance random_tree_instance(std::size_t n, gf::FieldOrder q, std::uint64_t seed) {
    if (n < 3) {
        throw GenerationFailure("random tree instances need n >= 3");
    }
    std::mt19937_64 rng(seed);
    for (int attempt = 0; attempt < 256; ++attempt) {
        // Vertices 0..n-1 are users, n..2n-1 messages; attach each new
        // vertex to a uniformly chosen tree vertex on the other side.
        std::vector<std::size_t> order(2 * n);
        std::iota(order.begin(), order.end(), 0);
        std::ranges::shuffle(order, rng);
        std::vector<std::size_t> in_users;
        std::vector<std::size_t> in_msgs;
        std::vector<model::IndexSet> side(n);
        auto place = [&](std::size_t v) { (v < n ? in_users : in_msgs).push_back(v); };
        place(order[0]);
        std::vector<std::size_t> pending(order.begin() + 1, order.end());
        while (!pending.empty()) {
            auto it = std::ranges::find_if(pending, [&](std::size_t v) {
                return v < n ? !in_msgs.empty() : !in_users.empty();
            });
            const std::size_t v = *it;
            pending.erase(it);
            const auto& other = v < n ? in_msgs : in_users;
            const std::size_t w = other[std::uniform_int_distribution<std::size_t>(0, other.size() - 1)(rng)];
            const std::size_t user = v < n ? v : w;
            const std::size_t msg = (v < n ? w : v) - n;
            side[user].push_back(msg);
            place(v);
        }
        for (auto& k : side) {
            std::ranges::sort(k);
        }
        // Demand permutation: shuffle until every user wants a message it
        // lacks and someone else holds.
        std::vector<Index> d(n);
        std::iota(d.begin(), d.end(), 0);
        for (int tries = 0; tries < 256; ++tries) {
            std::ranges::shuffle(d, rng);
            model::EicpInstance inst(q, n, side, d);
            if (model::validate(inst).ok()) {
                return inst;
            }
        }
    }
    throw GenerationFailure("no valid single unicast instance on a random tree with n = " + str(n));
}

std::vector<std::vector<model::IndexSet>> enumerate_side_info(std::size_t n, std::size_t m) {
    if (n * m > 20) {
        throw GuardExceeded("side-information enumeration needs N * M <= 20");
    }
    std::vector<std::vector<model::IndexSet>> out;
    const std::uint64_t total = std::uint64_t{1} << (n * m);
    for (std::uint64_t bits = 0; bits < total; ++bits) {
        std::vector<model::IndexSet> side(n);
        std::vector<std::size_t> holders(m, 0);
        bool ok = true;
        for (Index i = 0; i < n && ok; ++i) {
            for (Index j = 0; j < m; ++j) {
                if (bits >> (i * m + j) & 1U) {
                    side[i].push_back(j);
                    ++holders[j];
                }
            }
            ok = side[i].size() < m;
        }
        ok = ok && std::ranges::all_of(holders, [&](std::size_t h) { return h > 0 && h < n; });
        if (ok) {
            out.push_back(std::move(side));
        }
    }
    return out;
}

namespace {

struct ClassRep {
    std::string key;
    std::vector<model::IndexSet> side;
};

// One representative per canonical class, in order of first appearance,
// then sorted by canonical key.
std::vector<ClassRep> classes(std::size_t n, std::size_t m) {
    std::map<std::string, std::vector<model::IndexSet>> seen;
    for (auto& side : enumerate_side_info(n, m)) {
        graphs::SideInfoBipartiteGraph g(m, side);
        seen.try_emplace(graphs::canonical_form(g), std::move(side));
    }
    std::vector<ClassRep> out;
    for (auto& [key, side] : seen) {
        out.push_back({key, std::move(side)});
    }
    return out;
}

std::string sets_text(const std::vector<model::IndexSet>& side) {
    std::ostringstream out;
    for (std::size_t i = 0; i < side.size(); ++i) {
        out << (i ? " " : "") << "{";
        for (std::size_t k = 0; k < side[i].size(); ++k) {
            out << (k ? "," : "") << side[i][k] + 1;
        }
        out << "}";
    }
    return out.str();
}

} // namespace

// ------------------------------------------------------------------- fig5

ExperimentReport experiment_fig5(const Fig5Options& opts) {
    const gf::FieldOrder q(opts.q);
    ExperimentReport r;
    r.name = "fig5";
    r.parameters = {{"N", "3"}, {"M", "3"}, {"q", str(opts.q)}};
    r.columns = {"class", "side_info", "connected", "demands_all_distinct", "min_kappa", "max_kappa"};

    const auto reps = classes(3, 3);
    struct Row {
        bool connected = false;
        std::size_t demands = 0;
        std::size_t min_kappa = 0;
        std::size_t max_kappa = 0;
        std::optional<std::string> first_failure;
    };
    std::vector<Row> rows(reps.size());
    const auto n_reps = static_cast<std::ptrdiff_t>(reps.size());
#pragma omp parallel for schedule(dynamic, 1) num_threads(thread_count(opts.threads))
    for (std::ptrdiff_t c = 0; c < n_reps; ++c) {
        const auto& rep = reps[static_cast<std::size_t>(c)];
        Row& row = rows[static_cast<std::size_t>(c)];
        row.connected = graphs::is_connected(graphs::SideInfoBipartiteGraph(3, rep.side));
        row.min_kappa = 3;
        for (const auto& d : model::enumerate_demands(rep.side, 3)) {
            const model::EicpInstance inst(q, 3, rep.side, d);
            if (model::uniq(d) != 3 || !model::validate(inst).ok()) {
                continue;
            }
            ++row.demands;
            const std::size_t k = minrank::minrank_bnb(inst, serial()).kappa;
            row.min_kappa = std::min(row.min_kappa, k);
            row.max_kappa = std::max(row.max_kappa, k);
            if (k < 3 && !row.connected && !row.first_failure) {
                row.first_failure = model::serialize_instance(inst);
            }
        }
    }

    std::size_t connected = 0;
    bool iff = true;
    for (std::size_t c = 0; c < reps.size(); ++c) {
        const Row& row = rows[c];
        connected += row.connected ? 1 : 0;
        const bool coded = row.demands > 0 && row.min_kappa < 3;
        if (coded != row.connected) {
            iff = false;
            if (!r.counterexample) {
                r.counterexample = row.first_failure;
                if (!r.counterexample) {
                    // Connected class without any coding gain: use its first
                    // all-distinct demand.
                    for (const auto& d : model::enumerate_demands(reps[c].side, 3)) {
                        const model::EicpInstance inst(q, 3, reps[c].side, d);
                        if (model::uniq(d) == 3 && model::validate(inst).ok()) {
                            r.counterexample = model::serialize_instance(inst);
                            break;
                        }
                    }
                }
            }
        }
        r.rows.push_back({str(c + 1), sets_text(reps[c].side), yes_no(row.connected), str(row.demands),
                          row.demands ? str(row.min_kappa) : "-", row.demands ? str(row.max_kappa) : "-"});
    }
    r.pass = reps.size() == 8 && connected == 2 && iff;
    r.verdict = str(reps.size()) + " classes, " + str(connected) + " connected; coding gain " +
                (iff ? "exactly on" : "not exactly on") + " the connected classes";
    return r;
}

// --------------------------------------------------------------- theorem2

ExperimentReport experiment_theorem2(const Theorem2Options& opts) {
    const gf::FieldOrder q(opts.q);
    ExperimentReport r;
    r.name = "theorem2";
    r.parameters = {{"N_max", str(opts.n_max)}, {"M_max", str(opts.m_max)}, {"q", str(opts.q)},
                    {"samples", str(opts.samples)}, {"seed", str(opts.seed)}};
    r.columns = {"N", "M", "mode", "graphs", "connected", "demands_checked", "violations",
                 "corollary_checked", "corollary_violations", "disconnected_gain"};

    struct Tally {
        std::size_t graphs = 0;
        std::size_t connected = 0;
        std::size_t checked = 0;
        std::size_t violations = 0;
        std::size_t corollary = 0;
        std::size_t corollary_violations = 0;
        std::size_t disconnected_gain = 0;
        std::optional<std::string> counterexample;
        std::optional<std::string> gain_witness;
    };

    // Checks every valid demand of one side-information family.
    auto examine = [&](const std::vector<model::IndexSet>& side, std::size_t m, Tally& t) {
        const graphs::SideInfoBipartiteGraph g(m, side);
        const bool conn = graphs::is_connected(g);
        const auto pruned = graphs::prune_degree_one(g);
        ++t.graphs;
        t.connected += conn ? 1 : 0;
        for (const auto& d : model::enumerate_demands(side, m)) {
            const model::EicpInstance inst(q, m, side, d);
            if (!model::validate(inst).ok()) {
                continue;
            }
            const bool hypothesis = graphs::uniq_demanded(d, pruned.x_prime) == pruned.x_prime.size();
            const bool all_demanded = model::uniq(d) == m;
            if (!hypothesis && !all_demanded) {
                continue;
            }
            const std::size_t kappa = minrank::minrank_bnb(inst, serial()).kappa;
            const bool gain = kappa < model::uniq(d);
            if (!conn) {
                if (hypothesis && gain) {
                    ++t.disconnected_gain;
                    if (!t.gain_witness) {
                        t.gain_witness = model::serialize_instance(inst);
                    }
                }
                continue;
            }
            if (hypothesis) {
                ++t.checked;
                if (!gain) {
                    ++t.violations;
                    if (!t.counterexample) {
                        t.counterexample = model::serialize_instance(inst);
                    }
                }
            }
            if (all_demanded) {
                ++t.corollary;
                if (kappa >= m) {
                    ++t.corollary_violations;
                    if (!t.counterexample) {
                        t.counterexample = model::serialize_instance(inst);
                    }
                }
            }
        }
    };

    bool pass = true;
    std::size_t total_gain = 0;
    std::optional<std::string> gain_witness;
    const int threads = thread_count(opts.threads);
    for (std::size_t n = 2; n <= opts.n_max; ++n) {
        for (std::size_t m = 1; m <= opts.m_max; ++m) {
            const bool exhaustive = n <= 4 && m <= 4;
            std::vector<std::vector<model::IndexSet>> families;
            if (exhaustive) {
                for (auto& rep : classes(n, m)) {
                    families.push_back(std::move(rep.side));
                }
            } else {
                std::mt19937_64 seeds(opts.seed * 1000003 + n * 1009 + m);
                for (std::size_t s = 0; s < opts.samples; ++s) {
                    try {
                        const auto inst = model::gen_random(n, m, q, 0.5, seeds());
                        families.push_back(inst.side_info());
                    } catch (const GenerationFailure&) {
                    }
                }
            }
            std::vector<Tally> tallies(families.size());
            const auto count = static_cast<std::ptrdiff_t>(families.size());
            std::exception_ptr error;
#pragma omp parallel for schedule(dynamic, 4) num_threads(threads)
            for (std::ptrdiff_t i = 0; i < count; ++i) {
                try {
                    examine(families[static_cast<std::size_t>(i)], m, tallies[static_cast<std::size_t>(i)]);
                } catch (...) {
#pragma omp critical
                    if (!error) {
                        error = std::current_exception();
                    }
                }
            }
            if (error) {
                std::rethrow_exception(error);
            }
            Tally sum;
            for (auto& t : tallies) {
                sum.graphs += t.graphs;
                sum.connected += t.connected;
                sum.checked += t.checked;
                sum.violations += t.violations;
                sum.corollary += t.corollary;
                sum.corollary_violations += t.corollary_violations;
                sum.disconnected_gain += t.disconnected_gain;
                if (!sum.counterexample) {
                    sum.counterexample = t.counterexample;
                }
                if (!sum.gain_witness) {
                    sum.gain_witness = t.gain_witness;
                }
            }
            r.rows.push_back({str(n), str(m), exhaustive ? "exhaustive" : "sampled", str(sum.graphs),
                              str(sum.connected), str(sum.checked), str(sum.violations), str(sum.corollary),
                              str(sum.corollary_violations), str(sum.disconnected_gain)});
            if (sum.violations + sum.corollary_violations > 0) {
                pass = false;
                if (!r.counterexample) {
                    r.counterexample = sum.counterexample;
                }
            }
            total_gain += sum.disconnected_gain;
            if (!gain_witness) {
                gain_witness = sum.gain_witness;
            }
        }
    }
    r.pass = pass;
    r.verdict = pass ? "no connected graph violates the bound" : "violation found";
    r.notes.push_back("disconnected graphs with a coding gain under the demand hypothesis: " + str(total_gain));
    if (gain_witness) {
        r.notes.push_back("first such instance: " + *gain_witness);
    }
    return r;
}

// ------------------------------------------------------------ lemma sweep

ExperimentReport experiment_lemma_sweep(const SweepOptions& opts) {
    const gf::FieldOrder q(opts.q);
    ExperimentReport r;
    r.parameters = {{"n_lo", str(opts.n_lo)}, {"n_hi", str(opts.n_hi)}, {"q", str(opts.q)}};
    bool pass = true;
    auto fail = [&](const model::EicpInstance& inst) {
        pass = false;
        if (!r.counterexample) {
            r.counterexample = model::serialize_instance(inst);
        }
    };

    switch (opts.kind) {
    case SweepKind::Tree: {
        r.name = "lemma-sweep-tree";
        r.columns = {"n", "kappa", "expected", "tree_cover_length", "code_verifies", "oracle_shorter_infeasible"};
        for (std::size_t n = opts.n_lo; n <= opts.n_hi; ++n) {
            const auto inst = regular_tree_instance(n, q);
            const std::size_t kappa = minrank::minrank_bnb(inst).kappa;
            const auto plan = covers::tree_cover(inst, n <= covers::kExactCoverMaxUsers);
            const bool verifies = codes::verify_code(plan.code, inst).overall;
            const auto oracle = minrank::minrank_oracle(inst, n - 2);
            const bool ok = kappa == n - 1 && plan.counts.length == n - 1 && verifies && !oracle.found;
            if (!ok) {
                fail(inst);
            }
            r.rows.push_back({str(n), str(kappa), str(n - 1), str(plan.counts.length), yes_no(verifies),
                              yes_no(!oracle.found)});
        }
        break;
    }
    case SweepKind::BiClique: {
        r.name = "lemma-sweep-biclique";
        r.columns = {"n", "covered", "kappa_biclique_users", "expected", "kappa_instance", "scheme_length",
                     "code_verifies", "oracle_shorter_infeasible"};
        for (std::size_t n = opts.n_lo; n <= opts.n_hi; ++n) {
            for (bool covered : {false, true}) {
                const auto inst = biclique_instance(n, covered, q);
                std::vector<Index> members(n);
                std::iota(members.begin(), members.end(), 0);
                minrank::MinrankOptions mo;
                mo.users = members;
                const std::size_t kappa_b = minrank::minrank_bnb(inst, mo).kappa;
                const std::size_t kappa = minrank::minrank_bnb(inst).kappa;
                const std::size_t expected = covered ? 1 : 2;
                const auto plan = covers::biclique_cover(inst);
                const bool verifies = codes::verify_code(plan.code, inst).overall;
                // Length of the bi-clique structure itself.
                std::size_t scheme = 0;
                for (const auto& w : plan.structures) {
                    if (w.size() == n) {
                        scheme = covers::structure_cost(w);
                    }
                }
                const auto oracle = minrank::minrank_oracle(inst, expected - 1, minrank::kDefaultOracleBudget, members);
                const bool ok = kappa_b == expected && scheme == expected && verifies && !oracle.found;
                if (!ok) {
                    fail(inst);
                }
                r.rows.push_back({str(n), yes_no(covered), str(kappa_b), str(expected), str(kappa), str(scheme),
                                  yes_no(verifies), yes_no(!oracle.found)});
            }
        }
        r.notes.push_back("kappa_biclique_users ranges over the bi-clique's users; the covering user is a helper "
                          "whose own demand is outside the structure");
        break;
    }
    case SweepKind::RandomTree: {
        r.name = "lemma-sweep-random-tree";
        r.columns = {"n", "seed", "kappa", "bound", "tree_cover_length", "biclique_cover_length"};
        std::mt19937_64 seeds(opts.seed);
        for (std::size_t n = opts.n_lo; n <= opts.n_hi; ++n) {
            for (std::size_t t = 0; t < opts.random_trees; ++t) {
                const std::uint64_t seed = seeds();
                const auto inst = random_tree_instance(n, q, seed);
                const std::size_t kappa = minrank::minrank_bnb(inst).kappa;
                const auto tree = covers::tree_cover(inst);
                const auto bic = covers::biclique_cover(inst);
                const bool ok = kappa <= n - 1 && codes::verify_code(tree.code, inst).overall &&
                                codes::verify_code(bic.code, inst).overall;
                if (!ok) {
                    fail(inst);
                }
                r.rows.push_back({str(n), std::to_string(seed), str(kappa), str(n - 1), str(tree.counts.length),
                                  str(bic.counts.length)});
            }
        }
        break;
    }
    }
    r.pass = pass;
    r.verdict = pass ? "all rows match" : "mismatch";
    return r;
}

} // namespace eicp::experiments
