#include "eicp/covers.hpp"

#include "eicp/error.hpp"

#include <algorithm>
#include <limits>
#include <string>

namespace eicp::covers {

using graphs::StructureKind;
using graphs::StructureWitness;
using model::Index;

const char* to_string(Scheme s) noexcept {
    return s == Scheme::Tree ? "tree" : "biclique";
}

std::size_t structure_cost(const StructureWitness& w) {
    switch (w.kind) {
    case StructureKind::SingleEdge:
    case StructureKind::CoveredPair:
        return 1;
    case StructureKind::RegularTree:
        return w.size() - 1;
    case StructureKind::BiClique:
        return w.covered ? 1 : 2;
    }
    return 0;
}

std::vector<codes::Transmission> structure_code(const StructureWitness& w, const model::EicpInstance& inst) {
    const auto q = inst.field();
    const std::size_t m = inst.num_messages();
    auto sum = [&](std::span<const Index> msgs) {
        gf::GfVector v(q, m);
        for (Index x : msgs) {
            v.set(x, 1);
        }
        return v;
    };
    std::vector<codes::Transmission> out;
    const auto& b = w.messages;
    switch (w.kind) {
    case StructureKind::SingleEdge:
        out.push_back({*w.covering_user, sum(b)});
        break;
    case StructureKind::CoveredPair:
        out.push_back({*w.covering_user, sum(b)});
        break;
    case StructureKind::RegularTree: {
        const std::size_t n = b.size();
        for (std::size_t i = 0; i + 1 < n; ++i) {
            const Index pair[] = {b[(i + 1) % n], b[(i + 2) % n]};
            out.push_back({w.users[i], sum(pair)});
        }
        break;
    }
    case StructureKind::BiClique:
        if (w.covered) {
            out.push_back({*w.covering_user, sum(b)});
        } else {
            out.push_back({w.users[0], sum(std::span(b).subspan(1))});
            out.push_back({w.users[1], sum(std::span(b).first(1))});
        }
        break;
    }
    return out;
}

namespace {

graphs::SideInfoBipartiteGraph graph_of(const model::EicpInstance& inst) {
    if (!model::classify(inst).single_unicast) {
        throw NotSingleUnicast("covers need a single unicast instance (M = N, distinct demands)");
    }
    return graphs::build_side_info_graph(inst);
}

std::vector<Index> demanded(const model::EicpInstance& inst) {
    std::vector<Index> d = inst.demands();
    std::ranges::sort(d);
    return d;
}

void remove(std::vector<Index>& pool, const std::vector<Index>& msgs) {
    std::erase_if(pool, [&](Index x) { return std::ranges::find(msgs, x) != msgs.end(); });
}

StructureWitness single_or_throw(const graphs::StructureFinder& f, Index m) {
    auto w = f.single_edge_on(m);
    if (!w) {
        throw StructuralError("message " + std::to_string(m + 1) + " has no transmitter besides its demander");
    }
    return *w;
}

// Minimum-length exact cover over subsets of the demanded messages.
template <class Candidate>
std::vector<StructureWitness> exact_cover(const std::vector<Index>& target, Candidate&& candidate) {
    const std::size_t n = target.size();
    if (n > kExactCoverMaxUsers) {
        throw GuardExceeded("exact cover supports at most " + std::to_string(kExactCoverMaxUsers) +
                            " messages, got " + std::to_string(n));
    }
    const std::size_t full = (std::size_t{1} << n) - 1;
    std::vector<std::optional<StructureWitness>> structure(full + 1);
    for (std::size_t mask = 1; mask <= full; ++mask) {
        std::vector<Index> s;
        for (std::size_t b = 0; b < n; ++b) {
            if (mask >> b & 1U) {
                s.push_back(target[b]);
            }
        }
        structure[mask] = candidate(s);
    }
    constexpr std::size_t kInf = std::numeric_limits<std::size_t>::max();
    std::vector<std::size_t> cost(full + 1, kInf);
    std::vector<std::size_t> pick(full + 1, 0);
    cost[0] = 0;
    for (std::size_t mask = 1; mask <= full; ++mask) {
        const std::size_t low = mask & (~mask + 1);
        // Submasks containing the lowest element, in increasing order.
        std::vector<std::size_t> subs;
        for (std::size_t sub = mask; sub > 0; sub = (sub - 1) & mask) {
            if (sub & low) {
                subs.push_back(sub);
            }
        }
        std::ranges::reverse(subs);
        for (std::size_t sub : subs) {
            if (!structure[sub] || cost[mask ^ sub] == kInf) {
                continue;
            }
            const std::size_t c = cost[mask ^ sub] + structure_cost(*structure[sub]);
            if (c < cost[mask]) {
                cost[mask] = c;
                pick[mask] = sub;
            }
        }
    }
    if (cost[full] == kInf) {
        throw StructuralError("no cover exists");
    }
    std::vector<StructureWitness> out;
    for (std::size_t mask = full; mask != 0; mask ^= pick[mask]) {
        out.push_back(*structure[pick[mask]]);
    }
    return out;
}

CoverPlan finish(Scheme scheme, bool exact, std::vector<StructureWitness> structures, const model::EicpInstance& inst) {
    std::ranges::stable_sort(structures, [](const StructureWitness& a, const StructureWitness& b) {
        return std::ranges::min(a.messages) < std::ranges::min(b.messages);
    });
    CoverPlan plan;
    plan.scheme = scheme;
    plan.exact = exact;
    for (const auto& w : structures) {
        for (auto& t : structure_code(w, inst)) {
            plan.code.transmissions.push_back(std::move(t));
        }
        plan.counts.single_edges += w.kind == StructureKind::SingleEdge ? 1 : 0;
        if (w.kind == StructureKind::BiClique && w.size() >= 2 && !w.covered) {
            plan.all_bicliques_covered = false;
        }
    }
    plan.counts.structures = structures.size();
    plan.counts.length = plan.code.length();
    plan.structures = std::move(structures);

    const auto q = inst.field();
    for (Index u = 0; u < inst.num_users() && plan.task_based; ++u) {
        bool one = false;
        for (const auto& t : plan.code.transmissions) {
            if (t.transmitter == u) {
                continue;
            }
            gf::EchelonBasis b(q, inst.num_messages());
            b.insert(t.coeffs);
            for (Index k : inst.side_info(u)) {
                b.insert(gf::GfVector::unit(q, inst.num_messages(), k));
            }
            if (b.in_span(gf::GfVector::unit(q, inst.num_messages(), inst.demand(u)))) {
                one = true;
                break;
            }
        }
        plan.task_based = one;
    }
    return plan;
}

} // namespace

CoverPlan tree_cover(const model::EicpInstance& inst, bool exact) {
    const auto g = graph_of(inst);
    const graphs::StructureFinder f(g, inst.demands());
    std::vector<Index> pool = demanded(inst);

    if (exact) {
        auto structures = exact_cover(pool, [&](const std::vector<Index>& s) -> std::optional<StructureWitness> {
            if (s.size() == 1) {
                return f.single_edge_on(s[0]);
            }
            if (s.size() == 2) {
                return f.covered_pair_on(s[0], s[1]);
            }
            return f.regular_tree_on(s);
        });
        return finish(Scheme::Tree, true, std::move(structures), inst);
    }

    auto next_pair = [&]() -> std::optional<StructureWitness> {
        for (std::size_t i = 0; i < pool.size(); ++i) {
            for (std::size_t j = i + 1; j < pool.size(); ++j) {
                if (auto w = f.covered_pair_on(pool[i], pool[j])) {
                    return w;
                }
            }
        }
        return std::nullopt;
    };
    std::vector<StructureWitness> structures;
    while (auto w = next_pair()) {
        structures.push_back(*w);
        remove(pool, w->messages);
    }
    for (std::size_t n = 3; n <= std::min(pool.size(), graphs::kDefaultStructureMax); ++n) {
        while (true) {
            auto trees = f.regular_trees(pool, n);
            auto it = std::ranges::find_if(trees, [&](const StructureWitness& w) { return w.size() == n; });
            if (it == trees.end()) {
                break;
            }
            // regular_trees sorts equal sizes lexicographically by message set
            structures.push_back(*it);
            remove(pool, it->messages);
        }
    }
    for (Index m : pool) {
        structures.push_back(single_or_throw(f, m));
    }
    return finish(Scheme::Tree, false, std::move(structures), inst);
}

CoverPlan biclique_cover(const model::EicpInstance& inst, bool exact) {
    const auto g = graph_of(inst);
    const graphs::StructureFinder f(g, inst.demands());
    std::vector<Index> pool = demanded(inst);

    if (exact) {
        auto structures = exact_cover(pool, [&](const std::vector<Index>& s) { return f.biclique_on(s); });
        return finish(Scheme::BiClique, true, std::move(structures), inst);
    }

    std::vector<StructureWitness> structures;
    while (!pool.empty()) {
        auto found = f.bicliques(pool);
        if (found.empty()) {
            // Remaining messages have no transmitter; report the first.
            (void)single_or_throw(f, pool.front());
        }
        structures.push_back(found.front());
        remove(pool, found.front().messages);
    }
    return finish(Scheme::BiClique, false, std::move(structures), inst);
}

SchemeComparison compare_schemes(const model::EicpInstance& inst, const minrank::MinrankOptions& opts) {
    SchemeComparison c;
    c.tree_length = tree_cover(inst).counts.length;
    c.biclique_length = biclique_cover(inst).counts.length;
    c.kappa = minrank::minrank_bnb(inst, opts).kappa;
    if (c.kappa > std::min(c.tree_length, c.biclique_length)) {
        throw Error("minrank " + std::to_string(c.kappa) + " exceeds a scheme length (" +
                    std::to_string(c.tree_length) + ", " + std::to_string(c.biclique_length) + ")");
    }
    return c;
}

} // namespace eicp::covers
