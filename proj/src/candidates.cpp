#include "eicp/error.hpp"
#include "eicp/minrank.hpp"

#include <algorithm>
#include <cstdlib>
#include <set>
#include <string>

namespace eicp::minrank {

std::uint64_t node_guard_from_env() {
    if (const char* env = std::getenv("EICP_GUARD_NODES")) {
        char* end = nullptr;
        const unsigned long long v = std::strtoull(env, &end, 10);
        if (end != env && *end == '\0' && v > 0) {
            return v;
        }
    }
    return kDefaultNodeGuard;
}

namespace {

BigInt power(unsigned base, std::size_t exp) {
    BigInt r = 1;
    for (std::size_t i = 0; i < exp; ++i) {
        r *= base;
    }
    return r;
}

void check_enumeration(unsigned q, std::size_t k, Index user, std::uint64_t guard) {
    if (power(q, k) > guard) {
        throw GuardExceeded("candidate enumeration for user " + std::to_string(user + 1) + " needs " +
                            std::to_string(q) + "^" + std::to_string(k) + " vectors, guard is " +
                            std::to_string(guard));
    }
}

// Subsets S of K_i with {d_i} + S transmittable by some j != i, ordered by
// size and then lexicographically.
std::vector<IndexSet> admissible_supports(const std::vector<IndexSet>& side, Index user, Index demand) {
    const IndexSet& k = side[user];
    std::vector<IndexSet> out;
    const std::size_t subsets = std::size_t{1} << k.size();
    for (std::size_t mask = 0; mask < subsets; ++mask) {
        IndexSet s;
        for (std::size_t b = 0; b < k.size(); ++b) {
            if (mask >> b & 1U) {
                s.push_back(k[b]);
            }
        }
        IndexSet full = s;
        full.insert(std::ranges::upper_bound(full, demand), demand);
        for (Index j = 0; j < side.size(); ++j) {
            if (j != user && std::ranges::includes(side[j], full)) {
                out.push_back(std::move(s));
                break;
            }
        }
    }
    std::ranges::sort(out, [](const IndexSet& a, const IndexSet& b) {
        return a.size() != b.size() ? a.size() < b.size() : a < b;
    });
    return out;
}

} // namespace

std::vector<CandidateSet> build_candidates(const model::EicpInstance& inst, std::uint64_t guard) {
    const auto q = inst.field();
    const std::size_t m = inst.num_messages();
    std::vector<CandidateSet> out;
    for (Index i = 0; i < inst.num_users(); ++i) {
        check_enumeration(q.value(), inst.side_info(i).size(), i, guard);
        CandidateSet c{i, {}};
        for (const IndexSet& s : admissible_supports(inst.side_info(), i, inst.demand(i))) {
            // All nonzero coefficient patterns on s, odometer over 1..q-1.
            std::vector<unsigned> digits(s.size(), 1);
            while (true) {
                gf::GfVector v = gf::GfVector::unit(q, m, inst.demand(i));
                for (std::size_t b = 0; b < s.size(); ++b) {
                    v.set(s[b], digits[b]);
                }
                c.vectors.push_back(std::move(v));
                std::size_t b = s.size();
                while (b > 0 && digits[b - 1] == q.value() - 1) {
                    digits[--b] = 1;
                }
                if (b == 0) {
                    break;
                }
                ++digits[b - 1];
            }
        }
        out.push_back(std::move(c));
    }
    return out;
}

std::vector<std::vector<IndexSet>> graph_candidate_supports(const graphs::BipartiteProblemGraph& pg,
                                                            std::uint64_t guard) {
    std::vector<IndexSet> side;
    for (Index u = 0; u < pg.num_users(); ++u) {
        side.push_back(pg.out_neighbors(u));
    }
    std::vector<std::vector<IndexSet>> out;
    for (Index u = 0; u < pg.num_users(); ++u) {
        check_enumeration(2, side[u].size(), u, guard);
        const Index d = pg.in_neighbors(u).front();
        auto family = admissible_supports(side, u, d);
        for (auto& s : family) {
            s.insert(std::ranges::upper_bound(s, d), d);
        }
        out.push_back(std::move(family));
    }
    return out;
}

ComplexityReport complexity_report(const model::EicpInstance& inst, std::uint64_t guard) {
    const unsigned q = inst.field().value();
    std::size_t sum = 0;
    std::size_t sum_sq = 0;
    for (const auto& k : inst.side_info()) {
        sum += k.size();
        sum_sq += k.size() * k.size();
    }
    ComplexityReport r;
    r.actual = 1;
    for (const auto& c : build_candidates(inst, guard)) {
        r.actual *= c.vectors.size();
    }
    r.bound_new = power(q, sum);
    r.old_a_count = power(q, sum_sq);
    r.old_a_rows = inst.num_messages();
    r.old_a_cols = sum;
    r.old_concat_count = r.old_a_count * r.bound_new;
    r.old_concat_cols = sum + inst.num_users();
    r.old_total = r.old_a_count * (r.bound_new + 1);
    return r;
}

std::vector<gf::GfVector> transmission_pool(const model::EicpInstance& inst, std::uint64_t guard) {
    const auto q = inst.field();
    std::set<gf::GfVector> pool;
    for (Index j = 0; j < inst.num_users(); ++j) {
        const IndexSet& k = inst.side_info(j);
        check_enumeration(q.value(), k.size(), j, guard);
        std::vector<unsigned> digits(k.size(), 0);
        while (true) {
            gf::GfVector v(q, inst.num_messages());
            for (std::size_t b = 0; b < k.size(); ++b) {
                v.set(k[b], digits[b]);
            }
            if (!v.is_zero()) {
                v.normalize();
                pool.insert(std::move(v));
            }
            std::size_t b = k.size();
            while (b > 0 && digits[b - 1] == q.value() - 1) {
                digits[--b] = 0;
            }
            if (b == 0) {
                break;
            }
            ++digits[b - 1];
        }
    }
    return {pool.begin(), pool.end()};
}

} // namespace eicp::minrank
