#include "eicp/error.hpp"
#include "eicp/graphs.hpp"
#include "eicp/model.hpp"

#include <algorithm>
#include <numeric>
#include <random>
#include <string>

namespace eicp::model {

namespace {

constexpr int kAttempts = 64;

using Rng = std::mt19937_64;

std::size_t pick(Rng& rng, std::size_t n) {
    return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
}

// knows[i][m] matrix as side-information sets.
std::vector<IndexSet> to_sets(const std::vector<std::vector<char>>& knows) {
    std::vector<IndexSet> side(knows.size());
    for (Index i = 0; i < knows.size(); ++i) {
        for (Index m = 0; m < knows[i].size(); ++m) {
            if (knows[i][m]) {
                side[i].push_back(m);
            }
        }
    }
    return side;
}

// Demands uniform over [M] \ K_i among messages some other user holds.
std::optional<std::vector<Index>> draw_demands(Rng& rng, const std::vector<std::vector<char>>& knows,
                                               std::size_t num_messages) {
    const std::size_t n = knows.size();
    std::vector<Index> d(n);
    for (Index i = 0; i < n; ++i) {
        IndexSet options;
        for (Index m = 0; m < num_messages; ++m) {
            bool other = false;
            for (Index j = 0; j < n && !other; ++j) {
                other = j != i && knows[j][m];
            }
            if (!knows[i][m] && other) {
                options.push_back(m);
            }
        }
        if (options.empty()) {
            return std::nullopt;
        }
        d[i] = options[pick(rng, options.size())];
    }
    return d;
}

// Fixes holder counts so every message is held by somebody but not by all,
// and no user holds everything. Returns false if the shape forbids it.
bool repair(Rng& rng, std::vector<std::vector<char>>& knows, std::size_t num_messages) {
    const std::size_t n = knows.size();
    if (n < 2 || num_messages < 1) {
        return false;
    }
    for (int pass = 0; pass < 4; ++pass) {
        for (Index m = 0; m < num_messages; ++m) {
            std::size_t holders = 0;
            for (Index i = 0; i < n; ++i) {
                holders += knows[i][m] ? 1 : 0;
            }
            if (holders == 0) {
                knows[pick(rng, n)][m] = 1;
            } else if (holders == n) {
                knows[pick(rng, n)][m] = 0;
            }
        }
        for (Index i = 0; i < n; ++i) {
            if (std::ranges::all_of(knows[i], [](char c) { return c != 0; })) {
                knows[i][pick(rng, num_messages)] = 0;
            }
        }
    }
    return true;
}

EicpInstance checked(gf::FieldOrder q, std::size_t num_messages, std::vector<IndexSet> side,
                     std::vector<Index> demands) {
    return EicpInstance(q, num_messages, std::move(side), std::move(demands));
}

} // namespace

EicpInstance gen_random(std::size_t num_users, std::size_t num_messages, gf::FieldOrder q, double density,
                        std::uint64_t seed) {
    if (num_users < 2 || num_messages < 1 || !(density >= 0.0 && density <= 1.0)) {
        throw GenerationFailure("gen_random needs N >= 2, M >= 1 and density in [0, 1]");
    }
    Rng rng(seed);
    std::bernoulli_distribution coin(density);
    for (int attempt = 0; attempt < kAttempts; ++attempt) {
        std::vector<std::vector<char>> knows(num_users, std::vector<char>(num_messages, 0));
        for (auto& row : knows) {
            for (auto& c : row) {
                c = coin(rng) ? 1 : 0;
            }
        }
        if (!repair(rng, knows, num_messages)) {
            break;
        }
        auto d = draw_demands(rng, knows, num_messages);
        if (!d) {
            continue;
        }
        EicpInstance inst = checked(q, num_messages, to_sets(knows), std::move(*d));
        if (validate(inst).ok()) {
            return inst;
        }
    }
    throw GenerationFailure("no valid instance with N = " + std::to_string(num_users) + ", M = " +
                            std::to_string(num_messages) + " after " + std::to_string(kAttempts) + " attempts");
}

EicpInstance gen_vanet(std::size_t num_users, std::size_t num_messages, gf::FieldOrder q, double overlap,
                       std::uint64_t seed) {
    if (!(overlap >= 0.5 && overlap < 1.0)) {
        throw GenerationFailure("vanet overlap must lie in [0.5, 1)");
    }
    if (num_users < 3 || num_messages < 2) {
        throw GenerationFailure("vanet model needs N >= 3 and M >= 2");
    }
    Rng rng(seed);
    const auto popular = std::max<std::size_t>(
        1, std::min(num_messages - 1, static_cast<std::size_t>(overlap * static_cast<double>(num_messages))));
    for (int attempt = 0; attempt < kAttempts; ++attempt) {
        std::vector<Index> order(num_messages);
        std::iota(order.begin(), order.end(), 0);
        std::ranges::shuffle(order, rng);
        std::vector<std::vector<char>> knows(num_users, std::vector<char>(num_messages, 0));
        for (std::size_t k = 0; k < num_messages; ++k) {
            const Index m = order[k];
            if (k < popular) {
                // Missing at one or two users.
                for (auto& row : knows) {
                    row[m] = 1;
                }
                const std::size_t misses = 1 + pick(rng, 2);
                for (std::size_t r = 0; r < misses; ++r) {
                    knows[pick(rng, num_users)][m] = 0;
                }
            } else {
                const std::size_t holders = 1 + pick(rng, 2);
                for (std::size_t r = 0; r < holders; ++r) {
                    knows[pick(rng, num_users)][m] = 1;
                }
            }
        }
        if (!repair(rng, knows, num_messages)) {
            break;
        }
        auto d = draw_demands(rng, knows, num_messages);
        if (!d) {
            continue;
        }
        EicpInstance inst = checked(q, num_messages, to_sets(knows), std::move(*d));
        if (validate(inst).ok() && graphs::is_connected(graphs::build_side_info_graph(inst))) {
            return inst;
        }
    }
    throw GenerationFailure("no connected valid vanet instance after " + std::to_string(kAttempts) + " attempts");
}

EicpInstance gen_single_unicast(std::size_t num_users, gf::FieldOrder q, double density, std::uint64_t seed) {
    if (num_users < 2 || !(density >= 0.0 && density <= 1.0)) {
        throw GenerationFailure("gen_single_unicast needs N >= 2 and density in [0, 1]");
    }
    Rng rng(seed);
    std::bernoulli_distribution coin(density);
    const std::size_t n = num_users;
    for (int attempt = 0; attempt < kAttempts; ++attempt) {
        std::vector<Index> d(n);
        std::iota(d.begin(), d.end(), 0);
        std::ranges::shuffle(d, rng);
        std::vector<std::vector<char>> knows(n, std::vector<char>(n, 0));
        for (Index i = 0; i < n; ++i) {
            for (Index m = 0; m < n; ++m) {
                knows[i][m] = m != d[i] && coin(rng) ? 1 : 0;
            }
        }
        // Every demand needs another holder; then clear violations the
        // coin flips may have created.
        for (Index i = 0; i < n; ++i) {
            bool other = false;
            for (Index j = 0; j < n && !other; ++j) {
                other = j != i && knows[j][d[i]];
            }
            if (!other) {
                Index j = pick(rng, n - 1);
                j += j >= i ? 1 : 0;
                knows[j][d[i]] = 1;
            }
        }
        EicpInstance inst = checked(q, n, to_sets(knows), d);
        if (validate(inst).ok()) {
            return inst;
        }
    }
    throw GenerationFailure("no valid single unicast instance with N = " + std::to_string(n) + " after " +
                            std::to_string(kAttempts) + " attempts");
}

EicpInstance gen_single_uniprior(std::size_t num_users, gf::FieldOrder q, std::uint64_t seed) {
    if (num_users < 2) {
        throw GenerationFailure("gen_single_uniprior needs N >= 2");
    }
    Rng rng(seed);
    const std::size_t n = num_users;
    std::vector<Index> pi(n);
    std::iota(pi.begin(), pi.end(), 0);
    std::ranges::shuffle(pi, rng);
    std::vector<IndexSet> side(n);
    std::vector<Index> d(n);
    for (Index i = 0; i < n; ++i) {
        side[i] = {pi[i]};
        Index m = pick(rng, n - 1);
        m += m >= pi[i] ? 1 : 0;
        d[i] = m;
    }
    return checked(q, n, std::move(side), std::move(d));
}

} // namespace eicp::model
