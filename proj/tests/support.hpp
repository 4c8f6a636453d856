#pragma once

// Test-only oracles. Everything here works on plain integers so it shares no
// code with the library's field arithmetic or search.

#include "eicp/codes.hpp"
#include "eicp/model.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <map>
#include <random>
#include <string>
#include <unordered_set>
#include <vector>

namespace testsupport {

using eicp::model::EicpInstance;
using eicp::model::Index;
using eicp::model::IndexSet;

inline std::string data_path(const std::string& name) {
    return std::string(EICP_DATA_DIR) + "/" + name;
}

// Rank over F_q by counting the row space: q^rank distinct combinations.
inline std::size_t span_count_rank(unsigned q, const std::vector<std::vector<unsigned>>& rows) {
    const std::size_t n = rows.size();
    const std::size_t m = n ? rows[0].size() : 0;
    std::vector<unsigned> coef(n, 0);
    std::unordered_set<std::string> seen;
    while (true) {
        std::string key(m, '\0');
        for (std::size_t c = 0; c < m; ++c) {
            unsigned s = 0;
            for (std::size_t r = 0; r < n; ++r) {
                s = (s + coef[r] * rows[r][c]) % q;
            }
            key[c] = static_cast<char>(s);
        }
        seen.insert(key);
        std::size_t k = 0;
        while (k < n && ++coef[k] == q) {
            coef[k++] = 0;
        }
        if (k == n) {
            break;
        }
    }
    std::size_t r = 0;
    for (std::size_t size = seen.size(); size > 1; size /= q) {
        ++r;
    }
    return r;
}

inline std::uint32_t mask_of(const IndexSet& s) {
    std::uint32_t m = 0;
    for (Index x : s) {
        m |= 1U << x;
    }
    return m;
}

// GF(2) rank of bitmask rows.
inline std::size_t xor_rank(std::vector<std::uint32_t> rows) {
    std::size_t r = 0;
    for (int bit = 31; bit >= 0; --bit) {
        auto it = std::find_if(rows.begin() + static_cast<std::ptrdiff_t>(r), rows.end(),
                               [&](std::uint32_t v) { return (v >> bit) & 1U; });
        if (it == rows.end()) {
            continue;
        }
        std::swap(*it, rows[r]);
        for (std::size_t k = 0; k < rows.size(); ++k) {
            if (k != r && ((rows[k] >> bit) & 1U)) {
                rows[k] ^= rows[r];
            }
        }
        ++r;
    }
    return r;
}

// Every subspace of F_2^m as a membership bitmask over the 2^m vectors.
inline const std::vector<std::uint64_t>& subspaces(std::size_t m) {
    static std::map<std::size_t, std::vector<std::uint64_t>> cache;
    auto& out = cache[m];
    if (!out.empty()) {
        return out;
    }
    const std::size_t n = std::size_t{1} << m;
    std::unordered_set<std::uint64_t> seen{1};
    std::vector<std::uint64_t> frontier{1};
    out.push_back(1);
    while (!frontier.empty()) {
        std::vector<std::uint64_t> next;
        for (std::uint64_t s : frontier) {
            for (std::size_t v = 1; v < n; ++v) {
                if ((s >> v) & 1U) {
                    continue;
                }
                std::uint64_t t = s;
                for (std::size_t w = 0; w < n; ++w) {
                    if ((s >> w) & 1U) {
                        t |= std::uint64_t{1} << (w ^ v);
                    }
                }
                if (seen.insert(t).second) {
                    out.push_back(t);
                    next.push_back(t);
                }
            }
        }
        frontier = std::move(next);
    }
    return out;
}

inline std::size_t subspace_dim(std::uint64_t s) {
    return static_cast<std::size_t>(std::countr_zero(static_cast<std::uint64_t>(std::popcount(s))));
}

// Shortest scalar linear code over F_2, by scanning every subspace W that is
// spanned by vectors some user can transmit and that gives each selected
// user a vector e_d + v with supp(v) in K.
inline std::size_t brute_kappa(const EicpInstance& inst, const std::vector<Index>& users) {
    const std::size_t m = inst.num_messages();
    const std::size_t n = std::size_t{1} << m;
    std::vector<std::uint32_t> side;
    for (Index u = 0; u < inst.num_users(); ++u) {
        side.push_back(mask_of(inst.side_info(u)));
    }
    auto transmittable = [&](std::uint32_t v) {
        return std::ranges::any_of(side, [&](std::uint32_t k) { return (v & ~k) == 0; });
    };
    std::size_t best = m + 1;
    for (std::uint64_t s : subspaces(m)) {
        const std::size_t dim = subspace_dim(s);
        if (dim >= best) {
            continue;
        }
        std::vector<std::uint32_t> gens;
        for (std::size_t v = 1; v < n; ++v) {
            if (((s >> v) & 1U) && transmittable(static_cast<std::uint32_t>(v))) {
                gens.push_back(static_cast<std::uint32_t>(v));
            }
        }
        if (xor_rank(gens) != dim) {
            continue;
        }
        bool ok = true;
        for (Index u : users) {
            const std::uint32_t d = 1U << inst.demand(u);
            const std::uint32_t allowed = side[u] | d;
            bool found = false;
            for (std::size_t v = 1; v < n && !found; ++v) {
                found = ((s >> v) & 1U) && (v & d) && (v & ~allowed) == 0;
            }
            if (!found) {
                ok = false;
                break;
            }
        }
        if (ok) {
            best = dim;
        }
    }
    return best;
}

inline std::size_t brute_kappa(const EicpInstance& inst) {
    std::vector<Index> all(inst.num_users());
    for (Index u = 0; u < all.size(); ++u) {
        all[u] = u;
    }
    return brute_kappa(inst, all);
}

// Minimum rank over F_2 of one row per user, each row e_d + v with supp(v)
// in K_u and the whole row inside some other user's side information.
inline std::size_t brute_candidate_kappa(const EicpInstance& inst) {
    const std::size_t nu = inst.num_users();
    std::vector<std::uint32_t> side;
    for (Index u = 0; u < nu; ++u) {
        side.push_back(mask_of(inst.side_info(u)));
    }
    std::vector<std::vector<std::uint32_t>> cand(nu);
    for (Index u = 0; u < nu; ++u) {
        const std::uint32_t k = side[u];
        const std::uint32_t d = 1U << inst.demand(u);
        for (std::uint32_t sub = k;; sub = (sub - 1) & k) {
            const std::uint32_t v = sub | d;
            for (Index j = 0; j < nu; ++j) {
                if (j != u && (v & ~side[j]) == 0) {
                    cand[u].push_back(v);
                    break;
                }
            }
            if (sub == 0) {
                break;
            }
        }
    }
    std::size_t best = nu + 1;
    std::vector<std::size_t> cur(nu, 0);
    while (true) {
        std::vector<std::uint32_t> rows;
        for (Index u = 0; u < nu; ++u) {
            rows.push_back(cand[u][cur[u]]);
        }
        best = std::min(best, xor_rank(rows));
        std::size_t k = 0;
        while (k < nu && ++cur[k] == cand[k].size()) {
            cur[k++] = 0;
        }
        if (k == nu) {
            break;
        }
    }
    return best;
}

// Over F_2: user u decodes iff some combination of the transmissions, after
// removing known messages, equals x_{d_u}.
inline bool brute_decodes(const eicp::codes::EmbeddedIndexCode& code, const EicpInstance& inst, Index u) {
    std::vector<std::uint32_t> rows;
    for (const auto& t : code.transmissions) {
        rows.push_back(mask_of(t.coeffs.support()));
    }
    const std::uint32_t k = mask_of(inst.side_info(u));
    const std::uint32_t d = 1U << inst.demand(u);
    for (std::uint32_t c = 0; c < (1U << rows.size()); ++c) {
        std::uint32_t v = 0;
        for (std::size_t t = 0; t < rows.size(); ++t) {
            if ((c >> t) & 1U) {
                v ^= rows[t];
            }
        }
        if ((v & ~k) == d) {
            return true;
        }
    }
    return false;
}

// Random instance passing validate(), or nullopt after a few tries.
inline std::optional<EicpInstance> random_valid(std::mt19937_64& rng, std::size_t n, std::size_t m, unsigned q,
                                                double density = 0.5) {
    std::bernoulli_distribution coin(density);
    for (int attempt = 0; attempt < 200; ++attempt) {
        std::vector<IndexSet> side(n);
        for (std::size_t u = 0; u < n; ++u) {
            for (Index x = 0; x < m; ++x) {
                if (coin(rng)) {
                    side[u].push_back(x);
                }
            }
        }
        std::vector<Index> d(n);
        bool ok = true;
        for (std::size_t u = 0; u < n && ok; ++u) {
            std::vector<Index> choices;
            for (Index x = 0; x < m; ++x) {
                if (std::ranges::find(side[u], x) == side[u].end()) {
                    choices.push_back(x);
                }
            }
            if (choices.empty()) {
                ok = false;
                break;
            }
            d[u] = choices[std::uniform_int_distribution<std::size_t>(0, choices.size() - 1)(rng)];
        }
        if (!ok) {
            continue;
        }
        EicpInstance inst(eicp::gf::FieldOrder(q), m, side, d);
        if (eicp::model::validate(inst).ok()) {
            return inst;
        }
    }
    return std::nullopt;
}

} // namespace testsupport
