#include "eicp/error.hpp"
#include "eicp/minrank.hpp"

#include <numeric>
#include <string>

namespace eicp::minrank {

namespace {

BigInt binomial(std::size_t n, std::size_t k) {
    if (k > n) {
        return 0;
    }
    BigInt r = 1;
    for (std::size_t i = 0; i < k; ++i) {
        r = r * (n - i) / (i + 1);
    }
    return r;
}

// Enumerates l-subsets of the pool in lexicographic order, keeping the span
// of each prefix, and tests every selected user's decodability at the leaves.
class SubsetSearch {
public:
    SubsetSearch(const model::EicpInstance& inst, const std::vector<gf::GfVector>& pool, std::vector<Index> users)
        : inst_(inst), pool_(pool), users_(std::move(users)) {
        const auto q = inst.field();
        const std::size_t m = inst.num_messages();
        for (Index u : users_) {
            gf::EchelonBasis side(q, m);
            for (Index k : inst.side_info(u)) {
                side.insert(gf::GfVector::unit(q, m, k));
            }
            side_.push_back(std::move(side));
            target_.push_back(gf::GfVector::unit(q, m, inst.demand(u)));
        }
    }

    bool search(std::size_t l) {
        frames_.assign(l + 1, gf::EchelonBasis(inst_.field(), inst_.num_messages()));
        return extend(0, 0, l);
    }

    [[nodiscard]] std::uint64_t tested() const noexcept { return tested_; }

private:
    bool extend(std::size_t depth, std::size_t from, std::size_t l) {
        if (depth == l) {
            ++tested_;
            return decodes(frames_[depth]);
        }
        for (std::size_t i = from; i + (l - depth) <= pool_.size(); ++i) {
            frames_[depth + 1] = frames_[depth];
            frames_[depth + 1].insert(pool_[i]);
            if (extend(depth + 1, i + 1, l)) {
                return true;
            }
        }
        return false;
    }

    bool decodes(const gf::EchelonBasis& code) const {
        for (std::size_t k = 0; k < users_.size(); ++k) {
            gf::EchelonBasis b = side_[k];
            for (std::size_t r = 0; r < code.rank(); ++r) {
                b.insert(code.row(r));
            }
            if (!b.in_span(target_[k])) {
                return false;
            }
        }
        return true;
    }

    const model::EicpInstance& inst_;
    const std::vector<gf::GfVector>& pool_;
    std::vector<Index> users_;
    std::vector<gf::EchelonBasis> side_;
    std::vector<gf::GfVector> target_;
    std::vector<gf::EchelonBasis> frames_;
    std::uint64_t tested_ = 0;
};

} // namespace

OracleResult minrank_oracle(const model::EicpInstance& inst, std::size_t l_max, std::uint64_t budget,
                            const std::optional<std::vector<Index>>& users) {
    std::vector<Index> sel;
    if (users) {
        sel = *users;
    } else {
        sel.resize(inst.num_users());
        std::iota(sel.begin(), sel.end(), 0);
    }
    for (Index u : sel) {
        if (u >= inst.num_users()) {
            throw DimensionMismatch("selected user " + std::to_string(u + 1) + " outside the instance");
        }
    }
    const auto pool = transmission_pool(inst);
    OracleResult res;
    res.pool_size = pool.size();
    SubsetSearch search(inst, pool, sel);
    for (std::size_t l = 0; l <= l_max; ++l) {
        const BigInt subsets = binomial(pool.size(), l);
        if (subsets > budget) {
            throw GuardExceeded("oracle would test " + subsets.str() + " subsets of size " + std::to_string(l) +
                                ", budget is " + std::to_string(budget));
        }
        if (search.search(l)) {
            res.length = l;
            res.found = true;
            res.subsets_tested = search.tested();
            return res;
        }
    }
    res.length = l_max + 1;
    res.subsets_tested = search.tested();
    return res;
}

} // namespace eicp::minrank
