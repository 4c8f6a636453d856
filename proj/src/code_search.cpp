#include "eicp/error.hpp"
#include "eicp/minrank.hpp"

#include <omp.h>

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <string>

namespace eicp::minrank {

namespace {

// User u decodes from a code W iff e_{d_u} lies in W + F^{K_u}, i.e. in the
// span of W with the K_u coordinates zeroed. Each search frame keeps the
// code basis and one projected basis per user.
struct Problem {
    gf::FieldOrder q;
    std::size_t dim;
    std::vector<gf::GfVector> pool;
    std::vector<gf::GfVector> target;               // per selected user
    std::vector<std::vector<gf::GfVector>> proj;    // [user][pool index]
    std::vector<std::vector<gf::EchelonBasis>> suffix;  // [user][j]: span of proj[user][j..]
};

Problem make_problem(const model::EicpInstance& inst, const std::vector<Index>& users, std::uint64_t guard) {
    Problem p{inst.field(), inst.num_messages(), transmission_pool(inst, guard), {}, {}, {}};
    for (Index u : users) {
        p.target.push_back(gf::GfVector::unit(p.q, p.dim, inst.demand(u)));
        std::vector<gf::GfVector> proj;
        for (auto v : p.pool) {
            for (Index k : inst.side_info(u)) {
                v.set(k, 0);
            }
            proj.push_back(std::move(v));
        }
        std::vector<gf::EchelonBasis> suffix(p.pool.size() + 1, gf::EchelonBasis(p.q, p.dim));
        for (std::size_t j = p.pool.size(); j-- > 0;) {
            suffix[j] = suffix[j + 1];
            suffix[j].insert(proj[j]);
        }
        p.proj.push_back(std::move(proj));
        p.suffix.push_back(std::move(suffix));
    }
    return p;
}

struct Frame {
    gf::EchelonBasis code;
    std::vector<gf::EchelonBasis> user;
};

class GuardTripped : public std::exception {};

// The incumbent is the key depth * slots + task, where tasks are forced
// prefixes numbered in depth-first order. A task prunes a node whose key is
// not below the incumbent, so the smallest key always belongs to the first
// leaf of optimal depth in serial depth-first order, whatever the schedule.
class CodeSearch {
public:
    CodeSearch(const Problem& p, std::size_t max_depth, std::atomic<std::uint64_t>& best, std::uint64_t slots,
               std::uint64_t task, std::atomic<std::uint64_t>& nodes, std::uint64_t guard, std::atomic<bool>& abort)
        : p_(p), best_(best), slots_(slots), task_(task), nodes_(nodes), guard_(guard), abort_(abort),
          frames_(max_depth + 1,
                  Frame{gf::EchelonBasis(p.q, p.dim), std::vector<gf::EchelonBasis>(p.target.size(),
                                                                                    gf::EchelonBasis(p.q, p.dim))}),
          chosen_(max_depth, 0) {}

    /// Depth-first search from the root; the first forced.size() levels only
    /// follow the given pool indices.
    void run(std::vector<std::size_t> forced) {
        forced_ = std::move(forced);
        visit(0, 0);
    }

    [[nodiscard]] const std::optional<std::vector<std::size_t>>& leaf() const noexcept { return leaf_; }
    [[nodiscard]] std::uint64_t local_nodes() const noexcept { return local_nodes_; }

private:
    bool finished() const { return abort_.load(std::memory_order_relaxed); }

    std::uint64_t key(std::size_t depth) const { return depth * slots_ + task_; }

    bool pruned(std::size_t depth) const { return key(depth) >= best_.load(std::memory_order_relaxed); }

    void count() {
        ++local_nodes_;
        if ((local_nodes_ & 1023U) == 0) {
            if (nodes_.fetch_add(1024, std::memory_order_relaxed) + 1024 > guard_) {
                abort_.store(true);
                throw GuardTripped();
            }
        }
    }

    void visit(std::size_t k, std::size_t from) {
        if (finished()) {
            return;
        }
        count();
        const Frame& f = frames_[k];
        bool all = true;
        for (std::size_t u = 0; u < p_.target.size(); ++u) {
            if (!f.user[u].in_span(p_.target[u])) {
                all = false;
                break;
            }
        }
        if (all) {
            const std::uint64_t mine = key(k);
            std::uint64_t cur = best_.load();
            while (mine < cur && !best_.compare_exchange_weak(cur, mine)) {
            }
            if (mine < cur) {
                leaf_.emplace(chosen_.begin(), chosen_.begin() + static_cast<std::ptrdiff_t>(k));
            }
            return;
        }
        if (pruned(k + 1) || !feasible(f, from)) {
            return;
        }
        const std::size_t lo = k < forced_.size() ? forced_[k] : from;
        const std::size_t hi = k < forced_.size() ? forced_[k] + 1 : p_.pool.size();
        if (lo < from) {
            return;
        }
        for (std::size_t i = lo; i < hi && !finished(); ++i) {
            if (pruned(k + 1)) {
                return;
            }
            if (f.code.in_span(p_.pool[i])) {
                continue;
            }
            Frame& next = frames_[k + 1];
            next.code = f.code;
            next.code.insert(p_.pool[i]);
            for (std::size_t u = 0; u < p_.target.size(); ++u) {
                next.user[u] = f.user[u];
                next.user[u].insert(p_.proj[u][i]);
            }
            chosen_[k] = i;
            visit(k + 1, i + 1);
        }
    }

    // Every unserved user must still be servable by the untried pool.
    bool feasible(const Frame& f, std::size_t from) const {
        for (std::size_t u = 0; u < p_.target.size(); ++u) {
            if (f.user[u].in_span(p_.target[u])) {
                continue;
            }
            gf::EchelonBasis b = p_.suffix[u][from];
            for (std::size_t r = 0; r < f.user[u].rank(); ++r) {
                b.insert(f.user[u].row(r));
            }
            if (!b.in_span(p_.target[u])) {
                return false;
            }
        }
        return true;
    }

    const Problem& p_;
    std::atomic<std::uint64_t>& best_;
    std::uint64_t slots_;
    std::uint64_t task_;
    std::atomic<std::uint64_t>& nodes_;
    std::uint64_t guard_;
    std::atomic<bool>& abort_;
    std::vector<Frame> frames_;
    std::vector<std::size_t> chosen_;
    std::vector<std::size_t> forced_;
    std::optional<std::vector<std::size_t>> leaf_;
    std::uint64_t local_nodes_ = 0;
};

std::vector<std::vector<std::size_t>> prefixes(std::size_t pool, std::size_t depth) {
    std::vector<std::vector<std::size_t>> out{{}};
    for (std::size_t d = 0; d < depth; ++d) {
        std::vector<std::vector<std::size_t>> next;
        for (const auto& p : out) {
            const std::size_t first = p.empty() ? 0 : p.back() + 1;
            // A prefix ending on the last pool index has no extension but
            // may itself be a leaf.
            if (first == pool) {
                next.push_back(p);
            }
            for (std::size_t i = first; i < pool; ++i) {
                auto q = p;
                q.push_back(i);
                next.push_back(std::move(q));
            }
        }
        out = std::move(next);
    }
    return out;
}

[[noreturn]] void guard_message(std::uint64_t guard) {
    throw GuardExceeded("code search explored more than " + std::to_string(guard) +
                        " nodes (raise EICP_GUARD_NODES to continue)");
}

} // namespace

MinrankResult minrank_bnb(const model::EicpInstance& inst, const MinrankOptions& opts) {
    MinrankResult res = minrank_candidates(inst, opts);
    const std::size_t ub = res.candidate_kappa;
    // Every selected user lacks its demand, so one transmission is the floor.
    if (ub <= 1) {
        return res;
    }
    const Problem p = make_problem(inst, res.users, opts.candidate_guard);
    res.stats.pool_size = p.pool.size();

    std::atomic<std::uint64_t> nodes{res.stats.nodes_explored};
    std::atomic<bool> abort{false};
    std::uint64_t tail = 0;

    std::vector<std::vector<std::size_t>> tasks{{}};
    int threads = 1;
    if (opts.parallel) {
        threads = opts.threads > 0 ? opts.threads : omp_get_max_threads();
        const std::size_t want = 4 * static_cast<std::size_t>(threads);
        tasks = prefixes(p.pool.size(), std::min<std::size_t>(p.pool.size() >= want ? 1 : 2, ub - 1));
    }
    const std::uint64_t slots = tasks.size();
    std::atomic<std::uint64_t> best{ub * slots};
    std::vector<std::optional<std::vector<std::size_t>>> leaves(tasks.size());
    std::atomic<std::uint64_t> tails{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    const auto n_tasks = static_cast<std::ptrdiff_t>(tasks.size());
#pragma omp parallel for schedule(dynamic, 1) num_threads(threads) if (opts.parallel)
    for (std::ptrdiff_t t = 0; t < n_tasks; ++t) {
        if (abort.load()) {
            continue;
        }
        const auto ti = static_cast<std::size_t>(t);
        CodeSearch s(p, ub, best, slots, ti, nodes, opts.node_guard, abort);
        try {
            s.run(tasks[ti]);
        } catch (...) {
            std::lock_guard lock(error_mutex);
            if (!error) {
                error = std::current_exception();
            }
            abort.store(true);
        }
        leaves[ti] = s.leaf();
        tails.fetch_add(s.local_nodes() & 1023U);
    }
    if (error) {
        try {
            std::rethrow_exception(error);
        } catch (const GuardTripped&) {
            guard_message(opts.node_guard);
        }
    }
    tail = tails.load();
    std::optional<std::vector<std::size_t>> leaf;
    if (best.load() < ub * slots) {
        leaf = leaves[best.load() % slots];
    }
    res.stats.code_nodes_explored = nodes.load() + tail - res.stats.nodes_explored;
    if (nodes.load() + tail > opts.node_guard) {
        guard_message(opts.node_guard);
    }

    if (!leaf) {
        return res;
    }
    res.kappa = leaf->size();
    res.code.transmissions.clear();
    std::vector<gf::GfVector> cols;
    for (std::size_t i : *leaf) {
        const auto& v = p.pool[i];
        const auto support = v.support();
        Index sender = 0;
        while (!inst.knows_all(sender, support)) {
            ++sender;
        }
        res.code.transmissions.push_back({sender, v});
        cols.push_back(v);
    }
    res.witness.clear();
    for (Index u : res.users) {
        auto a = cols;
        for (Index k : inst.side_info(u)) {
            a.push_back(gf::GfVector::unit(p.q, p.dim, k));
        }
        const auto x = gf::solve(gf::GfMatrix::from_columns(p.q, p.dim, a), gf::GfVector::unit(p.q, p.dim, inst.demand(u)));
        if (!x) {
            throw Error("code search returned a code user " + std::to_string(u + 1) + " cannot decode");
        }
        gf::GfVector y(p.q, p.dim);
        for (std::size_t t = 0; t < cols.size(); ++t) {
            y.add_scaled(cols[t], (*x)[t]);
        }
        res.witness.push_back(std::move(y));
    }
    return res;
}

} // namespace eicp::minrank
