#include "eicp/error.hpp"
#include "eicp/minrank.hpp"

#include <omp.h>

#include <algorithm>
#include <atomic>
#include <exception>
#include <limits>
#include <mutex>
#include <numeric>
#include <set>
#include <string>

namespace eicp::minrank {

namespace {

std::vector<Index> selected_users(const model::EicpInstance& inst, const std::optional<std::vector<Index>>& users) {
    std::vector<Index> sel;
    if (users) {
        sel = *users;
        std::ranges::sort(sel);
        sel.erase(std::unique(sel.begin(), sel.end()), sel.end());
        for (Index u : sel) {
            if (u >= inst.num_users()) {
                throw DimensionMismatch("selected user " + std::to_string(u + 1) + " outside the instance");
            }
        }
    } else {
        sel.resize(inst.num_users());
        std::iota(sel.begin(), sel.end(), 0);
    }
    return sel;
}

MinrankStats base_stats(const model::EicpInstance& inst, const std::vector<CandidateSet>& cands,
                        const std::vector<Index>& sel) {
    MinrankStats s;
    s.product_size = 1;
    std::set<gf::GfVector> distinct;
    for (Index u : sel) {
        s.candidates_total += cands[u].vectors.size();
        s.product_size *= cands[u].vectors.size();
        distinct.insert(cands[u].vectors.begin(), cands[u].vectors.end());
    }
    s.candidates_distinct = distinct.size();
    const unsigned q = inst.field().value();
    std::size_t sum = 0;
    std::size_t sum_sq = 0;
    for (const auto& k : inst.side_info()) {
        sum += k.size();
        sum_sq += k.size() * k.size();
    }
    BigInt new_def = 1;
    BigInt old_a = 1;
    for (std::size_t i = 0; i < sum; ++i) {
        new_def *= q;
    }
    for (std::size_t i = 0; i < sum_sq; ++i) {
        old_a *= q;
    }
    s.bound_new_def = new_def;
    s.bound_old_def_pair = old_a * (new_def + 1);
    return s;
}

std::uint64_t to_u64_capped(const BigInt& v) {
    return v > std::numeric_limits<std::uint64_t>::max() ? std::numeric_limits<std::uint64_t>::max()
                                                         : static_cast<std::uint64_t>(v);
}

// Search levels after ordering and absorption.
struct Plan {
    std::vector<Index> sel;                           // selected users, ascending
    std::vector<const std::vector<gf::GfVector>*> level;  // candidate list per active level
    std::vector<std::size_t> level_of;                // per sel position: level it copies or owns
};

Plan make_plan(const std::vector<CandidateSet>& cands, std::vector<Index> sel) {
    Plan p;
    p.sel = std::move(sel);
    std::vector<std::size_t> order(p.sel.size());
    std::iota(order.begin(), order.end(), 0);
    std::ranges::stable_sort(order, [&](std::size_t a, std::size_t b) {
        return cands[p.sel[a]].vectors.size() < cands[p.sel[b]].vectors.size();
    });
    p.level_of.assign(p.sel.size(), 0);
    std::vector<std::set<gf::GfVector>> active_sets;
    for (std::size_t pos : order) {
        const auto& c = cands[p.sel[pos]].vectors;
        const std::set<gf::GfVector> mine(c.begin(), c.end());
        std::optional<std::size_t> host;
        for (std::size_t l = 0; l < active_sets.size() && !host; ++l) {
            if (std::ranges::includes(mine, active_sets[l])) {
                host = l;
            }
        }
        if (host) {
            p.level_of[pos] = *host;
        } else {
            p.level_of[pos] = p.level.size();
            p.level.push_back(&c);
            active_sets.push_back(mine);
        }
    }
    return p;
}

class GuardTripped : public std::exception {};

// Depth-first search state for one worker. `best` is shared; a leaf is only
// accepted when its rank beats the current incumbent.
class Search {
public:
    Search(const Plan& plan, gf::FieldOrder q, std::size_t dim, std::atomic<std::size_t>& best,
           std::atomic<std::uint64_t>& nodes, std::uint64_t guard, std::atomic<bool>& abort, bool stop_at_first)
        : plan_(plan), best_(best), nodes_(nodes), guard_(guard), abort_(abort), stop_at_first_(stop_at_first),
          frames_(plan.level.size() + 1, gf::EchelonBasis(q, dim)), choice_(plan.level.size(), 0) {}

    void start(std::size_t depth, const gf::EchelonBasis& basis, const std::vector<std::size_t>& prefix) {
        frames_[depth] = basis;
        std::copy(prefix.begin(), prefix.end(), choice_.begin());
        run(depth);
    }

    [[nodiscard]] const std::optional<std::vector<std::size_t>>& leaf() const noexcept { return leaf_; }
    [[nodiscard]] std::uint64_t local_nodes() const noexcept { return local_nodes_; }

private:
    bool finished() const { return abort_.load(std::memory_order_relaxed) || (stop_at_first_ && leaf_); }

    void count() {
        ++local_nodes_;
        if ((local_nodes_ & 1023U) == 0) {
            if (nodes_.fetch_add(1024, std::memory_order_relaxed) + 1024 > guard_) {
                abort_.store(true);
                throw GuardTripped();
            }
        }
    }

    void run(std::size_t k) {
        if (finished() || frames_[k].rank() >= best_.load(std::memory_order_relaxed)) {
            return;
        }
        if (k == plan_.level.size()) {
            const std::size_t r = frames_[k].rank();
            std::size_t cur = best_.load();
            while (r < cur && !best_.compare_exchange_weak(cur, r)) {
            }
            if (r < cur) {
                leaf_ = choice_;
            }
            return;
        }
        const auto& c = *plan_.level[k];
        for (std::size_t idx = 0; idx < c.size(); ++idx) {
            if (frames_[k].in_span(c[idx])) {
                choice_[k] = idx;
                frames_[k + 1] = frames_[k];
                count();
                run(k + 1);
                return;
            }
        }
        for (std::size_t idx = 0; idx < c.size() && !finished(); ++idx) {
            if (frames_[k].rank() + 1 >= best_.load(std::memory_order_relaxed)) {
                return;
            }
            choice_[k] = idx;
            frames_[k + 1] = frames_[k];
            frames_[k + 1].insert(c[idx]);
            count();
            run(k + 1);
        }
    }

    const Plan& plan_;
    std::atomic<std::size_t>& best_;
    std::atomic<std::uint64_t>& nodes_;
    std::uint64_t guard_;
    std::atomic<bool>& abort_;
    bool stop_at_first_;
    std::vector<gf::EchelonBasis> frames_;
    std::vector<std::size_t> choice_;
    std::optional<std::vector<std::size_t>> leaf_;
    std::uint64_t local_nodes_ = 0;
};

struct Task {
    gf::EchelonBasis basis;
    std::vector<std::size_t> prefix;
};

// Breadth-first expansion of the top levels, applying the same pruning and
// span-dominance rules as Search, until there are enough tasks.
std::pair<std::vector<Task>, std::size_t> split(const Plan& plan, gf::FieldOrder q, std::size_t dim,
                                                std::size_t best, std::size_t want, std::uint64_t& nodes) {
    std::vector<Task> tasks{{gf::EchelonBasis(q, dim), {}}};
    std::size_t depth = 0;
    while (depth < plan.level.size() && tasks.size() < want && !tasks.empty()) {
        std::vector<Task> next;
        const auto& c = *plan.level[depth];
        for (const auto& t : tasks) {
            std::optional<std::size_t> dominant;
            for (std::size_t idx = 0; idx < c.size() && !dominant; ++idx) {
                if (t.basis.in_span(c[idx])) {
                    dominant = idx;
                }
            }
            if (dominant) {
                auto p = t.prefix;
                p.push_back(*dominant);
                next.push_back({t.basis, std::move(p)});
                ++nodes;
                continue;
            }
            if (t.basis.rank() + 1 >= best) {
                continue;
            }
            for (std::size_t idx = 0; idx < c.size(); ++idx) {
                auto [b, grew] = t.basis.inserted(c[idx]);
                auto p = t.prefix;
                p.push_back(idx);
                next.push_back({std::move(b), std::move(p)});
                ++nodes;
            }
        }
        tasks = std::move(next);
        ++depth;
    }
    return {std::move(tasks), depth};
}

std::vector<gf::GfVector> assemble_witness(const Plan& plan, const std::vector<std::size_t>& choice) {
    std::vector<gf::GfVector> w;
    for (std::size_t pos = 0; pos < plan.sel.size(); ++pos) {
        const std::size_t l = plan.level_of[pos];
        w.push_back((*plan.level[l])[choice[l]]);
    }
    return w;
}

void guard_message(std::uint64_t guard) {
    throw GuardExceeded("branch-and-bound explored more than " + std::to_string(guard) +
                        " nodes (raise EICP_GUARD_NODES to continue)");
}

} // namespace

MinrankResult minrank_candidates(const model::EicpInstance& inst, const MinrankOptions& opts) {
    const auto cands = build_candidates(inst, opts.candidate_guard);
    const Plan plan = make_plan(cands, selected_users(inst, opts.users));
    MinrankResult res;
    res.users = plan.sel;
    res.stats = base_stats(inst, cands, plan.sel);

    // Uncoded witness: every user takes e_{d_i}, the first candidate.
    const std::vector<std::size_t> uncoded(plan.level.size(), 0);
    std::vector<Index> demanded;
    for (Index u : plan.sel) {
        demanded.push_back(inst.demand(u));
    }
    const std::size_t initial = model::uniq(demanded);

    const auto q = inst.field();
    const std::size_t dim = inst.num_messages();
    std::atomic<std::size_t> best{initial};
    std::atomic<std::uint64_t> nodes{0};
    std::atomic<bool> abort{false};
    std::optional<std::vector<std::size_t>> leaf;

    if (!opts.parallel || plan.level.empty()) {
        Search s(plan, q, dim, best, nodes, opts.node_guard, abort, false);
        try {
            s.start(0, gf::EchelonBasis(q, dim), {});
        } catch (const GuardTripped&) {
            guard_message(opts.node_guard);
        }
        leaf = s.leaf();
        res.stats.nodes_explored = nodes.load() + (s.local_nodes() & 1023U);
    } else {
        const int threads = opts.threads > 0 ? opts.threads : omp_get_max_threads();
        std::uint64_t split_nodes = 0;
        auto [tasks, depth] = split(plan, q, dim, initial, 4 * static_cast<std::size_t>(threads), split_nodes);
        std::atomic<std::uint64_t> tail{0};
        std::exception_ptr error;
        std::mutex error_mutex;
        const auto n_tasks = static_cast<std::ptrdiff_t>(tasks.size());
#pragma omp parallel for schedule(dynamic, 1) num_threads(threads)
        for (std::ptrdiff_t t = 0; t < n_tasks; ++t) {
            if (abort.load()) {
                continue;
            }
            Search s(plan, q, dim, best, nodes, opts.node_guard, abort, false);
            try {
                s.start(depth, tasks[static_cast<std::size_t>(t)].basis, tasks[static_cast<std::size_t>(t)].prefix);
            } catch (...) {
                std::lock_guard lock(error_mutex);
                if (!error) {
                    error = std::current_exception();
                }
                abort.store(true);
            }
            tail.fetch_add(s.local_nodes() & 1023U);
        }
        if (error) {
            try {
                std::rethrow_exception(error);
            } catch (const GuardTripped&) {
                guard_message(opts.node_guard);
            }
        }
        res.stats.nodes_explored = split_nodes + nodes.load() + tail.load();

        // Re-select the witness serially: the first leaf in depth-first
        // order whose rank is the optimum, exactly as the serial run finds.
        const std::size_t kappa = best.load();
        if (kappa < initial) {
            std::atomic<std::size_t> bound{kappa + 1};
            std::atomic<std::uint64_t> reselect_nodes{0};
            std::atomic<bool> reselect_abort{false};
            Search s(plan, q, dim, bound, reselect_nodes, std::numeric_limits<std::uint64_t>::max(),
                     reselect_abort, true);
            s.start(0, gf::EchelonBasis(q, dim), {});
            leaf = s.leaf();
        }
    }

    if (res.stats.nodes_explored > opts.node_guard) {
        guard_message(opts.node_guard);
    }
    res.kappa = best.load();
    res.candidate_kappa = res.kappa;
    res.witness = assemble_witness(plan, leaf ? *leaf : uncoded);
    res.code = extract_code(res.witness, res.users, inst);
    return res;
}

MinrankResult minrank_exhaustive(const model::EicpInstance& inst, std::uint64_t guard,
                                 const std::optional<std::vector<Index>>& users) {
    const auto cands = build_candidates(inst);
    const auto sel = selected_users(inst, users);
    MinrankResult res;
    res.users = sel;
    res.stats = base_stats(inst, cands, sel);
    if (res.stats.product_size > guard) {
        throw GuardExceeded("exhaustive enumeration of " + res.stats.product_size.str() +
                            " stacked matrices exceeds the guard " + std::to_string(guard));
    }
    const auto q = inst.field();
    std::vector<std::size_t> cursor(sel.size(), 0);
    std::vector<gf::GfVector> rows;
    res.kappa = std::numeric_limits<std::size_t>::max();
    std::uint64_t evaluated = 0;
    while (true) {
        rows.clear();
        for (std::size_t k = 0; k < sel.size(); ++k) {
            rows.push_back(cands[sel[k]].vectors[cursor[k]]);
        }
        const std::size_t r = gf::rank(gf::GfMatrix::from_rows(q, inst.num_messages(), rows));
        ++evaluated;
        if (r < res.kappa) {
            res.kappa = r;
            res.witness = rows;
        }
        std::size_t k = sel.size();
        while (k > 0 && cursor[k - 1] + 1 == cands[sel[k - 1]].vectors.size()) {
            cursor[--k] = 0;
        }
        if (k == 0) {
            break;
        }
        ++cursor[k - 1];
    }
    res.stats.nodes_explored = evaluated;
    res.candidate_kappa = res.kappa;
    res.code = extract_code(res.witness, res.users, inst);
    return res;
}

std::vector<gf::GfMatrix> stacked_matrices(const model::EicpInstance& inst, std::uint64_t guard) {
    const auto cands = build_candidates(inst);
    BigInt product = 1;
    for (const auto& c : cands) {
        product *= c.vectors.size();
    }
    if (product > guard) {
        throw GuardExceeded("stacked matrix enumeration of " + product.str() + " exceeds the guard " +
                            std::to_string(guard));
    }
    std::vector<gf::GfMatrix> out;
    out.reserve(static_cast<std::size_t>(to_u64_capped(product)));
    std::vector<std::size_t> cursor(cands.size(), 0);
    std::vector<gf::GfVector> rows;
    while (true) {
        rows.clear();
        for (std::size_t k = 0; k < cands.size(); ++k) {
            rows.push_back(cands[k].vectors[cursor[k]]);
        }
        out.push_back(gf::GfMatrix::from_rows(inst.field(), inst.num_messages(), rows));
        std::size_t k = cands.size();
        while (k > 0 && cursor[k - 1] + 1 == cands[k - 1].vectors.size()) {
            cursor[--k] = 0;
        }
        if (k == 0) {
            break;
        }
        ++cursor[k - 1];
    }
    return out;
}

codes::EmbeddedIndexCode extract_code(std::span<const gf::GfVector> rows, std::span<const Index> owners,
                                      const model::EicpInstance& inst) {
    if (rows.size() != owners.size()) {
        throw DimensionMismatch("row and owner lists differ in length");
    }
    codes::EmbeddedIndexCode code;
    gf::EchelonBasis basis(inst.field(), inst.num_messages());
    for (std::size_t k = 0; k < rows.size(); ++k) {
        const auto& v = rows[k];
        if (!basis.insert(v)) {
            continue;
        }
        const auto support = v.support();
        std::optional<Index> sender;
        for (Index j = 0; j < inst.num_users() && !sender; ++j) {
            if (j != owners[k] && inst.knows_all(j, support)) {
                sender = j;
            }
        }
        if (!sender) {
            throw InvalidCode("row of user " + std::to_string(owners[k] + 1) + " has no eligible transmitter");
        }
        code.transmissions.push_back({*sender, v});
    }
    return code;
}

} // namespace eicp::minrank
