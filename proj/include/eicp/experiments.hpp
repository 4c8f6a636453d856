#pragma once

// Empirical studies: the N = M = 3 side-information classes, the
// connectedness scan, and the regular-tree / bi-clique sweeps, plus the
// canonical instances they use.

#include "eicp/gf.hpp"
#include "eicp/model.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace eicp::experiments {

using model::Index;

struct ExperimentReport {
    std::string name;
    std::vector<std::pair<std::string, std::string>> parameters;
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;
    bool pass = false;
    std::string verdict;
    /// Serialized instance reproducing the first failure.
    std::optional<std::string> counterexample;
    std::vector<std::string> notes;
};

[[nodiscard]] std::string to_tsv(const ExperimentReport& r);
[[nodiscard]] std::string to_json(const ExperimentReport& r);

/// T_{n,n}: K_i = {i+1, i+2} (indices mod n) for i < n, K_n = {1}, d_i = i.
[[nodiscard]] model::EicpInstance regular_tree_instance(std::size_t n, gf::FieldOrder q);

/// Uncovered: N = M = n, K_i = [n] \ {i}, d_i = i. Covered: one extra user
/// n+1 holding x_1..x_n and demanding x_{n+1}, which user 1 also holds.
[[nodiscard]] model::EicpInstance biclique_instance(std::size_t n, bool covered, gf::FieldOrder q);

/// Single unicast instance whose side-information graph is a uniformly
/// grown random tree on n users and n messages. Throws GenerationFailure.
[[nodiscard]] model::EicpInstance random_tree_instance(std::size_t n, gf::FieldOrder q, std::uint64_t seed);

/// Every side-information family on n users and m messages with each message
/// held by some but not all users and no user holding everything.
[[nodiscard]] std::vector<std::vector<model::IndexSet>> enumerate_side_info(std::size_t n, std::size_t m);

struct Fig5Options {
    unsigned q = 2;
    int threads = 0;
};

[[nodiscard]] ExperimentReport experiment_fig5(const Fig5Options& opts = {});

struct Theorem2Options {
    std::size_t n_max = 4;
    std::size_t m_max = 4;
    unsigned q = 2;
    /// Random instances per (N, M) pair beyond the exhaustive range.
    std::size_t samples = 200;
    std::uint64_t seed = 1;
    int threads = 0;
};

[[nodiscard]] ExperimentReport experiment_theorem2(const Theorem2Options& opts = {});

enum class SweepKind { Tree, BiClique, RandomTree };

struct SweepOptions {
    SweepKind kind = SweepKind::Tree;
    std::size_t n_lo = 3;
    std::size_t n_hi = 6;
    unsigned q = 2;
    std::size_t random_trees = 20;  // per n, RandomTree only
    std::uint64_t seed = 1;
};

[[nodiscard]] ExperimentReport experiment_lemma_sweep(const SweepOptions& opts);

} // namespace eicp::experiments
