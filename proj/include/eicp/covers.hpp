#pragma once

// Tree cover and bi-clique cover transmission schemes for single unicast
// instances.

#include "eicp/codes.hpp"
#include "eicp/graphs.hpp"
#include "eicp/minrank.hpp"
#include "eicp/model.hpp"

#include <cstddef>
#include <vector>

namespace eicp::covers {

enum class Scheme { Tree, BiClique };

[[nodiscard]] const char* to_string(Scheme s) noexcept;

struct CoverCounts {
    std::size_t structures = 0;    // K
    std::size_t single_edges = 0;  // K_e
    std::size_t length = 0;
};

struct CoverPlan {
    Scheme scheme = Scheme::Tree;
    bool exact = false;
    std::vector<graphs::StructureWitness> structures;
    codes::EmbeddedIndexCode code;
    CoverCounts counts;
    /// Every bi-clique with two or more messages has a covering user.
    bool all_bicliques_covered = true;
    /// Every user decodes from one transmission and its side information.
    bool task_based = true;
};

inline constexpr std::size_t kExactCoverMaxUsers = 8;

/// Message-disjoint cover of the demanded messages by covered pairs, regular
/// trees and single edges. The greedy pass takes covered pairs first, then
/// regular trees by increasing size, each in lexicographic order, and single
/// edges for the rest. exact=true minimizes the length by subset dynamic
/// programming (N <= 8, else GuardExceeded). Throws NotSingleUnicast.
[[nodiscard]] CoverPlan tree_cover(const model::EicpInstance& inst, bool exact = false);

/// Message-disjoint cover by bi-cliques: greedily the largest maximal
/// bi-clique, covered before uncovered, lexicographic ties; exact=true
/// minimizes the length as above.
[[nodiscard]] CoverPlan biclique_cover(const model::EicpInstance& inst, bool exact = false);

/// Transmission cost of one structure in its scheme.
[[nodiscard]] std::size_t structure_cost(const graphs::StructureWitness& w);

/// Transmissions realizing one structure.
[[nodiscard]] std::vector<codes::Transmission> structure_code(const graphs::StructureWitness& w,
                                                              const model::EicpInstance& inst);

struct SchemeComparison {
    std::size_t tree_length = 0;
    std::size_t biclique_length = 0;
    std::size_t kappa = 0;
};

/// Runs both greedy covers and the minrank. Throws Error if kappa exceeds
/// either scheme length.
[[nodiscard]] SchemeComparison compare_schemes(const model::EicpInstance& inst,
                                               const minrank::MinrankOptions& opts = {});

} // namespace eicp::covers
