#pragma once

// Minrank of an instance. Two quantities are computed:
//
//   candidate minrank  min rank of {e_{d_i} + v_i} where each row is itself
//                      transmittable by a single user other than i;
//   kappa              the length of a shortest scalar linear code, where a
//                      user may combine several transmissions.
//
// The candidate minrank is an upper bound on kappa; the two differ when some
// user can only decode from a combination of transmissions sent by
// different users (the regular tree T_{4,4} is the smallest such case here).
// Also: an unpruned reference enumeration, an independent subset oracle for
// kappa, and operation counts.

#include "eicp/codes.hpp"
#include "eicp/gf.hpp"
#include "eicp/graphs.hpp"
#include "eicp/model.hpp"

#include <boost/multiprecision/cpp_int.hpp>

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace eicp::minrank {

using model::Index;
using model::IndexSet;
using BigInt = boost::multiprecision::cpp_int;

inline constexpr std::uint64_t kDefaultCandidateGuard = std::uint64_t{1} << 20;
inline constexpr std::uint64_t kDefaultNodeGuard = 100'000'000;
inline constexpr std::uint64_t kDefaultExhaustiveGuard = 1'000'000;
inline constexpr std::uint64_t kDefaultOracleBudget = 10'000'000;

/// EICP_GUARD_NODES if set to a positive integer, else kDefaultNodeGuard.
[[nodiscard]] std::uint64_t node_guard_from_env();

/// Vectors e_{d_i} + v_i with supp(v_i) in K_i that some other user can
/// transmit. Ordered by support size, then support indices, then
/// coefficients; e_{d_i} comes first.
struct CandidateSet {
    Index user;
    std::vector<gf::GfVector> vectors;
};

/// Throws GuardExceeded if q^{|K_i|} exceeds the guard for some user.
[[nodiscard]] std::vector<CandidateSet> build_candidates(const model::EicpInstance& inst,
                                                         std::uint64_t guard = kDefaultCandidateGuard);

struct MinrankStats {
    std::uint64_t nodes_explored = 0;       // candidate search
    std::uint64_t code_nodes_explored = 0;  // code search (minrank_bnb only)
    std::size_t pool_size = 0;              // transmittable directions (minrank_bnb only)
    std::uint64_t candidates_total = 0;
    std::uint64_t candidates_distinct = 0;  // across users
    BigInt product_size;                    // prod |C_i|
    BigInt bound_new_def;                   // q^{sum |K_i|}
    BigInt bound_old_def_pair;              // q^{sum |K_i|^2} (q^{sum |K_i|} + 1)
};

struct MinrankResult {
    std::size_t kappa = 0;
    std::size_t candidate_kappa = 0;
    std::vector<Index> users;            // users the minimum ranges over
    /// witness[k] = e_{d_i} + v_i for i = users[k], inside the span of `code`.
    std::vector<gf::GfVector> witness;
    codes::EmbeddedIndexCode code;       // length kappa
    MinrankStats stats;
};

struct MinrankOptions {
    bool parallel = true;
    int threads = 0;  // 0: OpenMP default
    std::uint64_t node_guard = kDefaultNodeGuard;
    std::uint64_t candidate_guard = kDefaultCandidateGuard;
    /// Restrict the minimum to these users' vectors; every user may still
    /// act as transmitter. All users when unset.
    std::optional<std::vector<Index>> users;
};

/// Candidate minrank by depth-first search over candidate choices, one user
/// per level, users ordered by ascending |C_i|. A user whose candidate set
/// contains an earlier user's set copies that user's choice. The incumbent
/// starts at the uncoded witness, nodes with rank >= incumbent are pruned,
/// and a candidate already in the span is taken without trying siblings.
/// Sets kappa = candidate_kappa. The result does not depend on `parallel`
/// except for nodes_explored. Throws GuardExceeded when the node guard trips.
[[nodiscard]] MinrankResult minrank_candidates(const model::EicpInstance& inst, const MinrankOptions& opts = {});

/// Exact kappa. Starts from minrank_candidates as incumbent, then searches
/// subspaces spanned by transmittable directions in pool order for a
/// shorter decodable code, pruning on the incumbent and on users that the
/// remaining pool can no longer serve. Deterministic like
/// minrank_candidates; shares its node guard.
[[nodiscard]] MinrankResult minrank_bnb(const model::EicpInstance& inst, const MinrankOptions& opts = {});

/// Pruning-free reference for the candidate minrank: ranks every element of
/// prod C_i. Throws GuardExceeded if the product exceeds the guard.
[[nodiscard]] MinrankResult minrank_exhaustive(const model::EicpInstance& inst,
                                               std::uint64_t guard = kDefaultExhaustiveGuard,
                                               const std::optional<std::vector<Index>>& users = std::nullopt);

/// Every stacked N x M matrix (row i from C_i), in odometer order.
[[nodiscard]] std::vector<gf::GfMatrix> stacked_matrices(const model::EicpInstance& inst,
                                                         std::uint64_t guard = kDefaultExhaustiveGuard);

struct OracleResult {
    std::size_t length = 0;  // l_max + 1 when not found
    bool found = false;
    std::uint64_t subsets_tested = 0;
    std::size_t pool_size = 0;
};

/// Smallest l <= l_max such that some l transmissions, each supported in a
/// single user's side information, let every (selected) user decode. The
/// pool holds one representative per projective direction. Throws
/// GuardExceeded if the subset count for a tried l exceeds the budget.
[[nodiscard]] OracleResult minrank_oracle(const model::EicpInstance& inst, std::size_t l_max,
                                          std::uint64_t budget = kDefaultOracleBudget,
                                          const std::optional<std::vector<Index>>& users = std::nullopt);

/// The projective pool the oracle searches, normalized, in ascending order.
[[nodiscard]] std::vector<gf::GfVector> transmission_pool(const model::EicpInstance& inst,
                                                          std::uint64_t guard = kDefaultCandidateGuard);

struct ComplexityReport {
    BigInt actual;           // prod |C_i|, rank evaluations of the unpruned enumeration
    BigInt bound_new;        // q^{sum |K_i|}
    BigInt old_a_count;      // q^{sum |K_i|^2}
    std::size_t old_a_rows = 0;
    std::size_t old_a_cols = 0;
    BigInt old_concat_count; // q^{sum |K_i|^2} q^{sum |K_i|}
    std::size_t old_concat_cols = 0;
    BigInt old_total;        // q^{sum |K_i|^2} (q^{sum |K_i|} + 1)
};

[[nodiscard]] ComplexityReport complexity_report(const model::EicpInstance& inst,
                                                 std::uint64_t guard = kDefaultCandidateGuard);

/// Code from candidate rows: the first independent rows, each sent by the
/// smallest user other than its owner whose side information contains it.
/// Throws InvalidCode if some row has no such user.
[[nodiscard]] codes::EmbeddedIndexCode extract_code(std::span<const gf::GfVector> rows, std::span<const Index> owners,
                                                    const model::EicpInstance& inst);

/// Per user, { {d_i} + S : S subset of K_i, {d_i} + S inside N^+(u_j) for
/// some j != i }, in candidate order.
[[nodiscard]] std::vector<std::vector<IndexSet>> graph_candidate_supports(const graphs::BipartiteProblemGraph& pg,
                                                                           std::uint64_t guard = kDefaultCandidateGuard);

} // namespace eicp::minrank
