#pragma once

// Embedded index coding instances E(N, M, K, d): construction, validity,
// demand splitting, JSON I/O and seeded generators.
//
// All indices are 0-based in memory and 1-based in files.

#include "eicp/gf.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace eicp::model {

using Index = std::size_t;
using IndexSet = std::vector<Index>;  // sorted, no duplicates

class EicpInstance {
public:
    /// Throws StructuralError if a side-information or demand index is out of
    /// range, a side-information set repeats an index, or the number of
    /// side-information sets differs from the number of demands. Semantic
    /// constraints are reported by validate().
    EicpInstance(gf::FieldOrder q, std::size_t num_messages, std::vector<IndexSet> side_info,
                 std::vector<Index> demands);

    [[nodiscard]] gf::FieldOrder field() const noexcept { return q_; }
    [[nodiscard]] std::size_t num_users() const noexcept { return demands_.size(); }
    [[nodiscard]] std::size_t num_messages() const noexcept { return num_messages_; }
    [[nodiscard]] const std::vector<IndexSet>& side_info() const noexcept { return side_info_; }
    [[nodiscard]] const IndexSet& side_info(Index user) const { return side_info_.at(user); }
    [[nodiscard]] const std::vector<Index>& demands() const noexcept { return demands_; }
    [[nodiscard]] Index demand(Index user) const { return demands_.at(user); }
    [[nodiscard]] bool knows(Index user, Index message) const {
        return knows_[user * num_messages_ + message] != 0;
    }
    /// Every index of the sorted set lies in K_user.
    [[nodiscard]] bool knows_all(Index user, std::span<const Index> messages) const;

    /// Same side information and demands over a different field.
    [[nodiscard]] EicpInstance with_field(gf::FieldOrder q) const;
    [[nodiscard]] EicpInstance with_demands(std::vector<Index> demands) const;

    friend bool operator==(const EicpInstance& a, const EicpInstance& b) {
        return a.q_ == b.q_ && a.num_messages_ == b.num_messages_ && a.side_info_ == b.side_info_ &&
               a.demands_ == b.demands_;
    }

private:
    gf::FieldOrder q_;
    std::size_t num_messages_;
    std::vector<IndexSet> side_info_;
    std::vector<Index> demands_;
    std::vector<char> knows_;
};

struct RawUser {
    IndexSet wants;
    IndexSet knows;
};

/// Instance before multi-demand users are split.
struct RawEicp {
    gf::FieldOrder q;
    std::size_t num_messages;
    std::vector<RawUser> users;
};

/// One user per wanted message, sharing the original side information. User
/// order is preserved and a user's demands are emitted in ascending order.
[[nodiscard]] EicpInstance split_multi_demand(const RawEicp& raw);

enum class ViolationKind {
    DemandInSideInfo,   // d_i in K_i
    MessageAtNoUser,    // union of K_i misses a message
    UserHasAllMessages, // K_i = [M]
    MessageAtAllUsers,  // some message in every K_i
    NoOtherHolder,      // no j != i with d_i in K_j
};

struct Violation {
    ViolationKind kind;
    Index index;  // offending user or message
    std::string message;
};

struct ValidationReport {
    std::vector<Violation> violations;
    std::vector<std::string> warnings;

    [[nodiscard]] bool ok() const noexcept { return violations.empty(); }
};

[[nodiscard]] ValidationReport validate(const EicpInstance& inst);

struct InstanceClass {
    bool single_unicast = false;
    bool single_uniprior = false;
};

[[nodiscard]] InstanceClass classify(const EicpInstance& inst);

/// Number of distinct demanded messages.
[[nodiscard]] std::size_t uniq(std::span<const Index> demands);

// ------------------------------------------------------------------ JSON I/O

/// Parses the instance file format. Accepts either "demands" or the
/// multi-demand "wants" form; unknown keys are rejected. Throws ParseError.
[[nodiscard]] EicpInstance parse_instance(const std::string& text);
[[nodiscard]] std::string serialize_instance(const EicpInstance& inst);
[[nodiscard]] EicpInstance load_instance(const std::string& path);

// ---------------------------------------------------------------- generators

/// Side information sampled i.i.d. with the given density, repaired until
/// every validity constraint holds; demands uniform over [M] \ K_i.
[[nodiscard]] EicpInstance gen_random(std::size_t num_users, std::size_t num_messages, gf::FieldOrder q,
                                      double density, std::uint64_t seed);

/// Heavy-overlap model: a fraction `overlap` of the messages is held by all
/// but a few users, the rest by one or two users. The side-information graph
/// of every emitted instance is connected.
[[nodiscard]] EicpInstance gen_vanet(std::size_t num_users, std::size_t num_messages, gf::FieldOrder q,
                                     double overlap, std::uint64_t seed);

/// M = N, distinct demands; side information sampled as in gen_random.
[[nodiscard]] EicpInstance gen_single_unicast(std::size_t num_users, gf::FieldOrder q, double density,
                                              std::uint64_t seed);

/// M = N, K_i = {pi(i)} for a random permutation pi, demands uniform.
[[nodiscard]] EicpInstance gen_single_uniprior(std::size_t num_users, gf::FieldOrder q, std::uint64_t seed);

// ------------------------------------------------------- demand enumeration

inline constexpr std::uint64_t kDefaultDemandGuard = 1'000'000;

/// Streams every demand vector d with d_i not in K_i, lexicographically.
class DemandEnumerator {
public:
    /// Throws GuardExceeded, naming the product, if prod (M - |K_i|)
    /// exceeds the guard.
    DemandEnumerator(std::span<const IndexSet> side_info, std::size_t num_messages,
                     std::uint64_t guard = kDefaultDemandGuard);

    [[nodiscard]] std::uint64_t count() const noexcept { return count_; }
    /// Next demand vector, or nullopt when exhausted.
    std::optional<std::vector<Index>> next();

private:
    std::vector<IndexSet> choices_;
    std::vector<std::size_t> cursor_;
    std::uint64_t count_ = 0;
    bool done_ = false;
};

[[nodiscard]] std::vector<std::vector<Index>> enumerate_demands(std::span<const IndexSet> side_info,
                                                                std::size_t num_messages,
                                                                std::uint64_t guard = kDefaultDemandGuard);

} // namespace eicp::model
