#include "eicp/model.hpp"

#include "eicp/error.hpp"

#include <boost/multiprecision/cpp_int.hpp>

#include <algorithm>
#include <set>
#include <string>

namespace eicp::model {

EicpInstance::EicpInstance(gf::FieldOrder q, std::size_t num_messages, std::vector<IndexSet> side_info,
                           std::vector<Index> demands)
    : q_(q), num_messages_(num_messages), side_info_(std::move(side_info)), demands_(std::move(demands)) {
    if (side_info_.size() != demands_.size()) {
        throw StructuralError("instance has " + std::to_string(side_info_.size()) + " side-information sets but " +
                              std::to_string(demands_.size()) + " demands");
    }
    knows_.assign(demands_.size() * num_messages_, 0);
    for (Index i = 0; i < side_info_.size(); ++i) {
        auto& k = side_info_[i];
        std::ranges::sort(k);
        if (std::ranges::adjacent_find(k) != k.end()) {
            throw StructuralError("side information of user " + std::to_string(i + 1) + " repeats a message");
        }
        for (Index m : k) {
            if (m >= num_messages_) {
                throw StructuralError("side information of user " + std::to_string(i + 1) +
                                      " names message " + std::to_string(m + 1) + " outside [1, " +
                                      std::to_string(num_messages_) + "]");
            }
            knows_[i * num_messages_ + m] = 1;
        }
        if (demands_[i] >= num_messages_) {
            throw StructuralError("demand of user " + std::to_string(i + 1) + " is message " +
                                  std::to_string(demands_[i] + 1) + " outside [1, " +
                                  std::to_string(num_messages_) + "]");
        }
    }
}

bool EicpInstance::knows_all(Index user, std::span<const Index> messages) const {
    return std::ranges::all_of(messages, [&](Index m) { return knows(user, m); });
}

EicpInstance EicpInstance::with_field(gf::FieldOrder q) const {
    return EicpInstance(q, num_messages_, side_info_, demands_);
}

EicpInstance EicpInstance::with_demands(std::vector<Index> demands) const {
    return EicpInstance(q_, num_messages_, side_info_, std::move(demands));
}

EicpInstance split_multi_demand(const RawEicp& raw) {
    std::vector<IndexSet> side_info;
    std::vector<Index> demands;
    for (Index i = 0; i < raw.users.size(); ++i) {
        const auto& u = raw.users[i];
        if (u.wants.empty()) {
            throw NoDemandError("user " + std::to_string(i + 1) + " demands no message");
        }
        IndexSet wants = u.wants;
        std::ranges::sort(wants);
        wants.erase(std::unique(wants.begin(), wants.end()), wants.end());
        for (Index w : wants) {
            if (std::ranges::find(u.knows, w) != u.knows.end()) {
                throw StructuralError("user " + std::to_string(i + 1) + " wants message " + std::to_string(w + 1) +
                                      " it already knows");
            }
            side_info.push_back(u.knows);
            demands.push_back(w);
        }
    }
    return EicpInstance(raw.q, raw.num_messages, std::move(side_info), std::move(demands));
}

ValidationReport validate(const EicpInstance& inst) {
    ValidationReport report;
    const std::size_t n = inst.num_users();
    const std::size_t m = inst.num_messages();
    auto user = [](Index i) { return "user " + std::to_string(i + 1); };
    auto msg = [](Index j) { return "message " + std::to_string(j + 1); };

    std::vector<std::size_t> holders(m, 0);
    for (Index i = 0; i < n; ++i) {
        for (Index j : inst.side_info(i)) {
            ++holders[j];
        }
    }
    for (Index i = 0; i < n; ++i) {
        const Index d = inst.demand(i);
        if (inst.knows(i, d)) {
            report.violations.push_back(
                {ViolationKind::DemandInSideInfo, i, user(i) + " demands " + msg(d) + " it already possesses"});
        }
        if (inst.side_info(i).size() == m) {
            report.violations.push_back(
                {ViolationKind::UserHasAllMessages, i, user(i) + " possesses all messages"});
        }
        bool other = false;
        for (Index j = 0; j < n && !other; ++j) {
            other = j != i && inst.knows(j, d);
        }
        if (!other) {
            report.violations.push_back(
                {ViolationKind::NoOtherHolder, i, "no user other than " + user(i) + " holds " + msg(d)});
        }
    }
    for (Index j = 0; j < m; ++j) {
        if (holders[j] == 0) {
            report.violations.push_back({ViolationKind::MessageAtNoUser, j, msg(j) + " is held by no user"});
        } else if (holders[j] == n) {
            report.violations.push_back({ViolationKind::MessageAtAllUsers, j, msg(j) + " is held at all users"});
        }
    }
    if (m > n) {
        report.warnings.push_back("M = " + std::to_string(m) + " exceeds N = " + std::to_string(n) +
                                  "; some messages are not demanded");
    }
    return report;
}

InstanceClass classify(const EicpInstance& inst) {
    InstanceClass c;
    const auto& d = inst.demands();
    c.single_unicast = inst.num_messages() == inst.num_users() && uniq(d) == d.size();
    std::set<IndexSet> distinct;
    bool singletons = true;
    for (const auto& k : inst.side_info()) {
        singletons = singletons && k.size() == 1;
        distinct.insert(k);
    }
    c.single_uniprior = singletons && distinct.size() == inst.num_users();
    return c;
}

std::size_t uniq(std::span<const Index> demands) {
    std::vector<Index> d(demands.begin(), demands.end());
    std::ranges::sort(d);
    return static_cast<std::size_t>(std::unique(d.begin(), d.end()) - d.begin());
}

// ------------------------------------------------------- demand enumeration

DemandEnumerator::DemandEnumerator(std::span<const IndexSet> side_info, std::size_t num_messages,
                                   std::uint64_t guard) {
    boost::multiprecision::cpp_int product = 1;
    for (const auto& k : side_info) {
        IndexSet options;
        for (Index j = 0; j < num_messages; ++j) {
            if (!std::ranges::binary_search(k, j)) {
                options.push_back(j);
            }
        }
        product *= options.size();
        choices_.push_back(std::move(options));
    }
    if (product > guard) {
        throw GuardExceeded("demand enumeration too large: product of (M - |K_i|) is " + product.str() +
                            ", guard is " + std::to_string(guard));
    }
    count_ = static_cast<std::uint64_t>(product);
    done_ = count_ == 0;
    cursor_.assign(choices_.size(), 0);
}

std::optional<std::vector<Index>> DemandEnumerator::next() {
    if (done_) {
        return std::nullopt;
    }
    std::vector<Index> d(choices_.size());
    for (std::size_t i = 0; i < d.size(); ++i) {
        d[i] = choices_[i][cursor_[i]];
    }
    // Odometer increment, last user fastest, so output is lexicographic.
    std::size_t i = cursor_.size();
    while (i > 0) {
        --i;
        if (++cursor_[i] < choices_[i].size()) {
            break;
        }
        cursor_[i] = 0;
        if (i == 0) {
            done_ = true;
        }
    }
    if (cursor_.empty()) {
        done_ = true;
    }
    return d;
}

std::vector<std::vector<Index>> enumerate_demands(std::span<const IndexSet> side_info, std::size_t num_messages,
                                                  std::uint64_t guard) {
    DemandEnumerator e(side_info, num_messages, guard);
    std::vector<std::vector<Index>> out;
    out.reserve(e.count());
    while (auto d = e.next()) {
        out.push_back(std::move(*d));
    }
    return out;
}

} // namespace eicp::model
