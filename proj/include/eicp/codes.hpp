#pragma once

// Scalar linear embedded index codes: transmissions, the M x l code matrix,
// the rank decodability test and explicit decoders.

#include "eicp/gf.hpp"
#include "eicp/model.hpp"

#include <cstddef>
#include <string>
#include <vector>

namespace eicp::codes {

using model::Index;

/// One broadcast symbol sum_m coeffs[m] x_m sent by `transmitter`.
struct Transmission {
    Index transmitter;
    gf::GfVector coeffs;

    friend bool operator==(const Transmission&, const Transmission&) = default;
};

struct EmbeddedIndexCode {
    std::vector<Transmission> transmissions;

    [[nodiscard]] std::size_t length() const noexcept { return transmissions.size(); }
    /// T_u, the distinct transmitters in ascending order.
    [[nodiscard]] std::vector<Index> transmitters() const;

    friend bool operator==(const EmbeddedIndexCode&, const EmbeddedIndexCode&) = default;
};

struct SupportViolation {
    std::size_t transmission;
    Index transmitter;
    std::vector<Index> outside;  // coefficients the transmitter cannot form
    bool zero = false;
};

struct DecodeReport {
    std::vector<bool> decodable;              // from the other users' transmissions
    std::vector<bool> decodable_all_columns;  // including the user's own
    bool own_columns_agree = true;
    std::vector<SupportViolation> support_violations;
    bool overall = false;
};

/// Throws DimensionMismatch if a transmitter or the coefficient length does
/// not fit the instance.
void check_shape(const EmbeddedIndexCode& code, const model::EicpInstance& inst);

/// M x l matrix whose j-th column is the j-th transmission. Throws
/// InvalidCode if some transmission uses a message outside its
/// transmitter's side information.
[[nodiscard]] gf::GfMatrix assemble_matrix(const EmbeddedIndexCode& code, const model::EicpInstance& inst);

/// e_{d_i} in colspan(L) + span{e_k : k in K_i}. With exclude_own the user's
/// own transmissions are dropped from L first.
[[nodiscard]] bool can_decode(const EmbeddedIndexCode& code, const model::EicpInstance& inst, Index user,
                              bool exclude_own = true);

[[nodiscard]] DecodeReport verify_code(const EmbeddedIndexCode& code, const model::EicpInstance& inst);

/// e_m for each distinct demanded m, sent by the smallest user holding m.
[[nodiscard]] EmbeddedIndexCode uncoded_scheme(const model::EicpInstance& inst);

/// sum_t combo[t] T_t - sum_k correction[k] x_{K_i[k]} = x_{d_i}. The user's
/// own transmissions get coefficient zero.
struct DecodeCoefficients {
    gf::GfVector combo;       // length l
    gf::GfVector correction;  // length |K_i|
};

/// Throws NotDecodable if the user cannot recover its demand.
[[nodiscard]] DecodeCoefficients decode_coeffs(const EmbeddedIndexCode& code, const model::EicpInstance& inst,
                                               Index user);

/// {"transmissions": [{"user": 2, "coeffs": [1,1,0,0]}, ...]}, 1-based users.
/// Throws ParseError.
[[nodiscard]] EmbeddedIndexCode parse_code(const std::string& text, gf::FieldOrder q);
[[nodiscard]] std::string serialize_code(const EmbeddedIndexCode& code);
[[nodiscard]] EmbeddedIndexCode load_code(const std::string& path, gf::FieldOrder q);

} // namespace eicp::codes
