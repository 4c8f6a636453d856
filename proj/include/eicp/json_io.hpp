#pragma once

// JSON views of results. Indices are written 1-based.

#include "eicp/codes.hpp"
#include "eicp/covers.hpp"
#include "eicp/graphs.hpp"
#include "eicp/minrank.hpp"
#include "eicp/model.hpp"

#include <json.hpp>

namespace eicp::json_io {

using nlohmann::json;

[[nodiscard]] json to_json(const gf::GfVector& v);
[[nodiscard]] json to_json(const model::ValidationReport& r);
[[nodiscard]] json to_json(const codes::EmbeddedIndexCode& code);
[[nodiscard]] json to_json(const codes::DecodeReport& r);
[[nodiscard]] json to_json(const graphs::StructureWitness& w);
[[nodiscard]] json to_json(const minrank::MinrankResult& r);
[[nodiscard]] json to_json(const minrank::OracleResult& r);
[[nodiscard]] json to_json(const minrank::ComplexityReport& r);
[[nodiscard]] json to_json(const covers::CoverPlan& p);

} // namespace eicp::json_io
