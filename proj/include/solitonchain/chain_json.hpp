#pragma once

#include "solitonchain/chain.hpp"

#include <json.hpp>

#include <string>
#include <string_view>

namespace solitonchain {

/// Fields: n_sites, couplings, onsite, site_a, site_b (null when absent), site_c.
void to_json(nlohmann::json &j, const ChainSpec &spec);

/// Rejects missing or unknown fields and validates the result.
void from_json(const nlohmann::json &j, ChainSpec &spec);

std::string chain_to_json(const ChainSpec &spec);
ChainSpec   chain_from_json(std::string_view text);

} // namespace solitonchain
