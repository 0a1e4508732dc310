#include "solitonchain/chain_json.hpp"

#include "solitonchain/error.hpp"

#include <array>

namespace solitonchain {

void to_json(nlohmann::json &j, const ChainSpec &spec) {
    j = nlohmann::json{
        {"n_sites", spec.n_sites},
        {"couplings", spec.couplings},
        {"onsite", spec.onsite},
        {"site_a", spec.site_a},
        {"site_b", spec.site_b ? nlohmann::json(*spec.site_b) : nlohmann::json(nullptr)},
        {"site_c", spec.site_c},
    };
}

void from_json(const nlohmann::json &j, ChainSpec &spec) {
    static constexpr std::array<const char *, 6> fields{"n_sites", "couplings", "onsite", "site_a", "site_b", "site_c"};
    if(!j.is_object()) throw ParameterError("chain spec: expected a JSON object");
    for(const auto &[key, value] : j.items()) {
        bool known = false;
        for(const char *f : fields) known = known || key == f;
        if(!known) throw ParameterError("chain spec: unknown field '" + key + "'");
    }
    try {
        ChainSpec out;
        out.n_sites   = j.at("n_sites").get<std::size_t>();
        out.couplings = j.at("couplings").get<std::vector<double>>();
        out.onsite    = j.at("onsite").get<std::vector<double>>();
        out.site_a    = j.at("site_a").get<std::size_t>();
        if(j.contains("site_b") && !j.at("site_b").is_null()) out.site_b = j.at("site_b").get<std::size_t>();
        out.site_c = j.at("site_c").get<std::size_t>();
        out.validate();
        spec = std::move(out);
    } catch(const nlohmann::json::exception &e) {
        throw ParameterError(std::string("chain spec: ") + e.what());
    }
}

std::string chain_to_json(const ChainSpec &spec) { return nlohmann::json(spec).dump(2); }

ChainSpec chain_from_json(std::string_view text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch(const nlohmann::json::parse_error &e) {
        throw ParameterError(std::string("chain spec: ") + e.what());
    }
    return j.get<ChainSpec>();
}

} // namespace solitonchain
