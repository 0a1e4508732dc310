#include "solitonchain/cli.hpp"

#include "solitonchain/analytic.hpp"
#include "solitonchain/chain_json.hpp"
#include "solitonchain/csv.hpp"
#include "solitonchain/disorder.hpp"
#include "solitonchain/protocols.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <ostream>
#include <set>
#include <sstream>

namespace solitonchain::cli {

namespace {

using json = nlohmann::json;

constexpr std::uint64_t default_seed = 20170401;

void reject_unknown(const json &obj, const std::set<std::string> &allowed, const std::string &where) {
    if(!obj.is_object()) throw ConfigError(where + ": expected an object");
    for(const auto &[key, value] : obj.items())
        if(!allowed.contains(key)) throw ConfigError(where + (where.empty() ? "" : ".") + key + ": unknown key");
}

double number_field(const json &obj, const std::string &key, const std::string &path, double fallback) {
    if(!obj.contains(key)) return fallback;
    const auto &v = obj.at(key);
    if(!v.is_number()) throw ConfigError(path + "." + key + ": expected a number");
    const double x = v.get<double>();
    if(!std::isfinite(x)) throw ConfigError(path + "." + key + ": must be finite");
    return x;
}

std::uint64_t count_field(const json &obj, const std::string &key, const std::string &path, std::uint64_t fallback) {
    if(!obj.contains(key)) return fallback;
    const auto &v = obj.at(key);
    if(!v.is_number_unsigned() && !(v.is_number_integer() && v.get<long long>() >= 0))
        throw ConfigError(path + "." + key + ": expected a non-negative integer");
    return v.get<std::uint64_t>();
}

std::string string_field(const json &obj, const std::string &key, const std::string &path, const std::string &fallback) {
    if(!obj.contains(key)) return fallback;
    if(!obj.at(key).is_string()) throw ConfigError(path + "." + key + ": expected a string");
    return obj.at(key).get<std::string>();
}

std::vector<double> list_field(const json &obj, const std::string &key, const std::string &path, std::vector<double> fallback) {
    if(!obj.contains(key)) return fallback;
    const auto &v = obj.at(key);
    if(!v.is_array() || v.empty()) throw ConfigError(path + "." + key + ": expected a non-empty list of numbers");
    std::vector<double> out;
    for(const auto &x : v) {
        if(!x.is_number()) throw ConfigError(path + "." + key + ": expected a non-empty list of numbers");
        out.push_back(x.get<double>());
    }
    return out;
}

void require(bool ok, const std::string &message) {
    if(!ok) throw ConfigError(message);
}

json resolve_chain(const json &user, const std::string &experiment) {
    const json chain = user.value("chain", json::object());
    reject_unknown(chain, {"builder", "big_delta", "delta", "extension_m", "spec"}, "chain");
    json out;
    const std::string builder = string_field(chain, "builder", "chain", experiment == "storage" ? "storage" : "abc");
    require(builder == "abc" || builder == "storage" || builder == "custom", "chain.builder: expected abc, storage or custom");
    require(experiment != "trimer-oracle" || builder != "custom", "chain.builder: trimer-oracle needs abc or storage parameters");
    out["builder"] = builder;
    if(builder == "custom") {
        require(chain.contains("spec"), "chain.spec: required for the custom builder");
        require(!chain.contains("big_delta") && !chain.contains("delta") && !chain.contains("extension_m"),
                "chain: custom builder takes only 'spec'");
        try {
            out["spec"] = chain.at("spec").get<ChainSpec>();
        } catch(const ParameterError &e) {
            throw ConfigError(std::string("chain.spec: ") + e.what());
        }
        return out;
    }
    require(!chain.contains("spec"), "chain.spec: only valid with the custom builder");
    out["big_delta"] = number_field(chain, "big_delta", "chain", 1.0);
    out["delta"]     = number_field(chain, "delta", "chain", 0.1);
    require(out["delta"].get<double>() > 0.0 && out["delta"].get<double>() < out["big_delta"].get<double>(),
            "chain.delta: need 0 < delta < big_delta");
    if(builder == "abc") {
        out["extension_m"] = count_field(chain, "extension_m", "chain", 0);
        require(out["extension_m"].get<std::uint64_t>() <= 13, "chain.extension_m: at most 13");
    } else {
        require(!chain.contains("extension_m"), "chain.extension_m: only valid with the abc builder");
    }
    return out;
}

ChainSpec chain_from_resolved(const json &chain) {
    const std::string builder = chain.at("builder").get<std::string>();
    if(builder == "custom") return chain.at("spec").get<ChainSpec>();
    const double delta = chain.at("delta").get<double>(), big = chain.at("big_delta").get<double>();
    if(builder == "storage") return build_storage_chain(delta, big);
    return build_abc_chain(chain.at("extension_m").get<std::size_t>(), delta, big);
}

json resolve_params(const json &user, const std::string &experiment) {
    const json p = user.value("params", json::object());
    const std::string path = "params";
    json out;
    auto positive = [&](const char *key, double fallback) {
        const double v = number_field(p, key, path, fallback);
        require(v > 0.0, path + "." + key + ": must be > 0");
        out[key] = v;
    };
    auto kind = [&](const char *fallback) {
        const std::string k = string_field(p, "kind", path, fallback);
        require(k == "diagonal" || k == "offdiagonal" || k == "both", "params.kind: expected diagonal, offdiagonal or both");
        out["kind"] = k;
    };
    auto realizations = [&](std::uint64_t fallback) {
        out["n_realizations"] = count_field(p, "n_realizations", path, fallback);
        require(out["n_realizations"].get<std::uint64_t>() >= 1, "params.n_realizations: must be >= 1");
    };

    if(experiment == "dynamics") {
        reject_unknown(p, {"t_max", "dt"}, path);
        if(p.contains("t_max")) positive("t_max", 0.0);
        positive("dt", 0.25);
    } else if(experiment == "disorder-sweep") {
        reject_unknown(p, {"kind", "levels", "n_realizations", "window", "dt"}, path);
        kind("offdiagonal");
        out["levels"] = list_field(p, "levels", path, {0.0, 0.05, 0.1, 0.2, 0.3, 0.4, 0.5});
        for(double e : out["levels"].get<std::vector<double>>()) require(std::isfinite(e) && e >= 0.0, "params.levels: entries must be >= 0");
        realizations(200);
        positive("window", 500.0);
        positive("dt", 0.25);
    } else if(experiment == "async-sweep") {
        reject_unknown(p, {"delays"}, path);
        std::vector<double> fallback;
        for(int k = 0; k <= 20; ++k) fallback.push_back(0.025 * k);
        out["delays"] = list_field(p, "delays", path, fallback);
        for(double f : out["delays"].get<std::vector<double>>()) require(f >= 0.0 && f <= 0.5, "params.delays: entries must be in [0, 0.5]");
    } else if(experiment == "storage") {
        reject_unknown(p, {"t_max_after", "dt"}, path);
        positive("t_max_after", 500.0);
        positive("dt", 0.25);
    } else if(experiment == "spectrum") {
        reject_unknown(p, {"kind", "level", "n_realizations"}, path);
        kind("offdiagonal");
        out["level"] = number_field(p, "level", path, 1.0);
        require(out["level"].get<double>() >= 0.0, "params.level: must be >= 0");
        realizations(100);
    } else if(experiment == "trimer-oracle") {
        reject_unknown(p, {"eta", "t_max", "dt"}, path);
        if(p.contains("eta")) positive("eta", 0.0);
        if(p.contains("t_max")) positive("t_max", 0.0);
        positive("dt", 0.25);
    }
    return out;
}

std::string dump_csv(const auto &writer) {
    std::ostringstream s;
    writer(s);
    return s.str();
}

} // namespace

const std::vector<std::string> &experiments() {
    static const std::vector<std::string> names{"dynamics", "disorder-sweep", "async-sweep", "storage", "spectrum", "trimer-oracle"};
    return names;
}

void apply_override(json &config, std::string_view assignment) {
    const auto eq = assignment.find('=');
    if(eq == std::string_view::npos || eq == 0) throw ConfigError("override '" + std::string(assignment) + "': expected key=value");
    const std::string key(assignment.substr(0, eq));
    const std::string raw(assignment.substr(eq + 1));
    json value;
    try {
        value = json::parse(raw);
    } catch(const json::parse_error &) {
        value = raw;
    }
    if(!config.is_object()) config = json::object();
    json       *node = &config;
    std::size_t start = 0;
    while(true) {
        const auto        dot  = key.find('.', start);
        const std::string part = key.substr(start, dot == std::string::npos ? std::string::npos : dot - start);
        if(part.empty()) throw ConfigError("override '" + key + "': empty path component");
        if(dot == std::string::npos) {
            (*node)[part] = value;
            return;
        }
        json &child = (*node)[part];
        if(child.is_null()) child = json::object();
        if(!child.is_object()) throw ConfigError("override '" + key + "': " + part + " is not an object");
        node  = &child;
        start = dot + 1;
    }
}

json resolve_config(const json &input) {
    json user = input;
    if(user.is_object() && user.contains("config") && !user.contains("experiment")) user = user.at("config");
    reject_unknown(user, {"experiment", "chain", "params", "base_seed", "output"}, "");
    require(user.contains("experiment") && user.at("experiment").is_string(), "experiment: required");
    const std::string experiment = user.at("experiment").get<std::string>();
    const auto       &names      = experiments();
    require(std::find(names.begin(), names.end(), experiment) != names.end(), "experiment: unknown experiment '" + experiment + "'");

    json out;
    out["experiment"] = experiment;
    out["chain"]      = resolve_chain(user, experiment);
    require(experiment != "storage" || out["chain"]["builder"] == "storage", "chain.builder: the storage experiment needs the storage chain");
    out["params"]    = resolve_params(user, experiment);
    out["base_seed"] = count_field(user, "base_seed", "", default_seed);
    out["output"]    = string_field(user, "output", "", "out");
    require(!out["output"].get<std::string>().empty(), "output: must not be empty");
    return out;
}

Artifacts execute(const json &resolved, unsigned threads) {
    const std::string experiment = resolved.at("experiment").get<std::string>();
    const json       &p          = resolved.at("params");
    const auto        seed       = resolved.at("base_seed").get<std::uint64_t>();

    const ChainSpec spec = chain_from_resolved(resolved.at("chain"));
    const double    t_m  = nominal_mirroring_time(spec);
    double          eta  = std::numbers::pi / (std::numbers::sqrt2 * t_m);

    Artifacts art;
    json      derived;
    if(experiment == "dynamics") {
        const double t_max = p.contains("t_max") ? p.at("t_max").get<double>() : 2.2 * t_m;
        derived["t_max"]   = t_max;
        auto trace         = run_entangling(spec, t_max, p.at("dt").get<double>(), t_m);
        art.files.emplace_back("dynamics.csv", dump_csv([&](std::ostream &o) { csv::write_trace(o, trace); }));
    } else if(experiment == "disorder-sweep") {
        DisorderConfig cfg;
        cfg.kind           = parse_disorder_kind(p.at("kind").get<std::string>());
        cfg.levels         = p.at("levels").get<std::vector<double>>();
        cfg.n_realizations = p.at("n_realizations").get<std::size_t>();
        cfg.window         = p.at("window").get<double>();
        cfg.dt             = p.at("dt").get<double>();
        cfg.base_seed      = seed;
        cfg.threads        = threads;
        cfg.mirroring_time = t_m;
        auto [s1, s2]      = run_scenarios(spec, cfg);
        art.files.emplace_back("disorder.csv", dump_csv([&](std::ostream &o) { csv::write_ensemble(o, {s1, s2}); }));
    } else if(experiment == "async-sweep") {
        auto points = run_async_sweep(spec, p.at("delays").get<std::vector<double>>(), t_m);
        art.files.emplace_back("async.csv", dump_csv([&](std::ostream &o) { csv::write_async(o, points); }));
    } else if(experiment == "storage") {
        auto trace = run_storage(spec, p.at("t_max_after").get<double>(), p.at("dt").get<double>(), t_m);
        auto modes = localized_mode_report(sub_chain(decouple_site(spec, *spec.site_b), 0, *spec.site_b - 1));
        derived["quench_index"] = *trace.quench_index;
        art.files.emplace_back("storage.csv", dump_csv([&](std::ostream &o) { csv::write_trace(o, trace); }));
        art.files.emplace_back("modes.csv", dump_csv([&](std::ostream &o) { csv::write_modes(o, modes); }));
    } else if(experiment == "spectrum") {
        auto stats = spectrum_statistics(spec, parse_disorder_kind(p.at("kind").get<std::string>()), p.at("level").get<double>(),
                                         p.at("n_realizations").get<std::size_t>(), seed, threads);
        derived["zero_count"] = stats.zero_count;
        art.files.emplace_back("spectrum.csv", dump_csv([&](std::ostream &o) { csv::write_spectrum(o, stats); }));
    } else if(experiment == "trimer-oracle") {
        const json &chain = resolved.at("chain");
        eta               = p.contains("eta") ? p.at("eta").get<double>()
                                              : analytic::effective_eta(chain.at("big_delta").get<double>(), chain.at("delta").get<double>());
        const double tm_trimer = analytic::mirroring_time(eta);
        const double t_max     = p.contains("t_max") ? p.at("t_max").get<double>() : 2.0 * tm_trimer;
        derived["t_max"]       = t_max;
        derived["trimer_mirroring_time"] = tm_trimer;
        auto trace = run_entangling(build_trimer_chain(eta), t_max, p.at("dt").get<double>(), tm_trimer);
        std::ostringstream o;
        o << "t,eof_analytic,eof_numeric\n";
        for(std::size_t i = 0; i < trace.t.size(); ++i)
            o << csv::number(trace.t[i]) << ',' << csv::number(analytic::analytic_eof_profile(eta, trace.t[i])) << ','
              << csv::number(trace.eof[i]) << '\n';
        art.files.emplace_back("trimer.csv", o.str());
    }

    derived["eta"]            = eta;
    derived["mirroring_time"] = t_m;
    json manifest;
    manifest["software"] = {{"name", "solitonchain"}, {"version", std::string(version)}};
    manifest["config"]   = resolved;
    manifest["seed"]     = seed;
    manifest["derived"]  = derived;
    manifest["chain"]    = spec;
    json files           = json::array();
    for(const auto &[name, _] : art.files) files.push_back(name);
    manifest["outputs"] = files;
    art.files.emplace_back("manifest.json", manifest.dump(2) + "\n");
    return art;
}

unsigned threads_from_env() {
    const char *raw = std::getenv("SOLITONCHAIN_THREADS");
    if(raw == nullptr || *raw == '\0') return 0;
    try {
        std::size_t used = 0;
        const long  v    = std::stol(raw, &used);
        if(used != std::string_view(raw).size() || v < 0) throw std::invalid_argument("negative");
        return static_cast<unsigned>(v);
    } catch(const std::exception &) {
        throw ConfigError(std::string("SOLITONCHAIN_THREADS: expected a non-negative integer, got '") + raw + "'");
    }
}

int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err) {
    CLI::App app{"Entanglement generation and storage in dimerized spin chains", "solitonchain"};
    app.require_subcommand(1);
    std::string                config_path, out_dir;
    std::optional<std::uint64_t> seed;
    std::vector<std::string>   overrides;
    auto add_common = [&](CLI::App *sub) {
        sub->add_option("--config", config_path, "JSON config or a previous manifest");
        sub->add_option("--seed", seed, "Base seed for disorder ensembles");
        sub->add_option("--out", out_dir, "Output directory");
        sub->add_option("overrides", overrides, "key=value overrides on dot-paths, e.g. params.dt=0.1");
    };
    for(const auto &name : experiments()) add_common(app.add_subcommand(name, "Run the " + name + " experiment"));
    add_common(app.add_subcommand("run", "Run the experiment named in the config file"));

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch(const CLI::CallForHelp &) {
        out << (app.get_subcommands().empty() ? app.help() : app.get_subcommands().front()->help());
        return exit_ok;
    } catch(const CLI::ParseError &e) {
        err << "solitonchain: " << e.what() << "\n";
        return exit_config;
    }
    const std::string command = app.get_subcommands().front()->get_name();

    json resolved;
    unsigned threads = 0;
    try {
        json user = json::object();
        if(!config_path.empty()) {
            std::ifstream in(config_path);
            if(!in) throw ConfigError("--config: cannot read '" + config_path + "'");
            try {
                user = json::parse(in);
            } catch(const json::parse_error &e) {
                throw ConfigError("--config: " + std::string(e.what()));
            }
            if(user.contains("config") && !user.contains("experiment")) user = user.at("config");
        }
        if(command != "run") {
            if(user.contains("experiment") && user.at("experiment") != command)
                throw ConfigError("experiment: config says '" + user.at("experiment").dump() + "' but the subcommand is '" + command + "'");
            user["experiment"] = command;
        }
        for(const auto &o : overrides) apply_override(user, o);
        if(seed) user["base_seed"] = *seed;
        if(!out_dir.empty()) user["output"] = out_dir;
        resolved = resolve_config(user);
        threads  = threads_from_env();
    } catch(const Error &e) {
        err << "solitonchain: config error: " << e.what() << "\n";
        return exit_config;
    } catch(const json::exception &e) {
        err << "solitonchain: config error: " << e.what() << "\n";
        return exit_config;
    }

    Artifacts art;
    try {
        art = execute(resolved, threads);
    } catch(const ParameterError &e) {
        err << "solitonchain: config error: " << e.what() << "\n";
        return exit_config;
    } catch(const Error &e) {
        err << "solitonchain: numerical failure: " << e.what() << "\n";
        return exit_numerical;
    }

    const std::filesystem::path dir = resolved.at("output").get<std::string>();
    std::error_code             ec;
    std::filesystem::create_directories(dir, ec);
    if(ec) {
        err << "solitonchain: output: cannot create '" << dir.string() << "': " << ec.message() << "\n";
        return exit_config;
    }
    for(const auto &[name, contents] : art.files) {
        std::ofstream f(dir / name, std::ios::binary | std::ios::trunc);
        f << contents;
        if(!f) {
            err << "solitonchain: output: cannot write '" << (dir / name).string() << "'\n";
            return exit_config;
        }
        out << (dir / name).string() << "\n";
    }
    return exit_ok;
}

} // namespace solitonchain::cli
