#include "solitonchain/cli.hpp"
#include "solitonchain/csv.hpp"

#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

using namespace solitonchain;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path &p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
}

std::string first_line(const std::string &text) { return text.substr(0, text.find('\n')); }

std::size_t lines(const std::string &text) { return static_cast<std::size_t>(std::count(text.begin(), text.end(), '\n')); }

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() / ("solitonchain_test_" + std::to_string(std::rand()) + "_" + std::to_string(reinterpret_cast<std::uintptr_t>(this)));
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

int run(std::vector<std::string> args, std::string *err_text = nullptr) {
    std::ostringstream out, err;
    const int          rc = cli::run(args, out, err);
    if(err_text) *err_text = err.str();
    return rc;
}

} // namespace

TEST_CASE("number formatting") {
    CHECK(csv::number(0.0) == "0");
    CHECK(csv::number(0.25) == "0.25");
    CHECK(csv::number(1.0 / 3.0) == "0.333333333333");
    CHECK(csv::number(225.43043) == "225.43043");
    CHECK(csv::number(1e-20) == "1e-20");
    CHECK(csv::number(-2.5e7) == "-25000000");
}

TEST_CASE("CSV schemas") {
    ProtocolTrace trace;
    trace.t                = {0.0, 0.5};
    trace.fidelity_initial = {1.0, 0.9};
    trace.eof              = {0.0, 0.1};
    std::ostringstream a;
    csv::write_trace(a, trace);
    CHECK(a.str() == "t,fidelity_initial,eof\n0,1,0\n0.5,0.9,0.1\n");
    trace.fidelity_reference = {0.8, 0.7};
    std::ostringstream b;
    csv::write_trace(b, trace);
    CHECK(first_line(b.str()) == "t,fidelity_initial,fidelity_reference,eof");

    EnsembleStats e;
    e.scenario = 2;
    e.kind     = DisorderKind::diagonal;
    e.levels   = {LevelStats{0.5, 200, 0, 0.4, 0.1, 0.007}};
    std::ostringstream c;
    csv::write_ensemble(c, {e});
    CHECK(c.str() == "kind,level_E,n,mean_eof,std,sem,scenario\ndiagonal,0.5,200,0.4,0.1,0.007,2\n");

    std::ostringstream d;
    csv::write_async(d, {{0.1, 0.93}});
    CHECK(d.str() == "delay,eof\n0.1,0.93\n");

    SpectrumStats s;
    s.mean = {-1.0, 0.0};
    s.std  = {0.1, 0.0};
    std::ostringstream f;
    csv::write_spectrum(f, s);
    CHECK(f.str() == "index,mean_energy,std_energy\n0,-1,0.1\n1,0,0\n");

    ModeReport m;
    m.energies    = {0.0};
    m.occupations = {{0.5, 0.5}};
    std::ostringstream g;
    csv::write_modes(g, m);
    CHECK(g.str() == "mode,energy,occupation_0,occupation_1\n0,0,0.5,0.5\n");
}

TEST_CASE("config overrides and resolution") {
    nlohmann::json cfg = nlohmann::json::object();
    cli::apply_override(cfg, "experiment=dynamics");
    cli::apply_override(cfg, "chain.delta=0.05");
    cli::apply_override(cfg, "params.dt=0.5");
    CHECK(cfg["experiment"] == "dynamics");
    CHECK(cfg["chain"]["delta"] == 0.05);
    const auto r = cli::resolve_config(cfg);
    CHECK(r["chain"]["big_delta"] == 1.0);
    CHECK(r["chain"]["extension_m"] == 0);
    CHECK(r["params"]["dt"] == 0.5);
    CHECK(r["base_seed"] == 20170401);
    CHECK(cli::resolve_config(r) == r);
    CHECK(cli::resolve_config({{"config", r}}) == r);

    CHECK_THROWS_AS(cli::apply_override(cfg, "novalue"), cli::ConfigError);
    CHECK_THROWS_AS(cli::apply_override(cfg, "chain..x=1"), cli::ConfigError);
    auto bad = cfg;
    cli::apply_override(bad, "chain.dleta=0.1");
    CHECK_THROWS_WITH_AS(cli::resolve_config(bad), doctest::Contains("chain.dleta"), cli::ConfigError);
    bad = cfg;
    cli::apply_override(bad, "params.dt=fast");
    CHECK_THROWS_WITH_AS(cli::resolve_config(bad), doctest::Contains("params.dt"), cli::ConfigError);
    bad = cfg;
    cli::apply_override(bad, "experiment=teleport");
    CHECK_THROWS_AS(cli::resolve_config(bad), cli::ConfigError);

    const auto d = cli::resolve_config({{"experiment", "disorder-sweep"}});
    CHECK(d["params"]["levels"].size() == 7);
    CHECK(d["params"]["n_realizations"] == 200);
    CHECK(d["params"]["kind"] == "offdiagonal");
    CHECK(cli::resolve_config({{"experiment", "storage"}})["chain"]["builder"] == "storage");
}

TEST_CASE("command line runs") {
    TempDir tmp;
    const auto out = tmp.path / "dyn";
    REQUIRE(run({"dynamics", "--out", out.string(), "params.dt=2"}) == cli::exit_ok);
    const std::string dyn = slurp(out / "dynamics.csv");
    CHECK(first_line(dyn) == "t,fidelity_initial,eof");
    const auto manifest = nlohmann::json::parse(slurp(out / "manifest.json"));
    CHECK(manifest["derived"]["mirroring_time"].get<double>() == doctest::Approx(225.43).epsilon(1e-4));
    CHECK(std::abs(manifest["derived"]["eta"].get<double>() - 0.0098542) <= 5e-8);
    CHECK(manifest["seed"] == 20170401);
    CHECK(manifest["software"]["version"] == std::string(cli::version));

    // Re-running the manifest reproduces the data byte for byte.
    const std::string before = slurp(out / "manifest.json");
    REQUIRE(run({"run", "--config", (out / "manifest.json").string()}) == cli::exit_ok);
    CHECK(slurp(out / "dynamics.csv") == dyn);
    CHECK(slurp(out / "manifest.json") == before);
    const auto copy = tmp.path / "copy";
    REQUIRE(run({"run", "--config", (out / "manifest.json").string(), "--out", copy.string()}) == cli::exit_ok);
    CHECK(slurp(copy / "dynamics.csv") == dyn);

    const auto spec = tmp.path / "spec";
    REQUIRE(run({"spectrum", "--out", spec.string(), "params.n_realizations=20"}) == cli::exit_ok);
    const std::string sp = slurp(spec / "spectrum.csv");
    CHECK(lines(sp) == 29);
    std::istringstream rows(sp);
    std::string        row;
    std::getline(rows, row);
    int zeros = 0;
    while(std::getline(rows, row)) {
        const auto a = row.find(','), b = row.find(',', a + 1);
        if(std::abs(std::stod(row.substr(a + 1, b - a - 1))) < 1e-10) ++zeros;
    }
    CHECK(zeros == 4);

    const auto st = tmp.path / "storage";
    REQUIRE(run({"storage", "--out", st.string(), "params.t_max_after=10", "params.dt=1"}) == cli::exit_ok);
    CHECK(first_line(slurp(st / "storage.csv")) == "t,fidelity_initial,fidelity_reference,eof");
    CHECK(first_line(slurp(st / "modes.csv")) == "mode,energy,occupation_0,occupation_1,occupation_2,occupation_3,occupation_4");

    const auto as = tmp.path / "async";
    REQUIRE(run({"async-sweep", "--out", as.string(), "params.delays=[0,0.1]"}) == cli::exit_ok);
    CHECK(lines(slurp(as / "async.csv")) == 3);

    const auto tr = tmp.path / "trimer";
    REQUIRE(run({"trimer-oracle", "--out", tr.string(), "params.eta=0.1", "params.dt=1"}) == cli::exit_ok);
    CHECK(first_line(slurp(tr / "trimer.csv")) == "t,eof_analytic,eof_numeric");

    const auto ds = tmp.path / "sweep";
    REQUIRE(run({"disorder-sweep", "--out", ds.string(), "--seed", "5", "params.levels=[0.1]", "params.n_realizations=3",
                 "params.window=50", "params.dt=1"}) == cli::exit_ok);
    CHECK(lines(slurp(ds / "disorder.csv")) == 3);
    CHECK(nlohmann::json::parse(slurp(ds / "manifest.json"))["seed"] == 5);
}

TEST_CASE("command line failures") {
    TempDir     tmp;
    std::string err;
    const auto  out = tmp.path / "bad";
    CHECK(run({"dynamics", "--out", out.string(), "params.stepsize=1"}, &err) == cli::exit_config);
    CHECK(err.find("params.stepsize") != std::string::npos);
    CHECK(!fs::exists(out));

    CHECK(run({"dynamics", "--out", out.string(), "--config", (tmp.path / "missing.json").string()}) == cli::exit_config);
    std::ofstream(tmp.path / "broken.json") << "{ not json";
    CHECK(run({"run", "--config", (tmp.path / "broken.json").string()}) == cli::exit_config);
    std::ofstream(tmp.path / "other.json") << R"({"experiment": "storage"})";
    CHECK(run({"dynamics", "--config", (tmp.path / "other.json").string()}) == cli::exit_config);
    CHECK(run({"dynamics", "--seed", "minus"}) == cli::exit_config);
    CHECK(run({"teleport"}) == cli::exit_config);
    CHECK(run({}) == cli::exit_config);
    CHECK(run({"async-sweep", "--out", out.string(), "params.delays=[0.7]"}) == cli::exit_config);
    CHECK(!fs::exists(out));

    // A chain without hopping has no mirroring time.
    const std::string custom =
        R"(chain={"builder":"custom","spec":{"n_sites":3,"couplings":[0,0],"onsite":[0,0,0],"site_a":0,"site_b":1,"site_c":2}})";
    CHECK(run({"dynamics", "--out", out.string(), custom}, &err) == cli::exit_numerical);
    CHECK(!fs::exists(out));
}

TEST_CASE("worker count from the environment") {
    ::setenv("SOLITONCHAIN_THREADS", "3", 1);
    CHECK(cli::threads_from_env() == 3);
    ::setenv("SOLITONCHAIN_THREADS", "lots", 1);
    CHECK_THROWS_AS(cli::threads_from_env(), cli::ConfigError);
    ::unsetenv("SOLITONCHAIN_THREADS");
    CHECK(cli::threads_from_env() == 0);
}

TEST_CASE("executable exit codes") {
    TempDir           tmp;
    const std::string exe  = SOLITONCHAIN_CLI_PATH;
    const std::string quiet = " > /dev/null 2>&1";
    auto status = [](int raw) { return WEXITSTATUS(raw); };
    CHECK(status(std::system((exe + " dynamics params.dt=5 --out " + (tmp.path / "ok").string() + quiet).c_str())) == 0);
    CHECK(status(std::system((exe + " dynamics params.oops=1 --out " + (tmp.path / "no").string() + quiet).c_str())) == 2);
    CHECK(status(std::system((exe + " --help" + quiet).c_str())) == 0);
    CHECK(fs::exists(tmp.path / "ok" / "manifest.json"));
    CHECK(!fs::exists(tmp.path / "no"));
}
