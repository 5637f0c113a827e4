#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "dirac_ps/cli.hpp"
#include "dirac_ps/error.hpp"

using namespace dirac_ps;
using namespace dirac_ps::cli;
using nlohmann::json;

namespace {

struct Outcome {
    int code = 0;
    std::string out;
    std::string err;
};

Outcome invoke(std::vector<std::string> args) {
    args.insert(args.begin(), "dirac-ps");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = main_entry(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

RunConfig parsed(std::vector<std::string> args) {
    args.insert(args.begin(), "dirac-ps");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream sink;
    auto cfg = parse_args(static_cast<int>(argv.size()), argv.data(), sink);
    REQUIRE(cfg.has_value());
    return *cfg;
}

double as_double(const Cell& c) {
    if (const auto* d = std::get_if<double>(&c)) return *d;
    return static_cast<double>(std::get<long long>(c));
}

long long as_int(const Cell& c) { return std::get<long long>(c); }

std::vector<std::string> lines(const std::string& s) {
    std::vector<std::string> out;
    std::istringstream in(s);
    for (std::string l; std::getline(in, l);) out.push_back(l);
    return out;
}

} // namespace

TEST_CASE("spectrum table") {
    RunConfig cfg;
    cfg.n_max = 3;
    cfg.k_max = 3;
    cfg.ntilde_max = 2;
    const auto rep = run_spectrum(cfg);
    REQUIRE(rep.table.columns.size() == 8);
    CHECK(rep.table.rows.size() == 4 * 4 * 3);
    std::map<std::pair<long long, long long>, double> level;
    long long prevN = 0;
    for (const auto& row : rep.table.rows) {
        const long long n = as_int(row[0]), k = as_int(row[1]), N = as_int(row[2]), nt = as_int(row[3]);
        CHECK(N == 2 * (n + k) + 1);
        CHECK(N >= prevN);
        prevN = N;
        const double E = as_double(row[5]);
        auto [it, fresh] = level.try_emplace({N, nt}, E);
        if (!fresh) CHECK(E == doctest::Approx(it->second).epsilon(1e-15));
    }
}

TEST_CASE("zero coupling gives free energies") {
    RunConfig cfg;
    cfg.params.omega = 0.0;
    cfg.params.m = 1.7;
    cfg.ntilde_max = 3;
    for (const auto& row : run_spectrum(cfg).table.rows) {
        const double kappa = as_double(row[4]);
        CHECK(as_double(row[5]) == doctest::Approx(std::hypot(1.7, kappa)).epsilon(1e-15));
    }
}

TEST_CASE("argument parsing") {
    auto cfg = parsed({"spectrum", "--mass", "2", "--current", "0.25", "--ntilde", "1:3", "--format", "json"});
    CHECK(cfg.params.m == 2.0);
    CHECK(cfg.effective_params().omega == 0.5);
    CHECK(cfg.ntilde_min == 1);
    CHECK(cfg.ntilde_max == 3);
    CHECK(cfg.format == Format::json);

    cfg = parsed({"verify", "--tol", "annihilation=1e-9", "--seed", "5"});
    CHECK(cfg.command == Command::verify);
    CHECK(cfg.tolerances.at("annihilation") == 1e-9);
    CHECK(cfg.seed == 5);

    cfg = parsed({"--k-max", "4", "oracle", "--potential", "inverse-radius:0.5", "--grid-h", "0.02"});
    CHECK(cfg.k_max == 4);
    CHECK(cfg.potential == "inverse-radius:0.5");
    CHECK(cfg.grid_h == 0.02);

    const std::string path = "dirac_ps_test_config.ini";
    {
        std::ofstream f(path);
        f << "mass=3\nn-max=1\n";
    }
    cfg = parsed({"spectrum", "--config", path});
    CHECK(cfg.params.m == 3.0);
    CHECK(cfg.n_max == 1);
    std::remove(path.c_str());

    std::ostringstream sink;
    const char* help[] = {"dirac-ps", "--help"};
    CHECK_FALSE(parse_args(2, help, sink).has_value());
    CHECK(sink.str().find("spectrum") != std::string::npos);
}

TEST_CASE("exit codes") {
    CHECK(invoke({"spectrum"}).code == kOk);
    CHECK(invoke({"spectrum", "--mass", "-1"}).code == kConfigError);
    CHECK(invoke({"spectrum", "--mass", "-1"}).err.find("m > 0") != std::string::npos);
    CHECK(invoke({"spectrum", "--n-max", "-1"}).code == kConfigError);
    CHECK(invoke({"nonsense"}).code == kConfigError);
    CHECK(invoke({"spectrum", "--potential", "cubic"}).code == kConfigError);
    CHECK(invoke({"verify", "--tol", "nothing=1"}).code == kConfigError);
    CHECK(invoke({"spectrum", "--out", "/nonexistent-dir/x.csv"}).code == kConfigError);
    CHECK(invoke({"verify", "--tol", "annihilation=-1"}).code == kVerificationFailed);
}

TEST_CASE("deterministic output") {
    for (const auto& cmd : std::vector<std::vector<std::string>>{
             {"spectrum", "--ntilde", "0:2"},
             {"wavefunction", "--n-max", "1", "--k-max", "1", "--format", "json"},
             {"fields"},
             {"verify", "--format", "json"}}) {
        const auto a = invoke(cmd);
        const auto b = invoke(cmd);
        CHECK(a.code == kOk);
        CHECK(a.out == b.out);
        CHECK_FALSE(a.out.empty());
    }
}

TEST_CASE("csv header contract") {
    auto spectrum = lines(invoke({"spectrum"}).out);
    CHECK(spectrum.front() == "n,k,N,Ntilde,kappa,E_relativistic,E_quasirel,E_nonrel_shifted");
    CHECK(spectrum.size() == 1 + 9);
    CHECK(lines(invoke({"verify"}).out).front() == "name,passed,measured,tolerance,detail");
    CHECK(lines(invoke({"oracle", "--k-max", "0", "--n-max", "0"}).out).front() ==
          "k,level,eigenvalue,target,deviation,bound");
    CHECK(lines(invoke({"wavefunction", "--n-max", "0", "--k-max", "0"}).out).front() ==
          "n,k,Ntilde,r,rho,c1,c2,c3,c4,density");
    CHECK(invoke({"spectrum"}).out.find('\r') == std::string::npos);
}

TEST_CASE("json output") {
    const auto res = invoke({"spectrum", "--format", "json", "--omega", "0.3"});
    REQUIRE(res.code == kOk);
    const auto doc = json::parse(res.out);
    CHECK(doc["meta"]["program"] == "dirac-ps");
    CHECK(doc["meta"]["command"] == "spectrum");
    CHECK(doc["meta"]["config"]["omega"] == 0.3);
    CHECK(doc["rows"].size() == 9);
    CHECK(doc["checks"].empty());
    // 17 significant digits
    CHECK(res.out.find("0.29999999999999999") != std::string::npos);

    if (const char* schema_path = std::getenv("DIRAC_PS_SCHEMA")) {
        std::ifstream f(schema_path);
        REQUIRE(f.good());
        const auto schema = json::parse(f);
        for (const auto& key : schema["required"]) CHECK(doc.contains(key.get<std::string>()));
        for (const auto& key : schema["properties"]["meta"]["required"]) CHECK(doc["meta"].contains(key.get<std::string>()));
        for (const auto& key : schema["properties"]["meta"]["properties"]["config"]["required"])
            CHECK(doc["meta"]["config"].contains(key.get<std::string>()));
    }
}

TEST_CASE("verify report") {
    RunConfig cfg;
    cfg.command = Command::verify;
    const auto rep = run_verify(cfg);
    CHECK(rep.all_passed());
    std::set<std::string> names;
    for (const auto& c : rep.checks) {
        names.insert(c.name);
        CHECK_MESSAGE(c.passed, c.name << ": " << c.detail);
    }
    for (const char* expected : {"eigen_residual", "annihilation", "factorization", "oracle_equivalence",
                                 "dirac_residual", "clifford", "field_invariants"})
        CHECK(names.count(expected) == 1);
    for (const auto& c : rep.checks) {
        if (c.name == "oracle_equivalence" || c.name == "dirac_residual") CHECK_FALSE(c.metrics.empty());
    }
}

TEST_CASE("mutated superpotential is caught") {
    RunConfig cfg;
    cfg.command = Command::verify;
    verify::VerifyOptions opts;
    opts.operators = [](int k) {
        auto ops = susy::SectorOperators::for_sector(k);
        ops.w_offdiag = -ops.w_offdiag;
        return ops;
    };
    const auto rep = run_verify(cfg, opts);
    CHECK_FALSE(rep.all_passed());
    for (const auto& c : rep.checks)
        if (c.name == "annihilation") CHECK_FALSE(c.passed);
}

TEST_CASE("oracle notes") {
    RunConfig cfg;
    cfg.command = Command::oracle;
    cfg.k_max = 1;
    cfg.n_max = 1;
    const auto rep = run_oracle(cfg);
    for (const auto& row : rep.table.rows) CHECK(std::abs(as_double(row[4])) < 5e-3);

    cfg.potential = "none";
    const auto free = run_oracle(cfg);
    for (const auto& row : free.table.rows) CHECK(std::get<bool>(row[5]) == false);
    REQUIRE_FALSE(free.notes.empty());
    CHECK(free.notes.front().find("no bound states") != std::string::npos);

    cfg.potential = "inverse-radius:0.5";
    const auto explore = run_oracle(cfg);
    bool noted = false;
    for (const auto& n : explore.notes) noted = noted || n.find("no analytic targets") != std::string::npos;
    CHECK(noted);
    for (const auto& row : explore.table.rows) CHECK(std::holds_alternative<std::monostate>(row[3]));
}

TEST_CASE("format_double") {
    CHECK(format_double(0.1) == "0.10000000000000001");
    CHECK(format_double(1.0) == "1");
    CHECK(format_double(NAN) == "nan");
    CHECK(format_double(-INFINITY) == "-inf");
}
