#include "dirac_ps/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <future>
#include <iostream>
#include <sstream>
#include <tuple>

#include "dirac_ps/error.hpp"
#include "dirac_ps/fields_solution.hpp"
#include "dirac_ps/oracle.hpp"
#include "dirac_ps/specfun.hpp"

namespace dirac_ps::cli {

namespace {

using Json = nlohmann::ordered_json;

void require(bool ok, const std::string& message) {
    if (!ok) throw DomainError(message);
}

Cell opt_cell(const std::optional<double>& v) { return v ? Cell{*v} : Cell{}; }

oracle::ReducedPotential parse_potential(const std::string& text, double charge) {
    const double charge_term = 2.0 * charge;
    if (text == "ps-log") return oracle::ReducedPotential::ps_log(charge_term);
    if (text == "none") return oracle::ReducedPotential::none();
    const std::string prefix = "inverse-radius:";
    if (text.rfind(prefix, 0) == 0) {
        const std::string value = text.substr(prefix.size());
        std::size_t used = 0;
        double alpha = 0.0;
        try {
            alpha = std::stod(value, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        require(used == value.size() && !value.empty(), "potential: cannot parse alpha in '" + text + "'");
        return oracle::ReducedPotential::inverse_radius(alpha, charge_term);
    }
    throw DomainError("potential must be ps-log, none or inverse-radius:<alpha>, got '" + text + "'");
}

} // namespace

std::string command_name(Command c) {
    switch (c) {
    case Command::spectrum: return "spectrum";
    case Command::wavefunction: return "wavefunction";
    case Command::oracle: return "oracle";
    case Command::verify: return "verify";
    case Command::fields: return "fields";
    }
    return "unknown";
}

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

spectra::SpectrumParams RunConfig::effective_params() const {
    spectra::SpectrumParams p = params;
    if (current) p.omega = 2.0 * *current;
    p.validate();
    return p;
}

void RunConfig::validate() const {
    (void)effective_params();
    require(n_max >= 0, "n-max must be >= 0");
    require(k_max >= 0, "k-max must be >= 0");
    require(ntilde_min <= ntilde_max, "ntilde range must satisfy min <= max");
    if (grid_h) require(*grid_h > 0.0 && std::isfinite(*grid_h), "grid-h must be positive");
    if (grid_rmax) require(*grid_rmax > 0.0 && std::isfinite(*grid_rmax), "grid-rmax must be positive");
    require(std::isfinite(charge), "charge must be finite");
    (void)parse_potential(potential, charge);
}

bool Report::all_passed() const {
    return std::all_of(checks.begin(), checks.end(), [](const auto& c) { return c.passed; });
}

Report run_spectrum(const RunConfig& config) {
    config.validate();
    const auto p = config.effective_params();
    const double lt = spectra::coupling_lambda_tilde(p);
    std::vector<std::tuple<int, int, int, int>> keys; // (N, k, Ntilde, n)
    for (int n = 0; n <= config.n_max; ++n)
        for (int k = 0; k <= config.k_max; ++k)
            for (int nt = config.ntilde_min; nt <= config.ntilde_max; ++nt)
                keys.emplace_back(spectra::principal_number(n, k), k, nt, n);
    std::sort(keys.begin(), keys.end());

    Report r;
    r.command = Command::spectrum;
    r.table.columns = {"n", "k", "N", "Ntilde", "kappa", "E_relativistic", "E_quasirel", "E_nonrel_shifted"};
    for (auto [N, k, nt, n] : keys) {
        const double kappa = spectra::quantized_kappa(p.L, nt);
        r.table.rows.push_back({Cell{static_cast<long long>(n)}, Cell{static_cast<long long>(k)},
                                Cell{static_cast<long long>(N)}, Cell{static_cast<long long>(nt)}, Cell{kappa},
                                Cell{spectra::relativistic_energy(p.m, lt, kappa, N)},
                                Cell{spectra::quasirel_energy(p.m, lt, kappa, N)},
                                Cell{spectra::nonrel_energy_shifted(p.m, lt, kappa, N)}});
    }
    if (lt == 0.0) r.notes.push_back("lambda~ = 0: free particle, E = sqrt(m^2 + kappa^2)");
    return r;
}

Report run_wavefunction(const RunConfig& config) {
    config.validate();
    const auto p = config.effective_params();
    const double h = config.grid_h.value_or(0.05);
    Report r;
    r.command = Command::wavefunction;
    r.table.columns = {"n", "k", "Ntilde", "r", "rho", "c1", "c2", "c3", "c4", "density"};
    for (int n = 0; n <= config.n_max; ++n) {
        for (int k = 0; k <= config.k_max; ++k) {
            for (int nt = config.ntilde_min; nt <= config.ntilde_max; ++nt) {
                const auto sol = fields::assemble_bispinor(p, n, k, nt);
                const double rmax = config.grid_rmax.value_or(10.0 * sol.N);
                const long long samples = static_cast<long long>(std::floor(rmax / h + 1e-9));
                require(samples <= 200000, "wavefunction: too many samples; raise grid-h or lower grid-rmax");
                const double unit = sol.normalization / sol.scale_factor;
                for (long long i = 1; i <= samples; ++i) {
                    const double rr = h * static_cast<double>(i);
                    const double rho = rr / sol.scale_factor;
                    std::vector<Cell> row{Cell{static_cast<long long>(n)}, Cell{static_cast<long long>(k)},
                                          Cell{static_cast<long long>(nt)}, Cell{rr}, Cell{rho}};
                    for (const auto& c : sol.components) row.emplace_back(unit * evaluate(c, rr));
                    row.emplace_back(fields::probability_density(sol, rho, 0.0));
                    r.table.rows.push_back(std::move(row));
                }
            }
        }
    }
    r.notes.push_back("c = (phi1, -s phi2, eta1, -s eta2) scaled to unit L2 norm in r, s = sign(lambda~)");
    return r;
}

namespace {

struct SectorResult {
    std::vector<double> eigenvalues;
};

} // namespace

Report run_oracle(const RunConfig& config) {
    config.validate();
    const auto potential = parse_potential(config.potential, config.charge);
    const bool analytic = potential.kind == oracle::ReducedPotential::Kind::ps_log && config.charge == 0.0;
    const double h = config.grid_h.value_or(0.01);
    const int count = config.n_max + 1;

    std::vector<std::future<SectorResult>> jobs;
    for (int k = 0; k <= config.k_max; ++k) {
        const double rmax = config.grid_rmax.value_or(40.0 * spectra::principal_number(config.n_max, k));
        const auto grid = oracle::RadialGrid::with_extent(h, rmax);
        require(2 * grid.points >= count, "oracle: grid too small for the requested levels");
        jobs.push_back(std::async(std::launch::async, [k, grid, potential, count] {
            const auto hm = oracle::discretize(k, potential, grid);
            return SectorResult{oracle::lowest_eigenvalues(hm, count)};
        }));
    }

    Report r;
    r.command = Command::oracle;
    r.table.columns = {"k", "level", "eigenvalue", "target", "deviation", "bound"};
    for (int k = 0; k <= config.k_max; ++k) {
        const auto result = jobs[k].get();
        bool any_bound = false;
        for (int n = 0; n < count; ++n) {
            const double ev = result.eigenvalues[n];
            const bool bound = ev < 0.0;
            any_bound = any_bound || bound;
            std::optional<double> target, deviation;
            if (analytic) {
                target = spectra::reduced_eigenvalue(n, k);
                deviation = ev - *target;
            }
            r.table.rows.push_back({Cell{static_cast<long long>(k)}, Cell{static_cast<long long>(n)}, Cell{ev},
                                    opt_cell(target), opt_cell(deviation), Cell{bound}});
        }
        if (!any_bound) r.notes.push_back("sector k=" + std::to_string(k) + ": no bound states");
    }
    if (!analytic) r.notes.push_back("exploratory potential " + potential.label() + ": no analytic targets");
    return r;
}

Report run_fields(const RunConfig& config) {
    config.validate();
    const auto p = config.effective_params();
    const double h = config.grid_h.value_or(0.5);
    const double extent = config.grid_rmax.value_or(2.0);
    const long long steps = static_cast<long long>(std::floor(extent / h + 1e-9));
    require(steps <= 1000, "fields: too many grid points; raise grid-h or lower grid-rmax");
    Report r;
    r.command = Command::fields;
    r.table.columns = {"x1", "x2", "E1", "E2", "E3", "B1", "B2", "B3", "invariant_difference", "invariant_product"};
    for (long long i = -steps; i <= steps; ++i) {
        for (long long j = -steps; j <= steps; ++j) {
            if (i == 0 && j == 0) continue;
            const double x1 = h * static_cast<double>(i), x2 = h * static_cast<double>(j);
            const auto f = fields::field_strengths(p.omega, x1, x2);
            r.table.rows.push_back({Cell{x1}, Cell{x2}, Cell{f.E_vec[0]}, Cell{f.E_vec[1]}, Cell{f.E_vec[2]},
                                    Cell{f.B_vec[0]}, Cell{f.B_vec[1]}, Cell{f.B_vec[2]},
                                    Cell{f.invariant_difference()}, Cell{f.invariant_product()}});
        }
    }
    r.notes.push_back("filament at x1 = x2 = 0 omitted");
    return r;
}

Report run_verify(const RunConfig& config, verify::VerifyOptions options) {
    config.validate();
    options.params = config.effective_params();
    options.seed = config.seed;
    for (const auto& [k, v] : config.tolerances) options.tolerances[k] = v;
    Report r;
    r.command = Command::verify;
    r.checks = verify::run_checks(options);
    return r;
}

Report run(const RunConfig& config) {
    switch (config.command) {
    case Command::spectrum: return run_spectrum(config);
    case Command::wavefunction: return run_wavefunction(config);
    case Command::oracle: return run_oracle(config);
    case Command::verify: return run_verify(config);
    case Command::fields: return run_fields(config);
    }
    throw DomainError("unknown command");
}

namespace {

std::string csv_escape(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

std::string cell_text(const Cell& c) {
    struct Visitor {
        std::string operator()(std::monostate) const { return ""; }
        std::string operator()(long long v) const { return std::to_string(v); }
        std::string operator()(double v) const { return format_double(v); }
        std::string operator()(const std::string& v) const { return csv_escape(v); }
        std::string operator()(bool v) const { return v ? "true" : "false"; }
    };
    return std::visit(Visitor{}, c);
}

Json cell_json(const Cell& c) {
    struct Visitor {
        Json operator()(std::monostate) const { return nullptr; }
        Json operator()(long long v) const { return v; }
        Json operator()(double v) const { return std::isfinite(v) ? Json(v) : Json(nullptr); }
        Json operator()(const std::string& v) const { return v; }
        Json operator()(bool v) const { return v; }
    };
    return std::visit(Visitor{}, c);
}

// nlohmann prints the shortest round-trip form; reports use %.17g throughout.
void emit(const Json& j, std::ostream& out, int level) {
    const std::string pad(2 * (level + 1), ' ');
    const std::string close(2 * level, ' ');
    switch (j.type()) {
    case Json::value_t::object: {
        if (j.empty()) {
            out << "{}";
            return;
        }
        out << "{\n";
        bool first = true;
        for (const auto& [key, value] : j.items()) {
            if (!first) out << ",\n";
            first = false;
            out << pad << Json(key).dump() << ": ";
            emit(value, out, level + 1);
        }
        out << "\n" << close << "}";
        return;
    }
    case Json::value_t::array: {
        if (j.empty()) {
            out << "[]";
            return;
        }
        out << "[\n";
        bool first = true;
        for (const auto& value : j) {
            if (!first) out << ",\n";
            first = false;
            out << pad;
            emit(value, out, level + 1);
        }
        out << "\n" << close << "]";
        return;
    }
    case Json::value_t::number_float: {
        const double v = j.get<double>();
        if (!std::isfinite(v)) {
            out << "null";
        } else {
            out << format_double(v);
        }
        return;
    }
    default:
        out << j.dump();
        return;
    }
}

Json config_json(const RunConfig& c) {
    const auto p = c.effective_params();
    Json tol = Json::object();
    for (const auto& [k, v] : c.tolerances) tol[k] = v;
    Json j;
    j["mass"] = p.m;
    j["g_factor"] = p.g;
    j["magneton"] = p.mu0;
    j["omega"] = p.omega;
    j["current"] = c.current ? Json(*c.current) : Json(nullptr);
    j["box_length"] = p.L;
    j["lambda_tilde"] = spectra::coupling_lambda_tilde(p);
    j["n_max"] = c.n_max;
    j["k_max"] = c.k_max;
    j["ntilde"] = Json::array({c.ntilde_min, c.ntilde_max});
    j["grid_h"] = c.grid_h ? Json(*c.grid_h) : Json(nullptr);
    j["grid_rmax"] = c.grid_rmax ? Json(*c.grid_rmax) : Json(nullptr);
    j["potential"] = c.potential;
    j["charge"] = c.charge;
    j["format"] = c.format == Format::csv ? "csv" : "json";
    j["tolerances"] = tol;
    j["seed"] = c.seed;
    return j;
}

} // namespace

void write_csv(const Report& report, std::ostream& out) {
    if (report.command == Command::verify) {
        out << "name,passed,measured,tolerance,detail\n";
        for (const auto& c : report.checks) {
            out << csv_escape(c.name) << ',' << (c.passed ? "true" : "false") << ',' << format_double(c.measured)
                << ',' << format_double(c.tolerance) << ',' << csv_escape(c.detail) << '\n';
        }
        return;
    }
    for (std::size_t i = 0; i < report.table.columns.size(); ++i) {
        out << (i ? "," : "") << report.table.columns[i];
    }
    out << '\n';
    for (const auto& row : report.table.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            out << (i ? "," : "") << cell_text(row[i]);
        }
        out << '\n';
    }
}

void write_json(const Report& report, const RunConfig& config, std::ostream& out) {
    Json doc;
    Json meta;
    meta["program"] = kProgramName;
    meta["version"] = kVersion;
    meta["command"] = command_name(report.command);
    meta["config"] = config_json(config);
    meta["versions"] = {{"dirac_ps", kVersion}, {"cli11", CLI11_VERSION}, {"nlohmann_json", "3.11.3"}};
    meta["notes"] = Json::array();
    for (const auto& n : report.notes) meta["notes"].push_back(n);
    if (report.command == Command::verify) meta["passed"] = report.all_passed();
    doc["meta"] = meta;

    Json rows = Json::array();
    for (const auto& row : report.table.rows) {
        Json obj = Json::object();
        for (std::size_t i = 0; i < row.size(); ++i) obj[report.table.columns[i]] = cell_json(row[i]);
        rows.push_back(obj);
    }
    doc["rows"] = rows;

    Json checks = Json::array();
    for (const auto& c : report.checks) {
        Json m = Json::object();
        for (const auto& [k, v] : c.metrics) m[k] = v;
        checks.push_back({{"name", c.name},
                          {"passed", c.passed},
                          {"measured", c.measured},
                          {"tolerance", c.tolerance},
                          {"detail", c.detail},
                          {"metrics", m}});
    }
    doc["checks"] = checks;
    emit(doc, out, 0);
    out << '\n';
}

std::optional<RunConfig> parse_args(int argc, const char* const* argv, std::ostream& out) {
    RunConfig cfg;
    CLI::App app{"Exact bound states of a neutral Dirac-Pauli fermion in a filament field", kProgramName};
    app.set_version_flag("--version", kVersion);
    app.set_config("--config", "", "Read options from a key=value file");
    app.require_subcommand(1);

    double current = 0.0;
    std::string ntilde = "0";
    std::string format = "csv";
    std::vector<std::string> tols;
    double grid_h = 0.0, grid_rmax = 0.0;

    app.add_option("--mass", cfg.params.m, "Fermion mass m")->capture_default_str();
    app.add_option("--g-factor", cfg.params.g, "Lande factor g")->capture_default_str();
    app.add_option("--magneton", cfg.params.mu0, "Magneton mu0")->capture_default_str();
    auto* omega = app.add_option("--omega", cfg.params.omega, "Potential coupling omega")->capture_default_str();
    auto* cur = app.add_option("--current", current, "Filament current j (omega = 2 j)");
    omega->excludes(cur);
    app.add_option("--box-length", cfg.params.L, "Period L along x3")->capture_default_str();
    app.add_option("--n-max", cfg.n_max, "Largest radial quantum number")->capture_default_str();
    app.add_option("--k-max", cfg.k_max, "Largest angular sector")->capture_default_str();
    app.add_option("--ntilde", ntilde, "Longitudinal mode Ntilde or range a:b")->capture_default_str();
    auto* gh = app.add_option("--grid-h", grid_h, "Grid spacing (command-specific default)");
    auto* gr = app.add_option("--grid-rmax", grid_rmax, "Grid extent (command-specific default)");
    app.add_option("--potential", cfg.potential, "ps-log | none | inverse-radius:<alpha>")->capture_default_str();
    app.add_option("--charge", cfg.charge, "Charge e (adds 2 e phi)")->capture_default_str();
    app.add_option("--format", format, "csv | json")->check(CLI::IsMember({"csv", "json"}))->capture_default_str();
    app.add_option("--out", cfg.out, "Output path (default stdout)");
    app.add_option("--tol", tols, "Tolerance override name=value (repeatable)");
    app.add_option("--seed", cfg.seed, "Seed for randomized checks")->capture_default_str();

    const std::vector<std::pair<Command, std::string>> commands{
        {Command::spectrum, "Energy levels for all quantum numbers in range"},
        {Command::wavefunction, "Radial samples of the normalized bispinors"},
        {Command::oracle, "Finite-difference eigenvalues per sector"},
        {Command::verify, "Run every invariant check"},
        {Command::fields, "Electric and magnetic fields on a square grid"}};
    std::vector<std::pair<Command, CLI::App*>> subs;
    for (const auto& [c, help] : commands) {
        auto* sub = app.add_subcommand(command_name(c), help);
        sub->fallthrough();
        subs.emplace_back(c, sub);
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        app.exit(e, out, out);
        return std::nullopt;
    } catch (const CLI::ParseError& e) {
        throw DomainError(std::string("command line: ") + e.what());
    }

    for (const auto& [c, s] : subs) {
        if (s->parsed()) cfg.command = c;
    }
    if (cur->count()) cfg.current = current;
    if (gh->count()) cfg.grid_h = grid_h;
    if (gr->count()) cfg.grid_rmax = grid_rmax;
    cfg.format = format == "json" ? Format::json : Format::csv;

    auto parse_int = [](const std::string& s) {
        std::size_t used = 0;
        int v = 0;
        try {
            v = std::stoi(s, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        require(used == s.size() && !s.empty(), "ntilde: cannot parse '" + s + "'");
        return v;
    };
    if (const auto colon = ntilde.find(':'); colon != std::string::npos) {
        cfg.ntilde_min = parse_int(ntilde.substr(0, colon));
        cfg.ntilde_max = parse_int(ntilde.substr(colon + 1));
    } else {
        cfg.ntilde_min = cfg.ntilde_max = parse_int(ntilde);
    }
    for (const auto& t : tols) {
        const auto eq = t.find('=');
        require(eq != std::string::npos && eq > 0, "tol: expected name=value, got '" + t + "'");
        const std::string name = t.substr(0, eq);
        require(verify::default_tolerances().contains(name), "tol: unknown tolerance name '" + name + "'");
        std::size_t used = 0;
        double v = 0.0;
        const std::string value = t.substr(eq + 1);
        try {
            v = std::stod(value, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        require(used == value.size() && !value.empty() && std::isfinite(v), "tol: bad value in '" + t + "'");
        cfg.tolerances[name] = v;
    }
    cfg.validate();
    return cfg;
}

int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    try {
        const auto cfg = parse_args(argc, argv, out);
        if (!cfg) return kOk;
        const Report report = run(*cfg);

        std::ofstream file;
        std::ostream* sink = &out;
        if (!cfg->out.empty()) {
            file.open(cfg->out, std::ios::binary | std::ios::trunc);
            if (!file) {
                err << kProgramName << ": cannot write output file '" << cfg->out << "'\n";
                return kConfigError;
            }
            sink = &file;
        }
        if (cfg->format == Format::json) {
            write_json(report, *cfg, *sink);
        } else {
            write_csv(report, *sink);
            for (const auto& n : report.notes) err << "note: " << n << '\n';
        }
        sink->flush();
        if (report.command == Command::verify && !report.all_passed()) {
            for (const auto& c : report.checks) {
                if (!c.passed) err << kProgramName << ": check failed: " << c.name << '\n';
            }
            return kVerificationFailed;
        }
        return kOk;
    } catch (const DomainError& e) {
        err << kProgramName << ": invalid configuration: " << e.what() << '\n';
        return kConfigError;
    } catch (const std::exception& e) {
        err << kProgramName << ": numerical failure: " << e.what() << '\n';
        return kSolverError;
    }
}

} // namespace dirac_ps::cli
