#pragma once

// Command-line front end: spectrum tables, wavefunction samples, oracle
// eigenvalues, field maps and the self-verification report.

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "dirac_ps/spectra.hpp"
#include "dirac_ps/verify.hpp"

namespace dirac_ps::cli {

inline constexpr const char* kProgramName = "dirac-ps";
inline constexpr const char* kVersion = "1.0.0";

enum class Command { spectrum, wavefunction, oracle, verify, fields };
enum class Format { csv, json };

/// Exit codes.
enum ExitCode : int { kOk = 0, kVerificationFailed = 1, kConfigError = 2, kSolverError = 3 };

struct RunConfig {
    Command command = Command::spectrum;
    spectra::SpectrumParams params;
    std::optional<double> current; ///< when set, omega = 2 * current
    int n_max = 2;
    int k_max = 2;
    int ntilde_min = 0;
    int ntilde_max = 0;
    std::optional<double> grid_h;    ///< command-specific default when absent
    std::optional<double> grid_rmax; ///< command-specific default when absent
    std::string potential = "ps-log";
    double charge = 0.0;
    Format format = Format::csv;
    std::string out; ///< empty: stdout
    std::map<std::string, double> tolerances;
    std::uint64_t seed = 20240601;

    /// Effective physical parameters (current folded into omega), validated.
    [[nodiscard]] spectra::SpectrumParams effective_params() const;
    /// Throws DomainError naming the violated invariant.
    void validate() const;
};

/// monostate renders as an empty CSV field and JSON null.
using Cell = std::variant<std::monostate, long long, double, std::string, bool>;

struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;
};

struct Report {
    Command command = Command::spectrum;
    Table table;                                 ///< tabular commands
    std::vector<verify::CheckResult> checks;     ///< verify
    std::vector<std::string> notes;
    [[nodiscard]] bool all_passed() const;
};

[[nodiscard]] std::string command_name(Command c);
[[nodiscard]] std::string format_double(double v); ///< %.17g, "nan"/"inf" spelled out

[[nodiscard]] Report run_spectrum(const RunConfig& config);
[[nodiscard]] Report run_wavefunction(const RunConfig& config);
[[nodiscard]] Report run_oracle(const RunConfig& config);
[[nodiscard]] Report run_fields(const RunConfig& config);
/// options.params is replaced by the config's effective parameters.
[[nodiscard]] Report run_verify(const RunConfig& config, verify::VerifyOptions options = {});
[[nodiscard]] Report run(const RunConfig& config);

void write_csv(const Report& report, std::ostream& out);
void write_json(const Report& report, const RunConfig& config, std::ostream& out);

/// Parses argv into a RunConfig. Throws DomainError on invalid input; returns
/// nullopt when help or version output was requested (already printed).
[[nodiscard]] std::optional<RunConfig> parse_args(int argc, const char* const* argv, std::ostream& out);

/// Full program: parse, run, write. Returns an ExitCode.
int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace dirac_ps::cli
