#pragma once

// Command-line front end: the physics audit, CSV serialization and the
// run / validate / sweep subcommands.

#include "kljn/config.hpp"

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace kljn {

enum ExitCode : int { kExitOk = 0, kExitConfig = 1, kExitIo = 2, kExitValidation = 3 };

struct AuditRow {
    State state = State::LL;
    std::string quantity;  ///< var_i, var_u, dc_i, dc_u
    double analytic = 0.0;
    double simulated = 0.0;
    double relative_error = 0.0;
    bool pass = false;
};

struct AuditResult {
    std::vector<AuditRow> rows;
    double wall_seconds = 0.0;
    bool pass() const;
};

/// Simulates the intact loop in every state and compares the sample wire
/// statistics with the closed forms. DC errors are relative to
/// max(|analytic|, AC rms), since a zero baseline has no scale of its own.
/// variance_bias scales the synthesized noise variance (harness self-test).
AuditResult audit_physics(const Experiment& experiment, std::uint64_t seed,
                          std::size_t samples = 1'000'000, double tolerance = 0.01,
                          double variance_bias = 0.0);

/// Shortest decimal that round-trips, '.' separator whatever the locale.
std::string format_number(double x);

void write_report_csv(std::ostream& os, const DetectionReport& report);
void write_summary_csv(std::ostream& os, const DetectionReport& report);
void write_hidden_curve_csv(std::ostream& os, const DetectionReport& report);
void write_sweep_csv(std::ostream& os, SweepParameter parameter, std::span<const double> values,
                     std::span<const DetectionReport> reports);
void write_validation_csv(std::ostream& os, const AuditResult& audit);

/// Entry point shared by the executable and the tests; args excludes argv[0].
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace kljn
