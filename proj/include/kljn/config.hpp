#pragma once

#include "kljn/harness.hpp"

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace kljn {

struct SweepSpec {
    SweepParameter parameter = SweepParameter::dc_gap;
    std::vector<double> values;
};

struct RunConfig {
    Experiment experiment;
    RunSettings run;
    std::optional<SweepSpec> sweep;
};

/// Every problem found in a configuration document, each prefixed with the
/// offending field path ("alice.r_low_ohm: ...").
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(std::vector<std::string> violations);
    const std::vector<std::string>& violations() const { return violations_; }

private:
    std::vector<std::string> violations_;
};

/// Default experiment: R_L = 1 kOhm, R_H = 10 kOhm, D = 1e-6 V^2/Ohm,
/// 2000 samples per BEP, U_DCA = +5 mV, U_DCB = -5 mV.
Experiment default_experiment();

/// Parses and validates a JSON document; all defaults are materialized.
/// Throws ConfigError on syntax or schema violations.
RunConfig parse_config(std::string_view text);

/// Re-checks the semantic invariants after command-line overrides.
void validate_config(const RunConfig& config);

}  // namespace kljn
