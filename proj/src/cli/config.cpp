#include "kljn/config.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <initializer_list>

namespace kljn {

using nlohmann::json;

namespace {

std::string join(const std::vector<std::string>& parts, std::string_view sep)
{
    std::string out;
    for (const auto& p : parts) {
        if (!out.empty())
            out += sep;
        out += p;
    }
    return out;
}

/// Walks one JSON object, recording violations against dotted field paths.
class Section {
public:
    Section(const json* node, std::string path, std::vector<std::string>& errors)
        : node_(node), path_(std::move(path)), errors_(errors)
    {
        if (node_ && !node_->is_object()) {
            fail(path_, "must be an object");
            node_ = nullptr;
        }
    }

    void allow(std::initializer_list<std::string_view> keys) const
    {
        if (!node_)
            return;
        for (const auto& [k, v] : node_->items()) {
            if (std::find(keys.begin(), keys.end(), k) == keys.end())
                fail(field(k), "unknown field");
        }
    }

    const json* get(std::string_view key) const
    {
        if (!node_)
            return nullptr;
        auto it = node_->find(std::string(key));
        return it == node_->end() ? nullptr : &*it;
    }

    Section sub(std::string_view key) const { return {get(key), field(key), errors_}; }

    void number(std::string_view key, double& out) const
    {
        if (const json* v = get(key)) {
            if (!v->is_number())
                return fail(field(key), "must be a number");
            out = v->get<double>();
            if (!std::isfinite(out))
                fail(field(key), "must be finite");
        }
    }

    void optional_number(std::string_view key, std::optional<double>& out) const
    {
        if (const json* v = get(key)) {
            if (v->is_null())
                return;
            double x = 0.0;
            number(key, x);
            out = x;
        }
    }

    template <class Int>
    void integer(std::string_view key, Int& out) const
    {
        if (const json* v = get(key)) {
            if (!v->is_number_integer() || (v->is_number_integer() && !v->is_number_unsigned() &&
                                            v->get<std::int64_t>() < 0))
                return fail(field(key), "must be a non-negative integer");
            out = static_cast<Int>(v->get<std::uint64_t>());
        }
    }

    void boolean(std::string_view key, bool& out) const
    {
        if (const json* v = get(key)) {
            if (!v->is_boolean())
                return fail(field(key), "must be true or false");
            out = v->get<bool>();
        }
    }

    std::optional<std::string> string(std::string_view key) const
    {
        if (const json* v = get(key)) {
            if (!v->is_string()) {
                fail(field(key), "must be a string");
                return std::nullopt;
            }
            return v->get<std::string>();
        }
        return std::nullopt;
    }

    std::string field(std::string_view key) const
    {
        return path_.empty() ? std::string(key) : path_ + "." + std::string(key);
    }

    void fail(const std::string& path, const std::string& msg) const
    {
        errors_.push_back(path + ": " + msg);
    }

private:
    const json* node_;
    std::string path_;
    std::vector<std::string>& errors_;
};

void read_party(const Section& s, PartyConfig& party)
{
    s.allow({"r_low_ohm", "r_high_ohm", "dc_volt"});
    s.number("r_low_ohm", party.r_low);
    s.number("r_high_ohm", party.r_high);
    s.number("dc_volt", party.dc_volt);
}

void read_emulation(const Section& s, Emulation& e)
{
    s.allow({"assumed", "emulated"});
    auto read = [&](std::string_view key, Choice& out) {
        if (auto text = s.string(key)) {
            if (auto c = parse_choice(*text))
                out = *c;
            else
                s.fail(s.field(key), "must be \"L\" or \"H\"");
        }
    };
    read("assumed", e.assumed_party);
    read("emulated", e.emulated);
}

void read_commitment(const Section& scenario, ScenarioConfig& out)
{
    const json* node = scenario.get("committed_emulation");
    if (!node || node->is_null())
        return;
    const std::string path = scenario.field("committed_emulation");
    if (node->is_string()) {
        if (node->get<std::string>() == "random")
            out.committed_emulation = CommitmentPolicy{};
        else
            scenario.fail(path, "must be \"random\" or an object with toward_alice/toward_bob");
        return;
    }
    if (!node->is_object()) {
        scenario.fail(path, "must be \"random\" or an object with toward_alice/toward_bob");
        return;
    }
    if (!node->contains("toward_alice") || !node->contains("toward_bob"))
        scenario.fail(path, "needs both toward_alice and toward_bob");
    auto c = scenario.sub("committed_emulation");
    c.allow({"toward_alice", "toward_bob"});
    CommitmentPolicy policy;
    policy.random = false;
    read_emulation(c.sub("toward_alice"), policy.toward_alice);
    read_emulation(c.sub("toward_bob"), policy.toward_bob);
    out.committed_emulation = policy;
}

void read_abort_on(const Section& s, DetectorSet& set)
{
    const json* node = s.get("abort_on");
    if (!node)
        return;
    const std::string path = s.field("abort_on");
    if (!node->is_array()) {
        s.fail(path, "must be an array of \"instant\", \"dc\", \"ac\"");
        return;
    }
    set = {false, false, false};
    for (const auto& item : *node) {
        const std::string name = item.is_string() ? item.get<std::string>() : std::string();
        if (name == "instant")
            set.instant = true;
        else if (name == "dc")
            set.dc = true;
        else if (name == "ac")
            set.ac = true;
        else
            s.fail(path, "unknown detector (allowed: instant, dc, ac)");
    }
}

void read_horizons(const Section& s, std::vector<std::size_t>& out)
{
    const json* node = s.get("horizons");
    if (!node)
        return;
    const std::string path = s.field("horizons");
    if (!node->is_array() || node->empty()) {
        s.fail(path, "must be a non-empty array of positive integers");
        return;
    }
    out.clear();
    for (const auto& item : *node) {
        if (!item.is_number_unsigned() || item.get<std::uint64_t>() == 0) {
            s.fail(path, "must be a non-empty array of positive integers");
            return;
        }
        out.push_back(item.get<std::size_t>());
    }
}

void semantic_checks(const RunConfig& cfg, std::vector<std::string>& errors)
{
    const auto& ex = cfg.experiment;
    const auto& ph = ex.physics;
    if (!(ph.noise_scale_D > 0.0))
        errors.push_back("physics.noise_scale_D: must be > 0");
    if (ph.samples_per_bep < 2)
        errors.push_back("physics.samples_per_bep: must be >= 2");
    if (!(ph.measurement_noise_rms >= 0.0))
        errors.push_back("detectors.measurement_noise_rms: must be >= 0");
    for (auto [name, party] : {std::pair{"alice", &ex.parties.alice}, {"bob", &ex.parties.bob}}) {
        const std::string p(name);
        if (!(party->r_low > 0.0))
            errors.push_back(p + ".r_low_ohm: must be > 0");
        if (!(party->r_low < party->r_high))
            errors.push_back(p + ".r_low_ohm: must be < " + p + ".r_high_ohm");
    }
    try {
        ex.scenario.validate();
    } catch (const std::invalid_argument& e) {
        std::string msg = e.what();
        const auto sp = msg.find(' ');
        errors.push_back(msg.substr(0, sp) + ":" + msg.substr(sp));
    }
    if (ex.detectors.epsilon && !(*ex.detectors.epsilon > 0.0))
        errors.push_back("detectors.epsilon: must be > 0");
    if (!(ex.detectors.kappa > 0.0))
        errors.push_back("detectors.kappa: must be > 0");
    if (cfg.run.trials == 0)
        errors.push_back("run.trials: must be >= 1");
    if (cfg.run.target_bits == 0)
        errors.push_back("run.target_bits: must be >= 1");
}

}  // namespace

ConfigError::ConfigError(std::vector<std::string> violations)
    : std::runtime_error("invalid configuration:\n  " + join(violations, "\n  ")),
      violations_(std::move(violations))
{
}

Experiment default_experiment()
{
    Experiment ex;
    ex.parties.alice = {1e3, 1e4, +5e-3};
    ex.parties.bob = {1e3, 1e4, -5e-3};
    return ex;
}

void validate_config(const RunConfig& config)
{
    std::vector<std::string> errors;
    semantic_checks(config, errors);
    if (!errors.empty())
        throw ConfigError(std::move(errors));
}

RunConfig parse_config(std::string_view text)
{
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError({std::string("syntax: ") + e.what()});
    }

    std::vector<std::string> errors;
    RunConfig cfg;
    cfg.experiment = default_experiment();
    auto& ex = cfg.experiment;

    Section root(&doc, "", errors);
    root.allow({"physics", "alice", "bob", "scenario", "detectors", "run", "sweep"});

    auto physics = root.sub("physics");
    physics.allow({"noise_scale_D", "samples_per_bep"});
    physics.number("noise_scale_D", ex.physics.noise_scale_D);
    physics.integer("samples_per_bep", ex.physics.samples_per_bep);

    read_party(root.sub("alice"), ex.parties.alice);
    read_party(root.sub("bob"), ex.parties.bob);

    auto scenario = root.sub("scenario");
    scenario.allow({"variant", "dc_compensation", "committed_emulation", "injection_rms_amp",
                    "series_dc_volt", "eve_knows_dc"});
    if (auto v = scenario.string("variant")) {
        if (auto parsed = parse_variant(*v))
            ex.scenario.variant = *parsed;
        else
            errors.push_back("scenario.variant: unknown variant \"" + *v +
                             "\" (allowed: " + variant_names() + ")");
    }
    scenario.boolean("dc_compensation", ex.scenario.dc_compensation);
    scenario.number("injection_rms_amp", ex.scenario.injection_rms);
    scenario.number("series_dc_volt", ex.scenario.series_dc_volt);
    scenario.boolean("eve_knows_dc", ex.scenario.eve_knows_dc);
    read_commitment(scenario, ex.scenario);
    // A compensated twin-voltage attack needs some commitment; default to
    // Eve's best blind policy.
    if (ex.scenario.variant == Variant::twin_voltage && ex.scenario.dc_compensation &&
        !ex.scenario.committed_emulation)
        ex.scenario.committed_emulation = CommitmentPolicy{};

    auto detectors = root.sub("detectors");
    detectors.allow({"epsilon", "kappa", "measurement_noise_rms", "abort_on"});
    detectors.optional_number("epsilon", ex.detectors.epsilon);
    detectors.number("kappa", ex.detectors.kappa);
    detectors.number("measurement_noise_rms", ex.physics.measurement_noise_rms);
    read_abort_on(detectors, ex.detectors.abort_on);

    auto run = root.sub("run");
    run.allow({"trials", "seed", "target_bits", "horizons", "mode", "threads"});
    run.integer("trials", cfg.run.trials);
    run.integer("seed", cfg.run.seed);
    run.integer("target_bits", cfg.run.target_bits);
    run.integer("threads", cfg.run.threads);
    read_horizons(run, cfg.run.horizons);
    if (auto mode = run.string("mode")) {
        if (*mode == "bep")
            cfg.run.mode = RunMode::bep;
        else if (*mode == "key")
            cfg.run.mode = RunMode::key;
        else
            errors.push_back("run.mode: must be \"bep\" or \"key\"");
    }

    if (root.get("sweep")) {
        auto sw = root.sub("sweep");
        sw.allow({"parameter", "values"});
        SweepSpec spec;
        if (auto p = sw.string("parameter")) {
            if (auto parsed = parse_sweep_parameter(*p))
                spec.parameter = *parsed;
            else
                errors.push_back("sweep.parameter: unknown parameter \"" + *p +
                                 "\" (allowed: dc_gap, injection_rms, samples_per_bep, epsilon, "
                                 "kappa)");
        } else {
            errors.push_back("sweep.parameter: required");
        }
        const json* values = sw.get("values");
        if (!values || !values->is_array() || values->empty()) {
            errors.push_back("sweep.values: must be a non-empty array of numbers");
        } else {
            for (const auto& v : *values) {
                if (!v.is_number()) {
                    errors.push_back("sweep.values: must be a non-empty array of numbers");
                    break;
                }
                spec.values.push_back(v.get<double>());
            }
        }
        cfg.sweep = std::move(spec);
    }

    semantic_checks(cfg, errors);
    if (!errors.empty())
        throw ConfigError(std::move(errors));
    return cfg;
}

}  // namespace kljn
